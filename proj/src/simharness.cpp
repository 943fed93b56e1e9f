#include "dqest/simharness.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <mutex>
#include <thread>
#include <utility>

#include "dqest/errors.hpp"
#include "dqest/rng.hpp"

namespace dqest {

EllipticalModel ModelSpec::build() const {
  return EllipticalModel(family, Eigen::VectorXd::Zero(n), equicorr_sigma(n, r),
                         family == Family::STUDENT_T ? nu : 0.0);
}

void parallel_for(int count, int threads, const std::function<void(int)>& fn) {
  if (threads <= 0) {
    threads = static_cast<int>(std::thread::hardware_concurrency());
    if (threads <= 0) threads = 1;
  }
  threads = std::min(threads, count);
  if (threads <= 1) {
    for (int i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<int> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  auto worker = [&]() {
    for (;;) {
      const int i = next.fetch_add(1);
      if (i >= count) return;
      try {
        fn(i);
      } catch (...) {
        std::lock_guard<std::mutex> lock(error_mutex);
        if (!error) error = std::current_exception();
        return;
      }
    }
  };
  std::vector<std::thread> pool;
  pool.reserve(static_cast<std::size_t>(threads));
  for (int w = 0; w < threads; ++w) pool.emplace_back(worker);
  for (auto& th : pool) th.join();
  if (error) std::rethrow_exception(error);
}

namespace {

struct PluginBundle {
  Margins margins;
  DistributionPtr sumplug;
  JointSampler sampler;
};

PluginBundle make_plugins(const ModelSpec& spec, const std::optional<std::vector<double>>& shift) {
  const EllipticalModel model = spec.build();
  PluginBundle b;
  b.margins.reserve(static_cast<std::size_t>(spec.n));
  double shift_sum = 0.0;
  for (int i = 0; i < spec.n; ++i) {
    const double off = shift ? (*shift)[static_cast<std::size_t>(i)] : 0.0;
    shift_sum += off;
    if (off == 0.0) {
      b.margins.push_back(model.margin_plugin(i));
    } else {
      b.margins.push_back(std::make_shared<LocationScale>(model.standard_base(), off,
                                                          std::sqrt(model.sigma()(i, i))));
    }
  }
  b.sumplug = std::make_shared<LocationScale>(model.standard_base(), shift_sum,
                                              std::sqrt(model.sigma().sum()));
  if (shift) {
    std::vector<double> offsets = *shift;
    b.sampler = [model, offsets](std::int64_t n_draws, std::uint64_t seed) {
      LossSample raw = model.sample(n_draws, seed);
      Eigen::MatrixXd shifted = raw.data();
      for (Eigen::Index i = 0; i < shifted.cols(); ++i) {
        shifted.col(i).array() += offsets[static_cast<std::size_t>(i)];
      }
      return LossSample(std::move(shifted));
    };
  } else {
    b.sampler = model.sampler();
  }
  return b;
}

}  // namespace

double true_value_for(const ExperimentSpec& spec) {
  const EllipticalModel model = spec.model.build();
  const RiskLevel a(spec.alpha);
  switch (spec.estimator) {
    case IndexKind::DQ_VAR:
    case IndexKind::DQ_ES:
    case IndexKind::DQ_EX:
      // location invariant; shift is irrelevant
      return true_index_value(model, a, spec.estimator);
    case IndexKind::DR_VAR:
    case IndexKind::DR_ES: {
      if (!spec.shift) return true_dr(model);
      const PluginBundle b = make_plugins(spec.model, spec.shift);
      double denom = 0.0;
      for (const auto& m : b.margins) {
        denom += (spec.estimator == IndexKind::DR_VAR) ? m->var(spec.alpha) : m->es(spec.alpha);
      }
      if (denom == 0.0) throw ZeroDenominator("true DR undefined: marginal sum is zero");
      const double numer = (spec.estimator == IndexKind::DR_VAR) ? b.sumplug->var(spec.alpha)
                                                                 : b.sumplug->es(spec.alpha);
      return numer / denom;
    }
  }
  throw InvalidInput("unknown index kind");
}

double theory_sigma2_for(const ExperimentSpec& spec) {
  const PluginBundle b = make_plugins(spec.model, spec.shift);
  const RiskLevel a(spec.alpha);
  switch (spec.estimator) {
    case IndexKind::DQ_VAR:
      return sigma2_dq_var_iid(b.sampler, b.margins, *b.sumplug, a, spec.mc).sigma2;
    case IndexKind::DQ_ES:
      return sigma2_dq_es_iid(b.sampler, b.margins, *b.sumplug, a, spec.mc).sigma2;
    case IndexKind::DQ_EX:
      return sigma2_dq_ex_iid(b.sampler, b.margins, *b.sumplug, a, spec.mc).sigma2;
    case IndexKind::DR_VAR:
      return sigma2_dr(b.sampler, b.margins, *b.sumplug, a, RiskMeasureKind::VAR, spec.mc).sigma2;
    case IndexKind::DR_ES:
      return sigma2_dr(b.sampler, b.margins, *b.sumplug, a, RiskMeasureKind::ES, spec.mc).sigma2;
  }
  throw InvalidInput("unknown index kind");
}

Histogram make_histogram(const std::vector<double>& values) {
  Histogram h;
  if (values.empty()) return h;
  std::vector<double> sorted = values;
  std::sort(sorted.begin(), sorted.end());
  const double lo = sorted.front(), hi = sorted.back();
  const auto m = sorted.size();
  const double q1 = sorted[static_cast<std::size_t>(0.25 * static_cast<double>(m - 1))];
  const double q3 = sorted[static_cast<std::size_t>(0.75 * static_cast<double>(m - 1))];
  double width = 2.0 * (q3 - q1) * std::pow(static_cast<double>(m), -1.0 / 3.0);
  int bins = 1;
  if (width > 0.0 && hi > lo) {
    bins = std::max(1, static_cast<int>(std::ceil((hi - lo) / width)));
    bins = std::min(bins, 10000);
  }
  h.edges.resize(static_cast<std::size_t>(bins) + 1);
  const double span = (hi > lo) ? (hi - lo) : 1.0;
  for (int i = 0; i <= bins; ++i) {
    h.edges[static_cast<std::size_t>(i)] = lo + span * static_cast<double>(i) / bins;
  }
  h.counts.assign(static_cast<std::size_t>(bins), 0);
  for (double v : sorted) {
    auto idx = static_cast<int>((v - lo) / span * bins);
    idx = std::clamp(idx, 0, bins - 1);
    ++h.counts[static_cast<std::size_t>(idx)];
  }
  return h;
}

ExperimentResult run_histogram_experiment(const ExperimentSpec& spec) {
  if (spec.n_reps < 1) throw InvalidInput("n_reps must be >= 1");
  if (spec.n_samples < 2) throw InvalidInput("n_samples must be >= 2");
  if (spec.shift &&
      static_cast<int>(spec.shift->size()) != spec.model.n) {
    throw InvalidInput("shift length must match the model dimension");
  }

  const EllipticalModel model = spec.model.build();
  const RiskLevel a(spec.alpha);

  struct Slot {
    double value = 0.0;
    bool ok = false;
    std::string message;
  };
  std::vector<Slot> slots(static_cast<std::size_t>(spec.n_reps));

  parallel_for(spec.n_reps, spec.threads, [&](int k) {
    auto& slot = slots[static_cast<std::size_t>(k)];
    try {
      LossSample draw = model.sample(spec.n_samples,
                                     derive_seed(spec.seed, static_cast<std::uint64_t>(k)));
      if (spec.shift) {
        Eigen::MatrixXd shifted = draw.data();
        for (Eigen::Index i = 0; i < shifted.cols(); ++i) {
          shifted.col(i).array() += (*spec.shift)[static_cast<std::size_t>(i)];
        }
        draw = LossSample(std::move(shifted));
      }
      slot.value = estimate_index(draw, a, spec.estimator).value;
      slot.ok = true;
    } catch (const Error& e) {
      slot.message = e.what();
    }
  });

  ExperimentResult res;
  res.estimates.reserve(slots.size());
  for (int k = 0; k < spec.n_reps; ++k) {
    const auto& slot = slots[static_cast<std::size_t>(k)];
    if (slot.ok) {
      res.estimates.push_back(slot.value);
    } else {
      res.failed_reps.push_back(k);
      res.failure_messages.push_back(slot.message);
    }
  }

  res.true_value = true_value_for(spec);
  res.theory_sigma2 = theory_sigma2_for(spec);
  res.normal_overlay_mean = res.true_value;
  res.normal_overlay_var = res.theory_sigma2 / static_cast<double>(spec.n_samples);

  const auto m = res.estimates.size();
  if (m > 0) {
    double mean = 0.0;
    for (double v : res.estimates) mean += v;
    mean /= static_cast<double>(m);
    res.sample_mean = mean;
    if (m > 1) {
      double ss = 0.0;
      for (double v : res.estimates) ss += (v - mean) * (v - mean);
      res.sample_var_scaled =
          static_cast<double>(spec.n_samples) * ss / static_cast<double>(m - 1);
    }
  }
  res.histogram = make_histogram(res.estimates);
  return res;
}

std::vector<CurvePoint> run_variance_curve(const ExperimentSpec& base, SweepVar var,
                                           const std::vector<double>& grid) {
  if (grid.empty()) throw InvalidInput("sweep grid must be nonempty");
  std::vector<CurvePoint> out(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) {
    ExperimentSpec spec = base;
    switch (var) {
      case SweepVar::ALPHA: spec.alpha = grid[i]; break;
      case SweepVar::R: spec.model.r = grid[i]; break;
      case SweepVar::N: spec.model.n = static_cast<int>(grid[i]); break;
      case SweepVar::NU: spec.model.nu = grid[i]; break;
    }
    out[i] = {grid[i], theory_sigma2_for(spec)};
  }
  return out;
}

std::vector<DrShiftPoint> run_dr_shift_sweep(const EllipticalModel& model, RiskLevel a,
                                             const std::vector<double>& eps_grid,
                                             const MonteCarlo& mc) {
  const int n = model.dim();
  std::vector<DrShiftPoint> out;
  out.reserve(eps_grid.size());

  for (double eps : eps_grid) {
    DrShiftPoint pt;
    pt.eps = eps;
    for (const RiskMeasureKind measure : {RiskMeasureKind::VAR, RiskMeasureKind::ES}) {
      // Recenter every margin by its own risk measure, then shift by eps.
      Margins margins;
      margins.reserve(static_cast<std::size_t>(n));
      std::vector<double> offsets(static_cast<std::size_t>(n));
      double shift_sum = 0.0;
      for (int i = 0; i < n; ++i) {
        const auto base_margin = model.margin_plugin(i);
        const double phi = (measure == RiskMeasureKind::VAR) ? base_margin->var(a.value())
                                                             : base_margin->es(a.value());
        const double off = -phi + eps;
        offsets[static_cast<std::size_t>(i)] = off;
        shift_sum += off;
        margins.push_back(std::make_shared<LocationScale>(
            model.standard_base(), model.mu()[i] + off, std::sqrt(model.sigma()(i, i))));
      }
      const LocationScale sumplug(model.standard_base(), model.mu().sum() + shift_sum,
                                  std::sqrt(model.sigma().sum()));
      JointSampler sampler = [&model, offsets](std::int64_t n_draws, std::uint64_t seed) {
        LossSample raw = model.sample(n_draws, seed);
        Eigen::MatrixXd shifted = raw.data();
        for (Eigen::Index i = 0; i < shifted.cols(); ++i) {
          shifted.col(i).array() += offsets[static_cast<std::size_t>(i)];
        }
        return LossSample(std::move(shifted));
      };
      try {
        const double s2 = sigma2_dr(sampler, margins, sumplug, a, measure, mc).sigma2;
        if (measure == RiskMeasureKind::VAR) {
          pt.sigma2_var = s2;
        } else {
          pt.sigma2_es = s2;
        }
      } catch (const ZeroDenominator&) {
        if (measure == RiskMeasureKind::VAR) {
          pt.divergent_var = true;
        } else {
          pt.divergent_es = true;
        }
      }
    }
    out.push_back(pt);
  }
  return out;
}

double ks_statistic_vs_std_normal(std::vector<double> values) {
  if (values.empty()) throw InvalidInput("KS statistic needs at least one value");
  std::sort(values.begin(), values.end());
  const StdNormal normal;
  const double n = static_cast<double>(values.size());
  double d = 0.0;
  for (std::size_t i = 0; i < values.size(); ++i) {
    const double cdf = normal.cdf(values[i]);
    const double hi = static_cast<double>(i + 1) / n - cdf;
    const double lo = cdf - static_cast<double>(i) / n;
    d = std::max(d, std::max(hi, lo));
  }
  return d;
}

double ks_pvalue(double d, std::size_t n) {
  const double sn = std::sqrt(static_cast<double>(n));
  const double lambda = (sn + 0.12 + 0.11 / sn) * d;
  if (lambda < 1e-8) return 1.0;
  double sum = 0.0;
  for (int j = 1; j <= 100; ++j) {
    const double term = std::exp(-2.0 * lambda * lambda * j * j);
    sum += (j % 2 == 1 ? 1.0 : -1.0) * term;
    if (term < 1e-16) break;
  }
  return std::clamp(2.0 * sum, 0.0, 1.0);
}

}  // namespace dqest
