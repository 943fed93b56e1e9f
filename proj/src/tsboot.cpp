#include "dqest/tsboot.hpp"

#include <gsl/gsl_errno.h>
#include <gsl/gsl_multimin.h>

#include <algorithm>
#include <array>
#include <cmath>
#include <fstream>
#include <limits>
#include <numeric>
#include <sstream>
#include <utility>

#include "dqest/errors.hpp"
#include "dqest/rng.hpp"
#include "dqest/simharness.hpp"

namespace dqest {

void GarchParams::validate() const {
  if (!(omega > 0.0)) throw InvalidInput("omega must be positive");
  if (alpha_g < 0.0 || beta_g < 0.0) throw InvalidInput("ARCH/GARCH loads must be nonnegative");
  if (!(std::fabs(phi) < 1.0)) throw InvalidInput("|phi| must be < 1");
  if (!(nu > 2.0)) throw InvalidInput("innovation d.o.f. must exceed 2");
  for (double v : {c, phi, omega, alpha_g, beta_g, nu}) {
    if (!std::isfinite(v)) throw InvalidInput("non-finite model parameter");
  }
}

void RollingConfig::validate() const {
  if (window < 50) throw InvalidInput("rolling window must be >= 50");
  if (step < 1) throw InvalidInput("step must be >= 1");
  if (boot_reps < 2) throw InvalidInput("boot_reps must be >= 2");
  if (!(ci_level > 0.0 && ci_level < 1.0)) throw InvalidInput("ci_level must lie in (0,1)");
  RiskLevel check(alpha);
  (void)check;
}

namespace {

double sample_variance(const std::vector<double>& v) {
  if (v.size() < 2) return 0.0;
  const double mean = std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
  double ss = 0.0;
  for (double x : v) ss += (x - mean) * (x - mean);
  return ss / static_cast<double>(v.size() - 1);
}

double initial_sigma2(const GarchParams& p, const std::vector<double>& eps) {
  if (p.variance_stationary()) return p.omega / (1.0 - p.alpha_g - p.beta_g);
  const double v = sample_variance(eps);
  return v > 0.0 ? v : p.omega;
}

// log density of the variance-standardized t_nu at u
double log_std_t_pdf(double u, double nu, double log_norm_const) {
  return log_norm_const - 0.5 * (nu + 1.0) * std::log1p(u * u / (nu - 2.0));
}

double std_t_log_norm_const(double nu) {
  return std::lgamma(0.5 * (nu + 1.0)) - std::lgamma(0.5 * nu) -
         0.5 * std::log(M_PI * (nu - 2.0));
}

}  // namespace

GarchFilter garch_filter(const std::vector<double>& series, const GarchParams& params) {
  if (series.size() < 2) throw InvalidInput("series must have at least 2 observations");
  const std::size_t m = series.size() - 1;
  GarchFilter out;
  out.eps.resize(m);
  out.sigma2.resize(m);
  for (std::size_t j = 0; j < m; ++j) {
    out.eps[j] = series[j + 1] - params.c - params.phi * series[j];
  }
  out.sigma2_init = initial_sigma2(params, out.eps);
  out.sigma2[0] = out.sigma2_init;
  for (std::size_t j = 1; j < m; ++j) {
    out.sigma2[j] =
        params.omega + params.alpha_g * out.eps[j - 1] * out.eps[j - 1] +
        params.beta_g * out.sigma2[j - 1];
  }
  return out;
}

double garch_log_likelihood(const std::vector<double>& series, const GarchParams& params) {
  const GarchFilter f = garch_filter(series, params);
  const double log_norm = std_t_log_norm_const(params.nu);
  double ll = 0.0;
  for (std::size_t j = 0; j < f.eps.size(); ++j) {
    if (!(f.sigma2[j] > 0.0) || !std::isfinite(f.sigma2[j])) {
      return -std::numeric_limits<double>::infinity();
    }
    const double sd = std::sqrt(f.sigma2[j]);
    ll += log_std_t_pdf(f.eps[j] / sd, params.nu, log_norm) - std::log(sd);
  }
  return std::isfinite(ll) ? ll : -std::numeric_limits<double>::infinity();
}

// ---------------------------------------------------------------------------
// Quasi-MLE

namespace {

double logistic(double u) { return 1.0 / (1.0 + std::exp(-u)); }

double logit(double p) { return std::log(p / (1.0 - p)); }

// Unconstrained coordinates: (c, atanh phi, log omega, logit of the ARCH+GARCH
// total within (0, 0.9999), logit of the ARCH share, log(nu - 2)).
GarchParams decode(const double* u) {
  GarchParams p;
  p.c = u[0];
  p.phi = std::tanh(u[1]);
  p.omega = std::exp(std::clamp(u[2], -40.0, 20.0));
  const double total = 0.9999 * logistic(u[3]);
  const double share = logistic(u[4]);
  p.alpha_g = total * share;
  p.beta_g = total * (1.0 - share);
  p.nu = 2.0 + std::exp(std::clamp(u[5], -10.0, 6.0));
  return p;
}

std::array<double, 6> encode(const GarchParams& p) {
  const double total = std::clamp(p.alpha_g + p.beta_g, 1e-6, 0.9998);
  const double share = std::clamp(total > 0.0 ? p.alpha_g / total : 0.5, 1e-6, 1.0 - 1e-6);
  return {p.c,
          std::atanh(std::clamp(p.phi, -0.999999, 0.999999)),
          std::log(std::max(p.omega, 1e-300)),
          logit(std::clamp(total / 0.9999, 1e-12, 1.0 - 1e-12)),
          logit(share),
          std::log(std::max(p.nu - 2.0, 1e-8))};
}

struct FitContext {
  const std::vector<double>* series;
};

double neg_log_likelihood(const gsl_vector* v, void* raw) {
  const auto* ctx = static_cast<const FitContext*>(raw);
  double u[6];
  double penalty = 0.0;
  for (int i = 0; i < 6; ++i) {
    u[i] = gsl_vector_get(v, i);
    // keep the simplex from drifting into flat saturated regions
    if (std::fabs(u[i]) > 20.0) penalty += 1e-3 * (std::fabs(u[i]) - 20.0) * (std::fabs(u[i]) - 20.0);
  }
  const GarchParams p = decode(u);
  const double ll = garch_log_likelihood(*ctx->series, p);
  if (!std::isfinite(ll)) return 1e300;
  return -ll + penalty;
}

struct StartPoint {
  double phi, alpha_g, beta_g, nu;
};

}  // namespace

GarchParams fit_ar_garch(const std::vector<double>& series,
                         const std::optional<GarchParams>& init) {
  if (series.size() < 50) throw InvalidInput("fit_ar_garch needs at least 50 observations");
  // errors surface as FitFailed, never as a GSL abort
  gsl_set_error_handler_off();
  const double mean =
      std::accumulate(series.begin(), series.end(), 0.0) / static_cast<double>(series.size());
  double var = 0.0;
  for (double x : series) var += (x - mean) * (x - mean);
  var /= static_cast<double>(series.size() - 1);
  if (!(var > 0.0)) throw FitFailed("series has zero variance");

  static const StartPoint kStarts[] = {
      {0.00, 0.05, 0.90, 8.0},  {0.10, 0.10, 0.85, 6.0}, {-0.10, 0.05, 0.90, 6.0},
      {0.00, 0.02, 0.50, 20.0}, {0.20, 0.15, 0.80, 5.0}, {0.00, 0.01, 0.10, 30.0},
  };

  std::vector<std::array<double, 6>> starts;
  for (const auto& s : kStarts) {
    GarchParams p;
    p.phi = s.phi;
    p.c = mean * (1.0 - s.phi);
    p.alpha_g = s.alpha_g;
    p.beta_g = s.beta_g;
    p.omega = std::max(var * (1.0 - s.alpha_g - s.beta_g), 1e-12);
    p.nu = s.nu;
    starts.push_back(encode(p));
  }
  if (init) starts.push_back(encode(*init));

  FitContext ctx{&series};
  gsl_multimin_function objective;
  objective.n = 6;
  objective.f = &neg_log_likelihood;
  objective.params = &ctx;

  double best_value = std::numeric_limits<double>::infinity();
  GarchParams best;
  bool any = false;

  gsl_vector* x = gsl_vector_alloc(6);
  gsl_vector* step = gsl_vector_alloc(6);
  gsl_multimin_fminimizer* minimizer =
      gsl_multimin_fminimizer_alloc(gsl_multimin_fminimizer_nmsimplex2, 6);

  for (const auto& start : starts) {
    for (int i = 0; i < 6; ++i) gsl_vector_set(x, i, start[static_cast<std::size_t>(i)]);
    gsl_vector_set_all(step, 0.25);
    gsl_vector_set(step, 0, 0.1 * std::sqrt(var) + 1e-6);  // c moves on the data scale
    if (gsl_multimin_fminimizer_set(minimizer, &objective, x, step) != 0) continue;

    int status = GSL_CONTINUE;
    for (int it = 0; it < 2000 && status == GSL_CONTINUE; ++it) {
      if (gsl_multimin_fminimizer_iterate(minimizer) != 0) break;
      status = gsl_multimin_test_size(gsl_multimin_fminimizer_size(minimizer), 1e-8);
    }
    const double value = minimizer->fval;
    if (std::isfinite(value) && value < 1e299 && value < best_value) {
      double u[6];
      for (int i = 0; i < 6; ++i) u[i] = gsl_vector_get(minimizer->x, i);
      best_value = value;
      best = decode(u);
      any = true;
    }
  }

  gsl_multimin_fminimizer_free(minimizer);
  gsl_vector_free(step);
  gsl_vector_free(x);

  if (!any) throw FitFailed("quasi-likelihood non-finite at every start");
  return best;
}

UnivariateSample standardized_residuals(const std::vector<double>& series,
                                        const GarchParams& params) {
  const GarchFilter f = garch_filter(series, params);
  std::vector<double> z(f.eps.size());
  for (std::size_t j = 0; j < z.size(); ++j) z[j] = f.eps[j] / std::sqrt(f.sigma2[j]);
  return UnivariateSample(std::move(z));
}

FittedPanel fit_panel_window(const Eigen::MatrixXd& window) {
  if (window.rows() < 50) throw InvalidInput("panel window too short to fit");
  FittedPanel panel;
  panel.assets.resize(static_cast<std::size_t>(window.cols()));
  for (Eigen::Index j = 0; j < window.cols(); ++j) {
    std::vector<double> series(window.col(j).begin(), window.col(j).end());
    FittedAsset& asset = panel.assets[static_cast<std::size_t>(j)];
    asset.params = fit_ar_garch(series);
    const GarchFilter f = garch_filter(series, asset.params);
    asset.residuals.resize(f.eps.size());
    for (std::size_t s = 0; s < f.eps.size(); ++s) {
      asset.residuals[s] = f.eps[s] / std::sqrt(f.sigma2[s]);
    }
    asset.x0 = series.front();
    asset.sigma2_init = f.sigma2_init;
  }
  return panel;
}

std::vector<LossSample> joint_residual_bootstrap(const FittedPanel& panel, int boot_reps,
                                                 std::uint64_t seed) {
  if (panel.assets.empty()) throw InvalidInput("empty fitted panel");
  const std::size_t m_res = panel.assets.front().residuals.size();
  for (const auto& a : panel.assets) {
    if (a.residuals.size() != m_res) {
      throw InvalidInput("assets must share the same window dates");
    }
  }
  if (boot_reps < 1) throw InvalidInput("boot_reps must be >= 1");

  const auto n_assets = panel.assets.size();
  std::vector<LossSample> out;
  out.reserve(static_cast<std::size_t>(boot_reps));

  std::vector<std::size_t> idx(m_res);
  for (int b = 0; b < boot_reps; ++b) {
    auto rng = make_rng(derive_seed(seed, static_cast<std::uint64_t>(b)));
    std::uniform_int_distribution<std::size_t> pick(0, m_res - 1);
    // one index vector shared by every asset
    for (std::size_t k = 0; k < m_res; ++k) idx[k] = pick(rng);

    Eigen::MatrixXd path(static_cast<Eigen::Index>(m_res + 1),
                         static_cast<Eigen::Index>(n_assets));
    for (std::size_t j = 0; j < n_assets; ++j) {
      const FittedAsset& asset = panel.assets[j];
      const GarchParams& p = asset.params;
      double x_prev = asset.x0;
      double h = asset.sigma2_init;
      double eps_prev = 0.0;
      path(0, static_cast<Eigen::Index>(j)) = x_prev;
      for (std::size_t k = 0; k < m_res; ++k) {
        if (k > 0) h = p.omega + p.alpha_g * eps_prev * eps_prev + p.beta_g * h;
        const double eps = std::sqrt(h) * asset.residuals[idx[k]];
        const double x = p.c + p.phi * x_prev + eps;
        path(static_cast<Eigen::Index>(k + 1), static_cast<Eigen::Index>(j)) = x;
        x_prev = x;
        eps_prev = eps;
      }
    }
    out.emplace_back(std::move(path));
  }
  return out;
}

std::vector<double> simulate_ar_garch(const GarchParams& params, int length,
                                      std::uint64_t seed, int burn_in) {
  params.validate();
  if (length < 1) throw InvalidInput("simulate_ar_garch: length must be >= 1");
  auto rng = make_rng(seed);
  std::student_t_distribution<double> tdist(params.nu);
  const double t_scale = std::sqrt((params.nu - 2.0) / params.nu);  // unit variance

  const double uncond =
      params.variance_stationary() ? params.omega / (1.0 - params.alpha_g - params.beta_g)
                                   : params.omega;
  double h = uncond;
  double x = params.c / (1.0 - params.phi);
  double eps_prev = 0.0;
  std::vector<double> out;
  out.reserve(static_cast<std::size_t>(length));
  for (int s = -burn_in; s < length; ++s) {
    h = params.omega + params.alpha_g * eps_prev * eps_prev + params.beta_g * h;
    const double z = tdist(rng) * t_scale;
    const double eps = std::sqrt(h) * z;
    x = params.c + params.phi * x + eps;
    eps_prev = eps;
    if (s >= 0) out.push_back(x);
  }
  return out;
}

DqSeries rolling_dq_with_ci(const Panel& panel, const RollingConfig& cfg, std::uint64_t seed) {
  cfg.validate();
  const auto t_total = static_cast<int>(panel.values.rows());
  if (t_total < cfg.window + 1) throw InvalidInput("panel shorter than one rolling window");

  std::vector<int> ends;  // exclusive end row of each window
  for (int end = cfg.window; end <= t_total; end += cfg.step) ends.push_back(end);

  DqSeries series;
  series.points.resize(ends.size());
  series.window_fits.resize(ends.size());  // empty vector marks a gap window

  const RiskLevel a(cfg.alpha);
  const double p_lo = (1.0 - cfg.ci_level) / 2.0;
  const double p_hi = 1.0 - p_lo;

  parallel_for(static_cast<int>(ends.size()), cfg.threads, [&](int w) {
    DqSeriesPoint& pt = series.points[static_cast<std::size_t>(w)];
    const int end = ends[static_cast<std::size_t>(w)];
    pt.date = panel.dates[static_cast<std::size_t>(end - 1)];
    const Eigen::MatrixXd window = panel.values.middleRows(end - cfg.window, cfg.window);
    try {
      const LossSample raw(window);
      pt.estimate = estimate_index(raw, a, cfg.index_kind).value;

      const FittedPanel fitted = fit_panel_window(window);
      const auto paths = joint_residual_bootstrap(
          fitted, cfg.boot_reps, derive_seed(seed, static_cast<std::uint64_t>(w)));
      std::vector<double> boot;
      boot.reserve(paths.size());
      for (const auto& path : paths) {
        try {
          boot.push_back(estimate_index(path, a, cfg.index_kind).value);
        } catch (const Error&) {
          // an individual replication can degenerate; it is dropped, not fatal
        }
      }
      if (boot.size() < 2) throw FitFailed("fewer than 2 usable bootstrap replications");

      const UnivariateSample boot_sample(boot);
      pt.boot_mean = boot_sample.mean();
      pt.ci_lo = empirical_var(boot_sample, RiskLevel(1.0 - p_lo));
      pt.ci_hi = empirical_var(boot_sample, RiskLevel(1.0 - p_hi));
      pt.boot_var = sample_variance(boot);
      pt.ok = true;

      std::vector<GarchParams> wf;
      wf.reserve(fitted.assets.size());
      for (const auto& asset : fitted.assets) wf.push_back(asset.params);
      series.window_fits[static_cast<std::size_t>(w)] = std::move(wf);
    } catch (const Error& e) {
      pt.ok = false;
      pt.error = e.what();
    }
  });
  return series;
}

// ---------------------------------------------------------------------------
// Panel CSV

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> fields;
  std::string field;
  std::stringstream ss(line);
  while (std::getline(ss, field, ',')) fields.push_back(field);
  if (!line.empty() && line.back() == ',') fields.emplace_back();
  return fields;
}

std::string trim(const std::string& s) {
  const auto begin = s.find_first_not_of(" \t\r\n");
  if (begin == std::string::npos) return "";
  const auto end = s.find_last_not_of(" \t\r\n");
  return s.substr(begin, end - begin + 1);
}

}  // namespace

Panel load_panel_csv(const std::string& path, bool from_prices) {
  std::ifstream in(path);
  if (!in) throw InvalidInput("cannot open panel CSV: " + path);

  std::string line;
  if (!std::getline(in, line)) throw InvalidInput("empty panel CSV");
  auto header = split_csv_line(line);
  if (header.size() < 2 || trim(header[0]) != "date") {
    throw InvalidInput("panel CSV must start with a `date,TICKER...` header");
  }

  Panel panel;
  for (std::size_t i = 1; i < header.size(); ++i) panel.tickers.push_back(trim(header[i]));
  const std::size_t n = panel.tickers.size();

  std::vector<std::string> dates;
  std::vector<double> flat;
  while (std::getline(in, line)) {
    if (trim(line).empty()) continue;
    const auto fields = split_csv_line(line);
    bool ok = fields.size() == n + 1;
    std::vector<double> row(n);
    if (ok) {
      for (std::size_t i = 0; i < n; ++i) {
        const std::string cell = trim(fields[i + 1]);
        if (cell.empty()) {
          ok = false;
          break;
        }
        try {
          std::size_t pos = 0;
          row[i] = std::stod(cell, &pos);
          if (pos != cell.size() || !std::isfinite(row[i])) ok = false;
        } catch (const std::exception&) {
          ok = false;
        }
        if (!ok) break;
      }
    }
    if (!ok) {
      ++panel.dropped_rows;
      continue;
    }
    dates.push_back(trim(fields[0]));
    flat.insert(flat.end(), row.begin(), row.end());
  }
  if (dates.empty()) throw InvalidInput("panel CSV has no complete data rows");

  Eigen::MatrixXd values(static_cast<Eigen::Index>(dates.size()), static_cast<Eigen::Index>(n));
  for (std::size_t r = 0; r < dates.size(); ++r) {
    for (std::size_t i = 0; i < n; ++i) {
      values(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(i)) = flat[r * n + i];
    }
  }

  if (from_prices) {
    if (values.rows() < 2) throw InvalidInput("need at least 2 price rows for log-losses");
    for (Eigen::Index r = 0; r < values.rows(); ++r) {
      for (Eigen::Index i = 0; i < values.cols(); ++i) {
        if (!(values(r, i) > 0.0)) throw InvalidInput("prices must be positive");
      }
    }
    Eigen::MatrixXd losses(values.rows() - 1, values.cols());
    for (Eigen::Index r = 1; r < values.rows(); ++r) {
      for (Eigen::Index i = 0; i < values.cols(); ++i) {
        losses(r - 1, i) = -std::log(values(r, i) / values(r - 1, i));
      }
    }
    panel.values = std::move(losses);
    panel.dates.assign(dates.begin() + 1, dates.end());
  } else {
    panel.values = std::move(values);
    panel.dates = std::move(dates);
  }
  return panel;
}

std::string dq_series_to_csv(const DqSeries& series) {
  std::ostringstream out;
  out << "date,estimate,boot_mean,ci_lo,ci_hi,boot_var\n";
  out.precision(17);
  for (const auto& pt : series.points) {
    out << pt.date << ',';
    if (pt.ok) {
      out << pt.estimate << ',' << pt.boot_mean << ',' << pt.ci_lo << ',' << pt.ci_hi << ','
          << pt.boot_var;
    } else {
      out << ",,,,";
    }
    out << '\n';
  }
  return out.str();
}

}  // namespace dqest
