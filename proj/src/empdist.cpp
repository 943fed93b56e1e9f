#include "dqest/empdist.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <utility>

#include "dqest/errors.hpp"

namespace dqest {

namespace {

// floor(x) robust to product rounding: values within `tol` below an integer
// are snapped up.  tol is far above the ~N*eps noise of computing N*alpha and
// far below any meaningful level difference.
std::size_t snapped_floor(double x, std::size_t hard_max) {
  const double tol = 1e-12 * (1.0 + x);
  double f = std::floor(x);
  if (x - f > 1.0 - tol) f += 1.0;
  if (f < 0.0) return 0;
  const auto k = static_cast<std::size_t>(f);
  return std::min(k, hard_max);
}

}  // namespace

RiskLevel::RiskLevel(double alpha) : alpha_(alpha) {
  if (!(alpha > 0.0 && alpha < 1.0) || !std::isfinite(alpha)) {
    throw InvalidInput("risk level must lie in the open interval (0,1)");
  }
}

UnivariateSample::UnivariateSample(std::vector<double> values) : values_(std::move(values)) {
  if (values_.empty()) throw InvalidInput("sample must contain at least one observation");
  for (double v : values_) {
    if (!std::isfinite(v)) throw InvalidInput("sample contains NaN or infinite value");
  }
  sorted_ = values_;
  std::sort(sorted_.begin(), sorted_.end());
  prefix_.resize(sorted_.size() + 1);
  prefix_[0] = 0.0;
  for (std::size_t i = 0; i < sorted_.size(); ++i) prefix_[i + 1] = prefix_[i] + sorted_[i];
}

UnivariateSample::UnivariateSample(std::span<const double> values)
    : UnivariateSample(std::vector<double>(values.begin(), values.end())) {}

double UnivariateSample::mean() const { return prefix_.back() / static_cast<double>(size()); }

std::size_t UnivariateSample::count_leq(double y) const {
  return static_cast<std::size_t>(
      std::upper_bound(sorted_.begin(), sorted_.end(), y) - sorted_.begin());
}

double UnivariateSample::ecdf(double y) const {
  return static_cast<double>(count_leq(y)) / static_cast<double>(size());
}

double empirical_var(const UnivariateSample& s, RiskLevel a) {
  const std::size_t n = s.size();
  // ceil(N(1-a)) == N - floor(N a) for all a in (0,1)
  const std::size_t fl = snapped_floor(static_cast<double>(n) * a.value(), n - 1);
  return s.sorted()[n - fl - 1];
}

double empirical_es(const UnivariateSample& s, RiskLevel a) {
  const std::size_t n = s.size();
  const double na = static_cast<double>(n) * a.value();
  const std::size_t fl = snapped_floor(na, n - 1);
  const std::size_t m = n - fl;
  // sum of the fl largest order statistics
  const double top = s.prefix_sum(n) - s.prefix_sum(m);
  const double frac = na - static_cast<double>(fl);
  return (top + frac * s.sorted()[m - 1]) / na;
}

double empirical_expectile(const UnivariateSample& s, RiskLevel a) {
  const double alpha = a.value();
  const auto& x = s.sorted();
  const std::size_t n = s.size();
  const double total = s.prefix_sum(n);
  if (x.front() == x.back()) return x.front();

  // f(t) = (1-a) sum (X-t)_+ - a sum (t-X)_+, strictly decreasing.
  auto f = [&](double t) {
    const std::size_t k = s.count_leq(t);  // X_[1..k] <= t
    const double below = static_cast<double>(k) * t - s.prefix_sum(k);
    const double above = (total - s.prefix_sum(k)) - static_cast<double>(n - k) * t;
    return (1.0 - alpha) * above - alpha * below;
  };

  double lo = x.front(), hi = x.back();
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (f(mid) > 0.0) {
      lo = mid;
    } else {
      hi = mid;
    }
    if (hi - lo <= 1e-12 * (1.0 + std::fabs(mid))) break;
  }
  return 0.5 * (lo + hi);
}

double partial_moment_plus(const UnivariateSample& s, double t) {
  const std::size_t n = s.size();
  const std::size_t k = s.count_leq(t);
  const double above = (s.prefix_sum(n) - s.prefix_sum(k)) - static_cast<double>(n - k) * t;
  return above / static_cast<double>(n);
}

// ---------------------------------------------------------------------------
// EmpiricalDistribution

namespace {

double silverman_bandwidth(const UnivariateSample& s) {
  const std::size_t n = s.size();
  const double mu = s.mean();
  double ss = 0.0;
  for (double v : s.values()) ss += (v - mu) * (v - mu);
  const double sd = std::sqrt(ss / static_cast<double>(n > 1 ? n - 1 : 1));
  const auto& x = s.sorted();
  const double q1 = x[static_cast<std::size_t>(0.25 * static_cast<double>(n - 1))];
  const double q3 = x[static_cast<std::size_t>(0.75 * static_cast<double>(n - 1))];
  const double iqr = q3 - q1;
  double spread = sd;
  if (iqr > 0.0) spread = std::min(sd, iqr / 1.34);
  if (spread <= 0.0) spread = (sd > 0.0) ? sd : 1.0;
  return 0.9 * spread * std::pow(static_cast<double>(n), -0.2);
}

}  // namespace

EmpiricalDistribution::EmpiricalDistribution(UnivariateSample sample,
                                             std::optional<double> kde_bandwidth)
    : sample_(std::move(sample)),
      bandwidth_(kde_bandwidth.value_or(silverman_bandwidth(sample_))) {
  if (!(bandwidth_ > 0.0)) throw InvalidInput("KDE bandwidth must be positive");
}

double EmpiricalDistribution::pdf(double x) const {
  constexpr double inv_sqrt_2pi = 0.3989422804014327;
  double acc = 0.0;
  for (double v : sample_.values()) {
    const double u = (x - v) / bandwidth_;
    acc += std::exp(-0.5 * u * u);
  }
  return acc * inv_sqrt_2pi / (bandwidth_ * static_cast<double>(sample_.size()));
}

double EmpiricalDistribution::cdf(double x) const { return sample_.ecdf(x); }

double EmpiricalDistribution::quantile(double p) const {
  if (!(p > 0.0 && p < 1.0)) throw InvalidInput("quantile level must lie in (0,1)");
  return empirical_var(sample_, RiskLevel(1.0 - p));
}

double EmpiricalDistribution::mean() const { return sample_.mean(); }

double EmpiricalDistribution::upper_partial_moment(double t) const {
  return partial_moment_plus(sample_, t);
}

double EmpiricalDistribution::partial_mean_below(double y) const {
  return sample_.prefix_sum(sample_.count_leq(y)) / static_cast<double>(sample_.size());
}

double EmpiricalDistribution::es(double alpha) const {
  return empirical_es(sample_, RiskLevel(alpha));
}

// ---------------------------------------------------------------------------
// TildeTransform

TildeTransform::TildeTransform(DistributionPtr base) : base_(std::move(base)) {
  if (!base_) throw InvalidInput("TildeTransform: null base distribution");
  mean_ = base_->mean();
}

TildeTransform::TildeTransform(const UnivariateSample& sample)
    : TildeTransform(std::make_shared<EmpiricalDistribution>(sample)) {}

double TildeTransform::cdf(double y) const {
  const double a = base_->lower_partial_moment(y);   // E (y - X)_+
  const double b = base_->upper_partial_moment(y);   // E (X - y)_+
  const double denom = a + b;                        // = 2 A(y) + E[X] - y
  if (denom <= 0.0) {
    throw DegenerateSample("tilde transform undefined at the atom of a point mass");
  }
  return a / denom;
}

double TildeTransform::pdf(double y) const {
  const double a = base_->lower_partial_moment(y);
  const double b = base_->upper_partial_moment(y);
  const double denom = a + b;
  if (denom <= 0.0) {
    throw DegenerateSample("tilde transform undefined at the atom of a point mass");
  }
  const double numer = base_->cdf(y) * mean_ - base_->partial_mean_below(y);
  return numer / (denom * denom);
}

double TildeTransform::quantile(double p) const {
  if (!(p > 0.0 && p < 1.0)) throw InvalidInput("tilde quantile level must lie in (0,1)");
  // cdf is nondecreasing with limits 0 and 1; expand a bracket then bisect.
  double lo = mean_ - 1.0, hi = mean_ + 1.0, step = 1.0;
  while (cdf(lo) > p) {
    step *= 2.0;
    lo = mean_ - step;
    if (step > 1e12) throw InvalidInput("tilde quantile bracket expansion failed");
  }
  step = 1.0;
  while (cdf(hi) < p) {
    step *= 2.0;
    hi = mean_ + step;
    if (step > 1e12) throw InvalidInput("tilde quantile bracket expansion failed");
  }
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (cdf(mid) < p) {
      lo = mid;
    } else {
      hi = mid;
    }
    if (hi - lo <= 1e-13 * (1.0 + std::fabs(mid))) break;
  }
  return 0.5 * (lo + hi);
}

double tilde_cdf(const TildeTransform& tr, double y) { return tr.cdf(y); }

double tilde_pdf(const TildeTransform& tr, double y) { return tr.pdf(y); }

}  // namespace dqest
