#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "dqest/distributions.hpp"

namespace dqest {

// Probability level alpha in the open interval (0,1), small-alpha convention:
// VaR_alpha is the (1-alpha)-quantile.
class RiskLevel {
 public:
  explicit RiskLevel(double alpha);
  double value() const { return alpha_; }

 private:
  double alpha_;
};

// Immutable univariate sample with an eagerly built order-statistic cache and
// prefix sums.  Rejects NaN/Inf at construction; ties are allowed.
class UnivariateSample {
 public:
  explicit UnivariateSample(std::vector<double> values);
  explicit UnivariateSample(std::span<const double> values);

  std::size_t size() const { return values_.size(); }
  const std::vector<double>& values() const { return values_; }
  const std::vector<double>& sorted() const { return sorted_; }

  double min() const { return sorted_.front(); }
  double max() const { return sorted_.back(); }
  double mean() const;

  // #{X <= y} / N
  double ecdf(double y) const;
  // sum of the k smallest order statistics, k in [0, N]
  double prefix_sum(std::size_t k) const { return prefix_[k]; }
  // #{X <= y} (count of order statistics not exceeding y)
  std::size_t count_leq(double y) const;

 private:
  std::vector<double> values_;
  std::vector<double> sorted_;
  std::vector<double> prefix_;  // prefix_[k] = sum of sorted_[0..k-1]
};

// The ceil(N(1-alpha))-th order statistic (1-indexed); equals
// inf{x : F_hat(x) >= 1-alpha}.  No interpolation.
double empirical_var(const UnivariateSample& s, RiskLevel a);

// Exact integral of the empirical quantile function over (0, alpha]:
// (1/(N a)) [ sum_{k=m+1}^{N} X_[k] + (N a - (N - m)) X_[m] ],  m = N - floor(N a).
double empirical_es(const UnivariateSample& s, RiskLevel a);

// Unique root t of (1-alpha) sum (X_k - t)_+ = alpha sum (t - X_k)_+,
// bracketed by [min, max]; bisection to 1e-12 relative.
double empirical_expectile(const UnivariateSample& s, RiskLevel a);

// (1/N) sum max(X_k - t, 0)
double partial_moment_plus(const UnivariateSample& s, double t);

// Distribution view of a sample: quantile/ES under the exact empirical
// conventions above, density via a Gaussian kernel estimate with Silverman's
// rule bandwidth (overridable).  This is the data-driven density plug-in for
// the asymptotic-variance formulas.
class EmpiricalDistribution final : public Distribution {
 public:
  explicit EmpiricalDistribution(UnivariateSample sample,
                                 std::optional<double> kde_bandwidth = std::nullopt);

  double pdf(double x) const override;        // Gaussian KDE
  double cdf(double x) const override;        // ECDF
  double quantile(double p) const override;   // inf-convention order statistic
  double mean() const override;
  double upper_partial_moment(double t) const override;
  double partial_mean_below(double y) const override;
  double es(double alpha) const override;     // exact empirical quantile integral

  double bandwidth() const { return bandwidth_; }
  const UnivariateSample& sample() const { return sample_; }

 private:
  UnivariateSample sample_;
  double bandwidth_;
};

// Expectile-dual transform of a distribution F with finite mean:
//   F~(y) = A(y) / (2 A(y) + E[X] - y),          A(y) = E[(y - X)_+],
//   f~(y) = (F(y) E[X] - int_{-inf}^{y} x dF) / (2 A(y) + E[X] - y)^2.
// F~ is a continuous distribution function strictly increasing on its support;
// F~(ex_alpha(X)) = 1 - alpha.
class TildeTransform {
 public:
  explicit TildeTransform(DistributionPtr base);
  explicit TildeTransform(const UnivariateSample& sample);

  // Throws DegenerateSample if the base is a point mass at y.
  double cdf(double y) const;
  double pdf(double y) const;
  // Inverse of cdf by bisection (monotone); p in (0,1).
  double quantile(double p) const;

  const Distribution& base() const { return *base_; }

 private:
  DistributionPtr base_;
  double mean_;
};

double tilde_cdf(const TildeTransform& tr, double y);
double tilde_pdf(const TildeTransform& tr, double y);

}  // namespace dqest
