#pragma once

#include <memory>

namespace dqest {

// One-dimensional distribution interface used as the density plug-in for the
// asymptotic-variance formulas and as the analytic base of the tilde
// transform.  Implementations must have a finite mean; the variance formulas
// additionally assume 2+eps moments, which every concrete family here
// satisfies (Student-t is restricted to nu > 2 at model level).
class Distribution {
 public:
  virtual ~Distribution() = default;

  virtual double pdf(double x) const = 0;
  virtual double cdf(double x) const = 0;
  // p-quantile, p in (0,1).  Sample-backed implementations use the
  // left-continuous inf convention.
  virtual double quantile(double p) const = 0;
  virtual double mean() const = 0;

  // E[(X - t)_+]
  virtual double upper_partial_moment(double t) const = 0;
  // int_{-inf}^{y} x dF(x)
  virtual double partial_mean_below(double y) const = 0;

  // E[(t - X)_+] = E[(X - t)_+] + t - E[X]
  double lower_partial_moment(double t) const {
    return upper_partial_moment(t) + t - mean();
  }

  // VaR at level alpha under the small-alpha convention: the (1-alpha)-quantile.
  double var(double alpha) const { return quantile(1.0 - alpha); }

  // ES at level alpha.  For continuous distributions
  // ES_a = VaR_a + E[(X - VaR_a)_+] / a; sample-backed plug-ins override this
  // with the exact integral of the empirical quantile function.
  virtual double es(double alpha) const;

  // Expectile at level alpha: the unique root t of
  // (1-alpha) E[(X-t)_+] = alpha E[(t-X)_+].
  double expectile(double alpha) const;
};

using DistributionPtr = std::shared_ptr<const Distribution>;

// Standard normal N(0,1).
class StdNormal final : public Distribution {
 public:
  double pdf(double x) const override;
  double cdf(double x) const override;
  double quantile(double p) const override;
  double mean() const override { return 0.0; }
  double upper_partial_moment(double t) const override;
  double partial_mean_below(double y) const override;
  double es(double alpha) const override;
};

// Student-t with real degrees of freedom and unit dispersion (scale), i.e.
// the textbook t_nu density.  Its variance is nu/(nu-2) for nu > 2.  The
// partial-moment formulas need nu > 1.
class StdStudentT final : public Distribution {
 public:
  explicit StdStudentT(double nu);

  double pdf(double x) const override;
  double cdf(double x) const override;
  double quantile(double p) const override;
  double mean() const override { return 0.0; }
  double upper_partial_moment(double t) const override;
  double partial_mean_below(double y) const override;
  double es(double alpha) const override;

  double nu() const { return nu_; }

 private:
  double nu_;
};

// loc + scale * X for a base distribution X, scale > 0.
class LocationScale final : public Distribution {
 public:
  LocationScale(DistributionPtr base, double loc, double scale);

  double pdf(double x) const override;
  double cdf(double x) const override;
  double quantile(double p) const override;
  double mean() const override;
  double upper_partial_moment(double t) const override;
  double partial_mean_below(double y) const override;
  double es(double alpha) const override;

 private:
  DistributionPtr base_;
  double loc_;
  double scale_;
};

}  // namespace dqest
