#include "dqest/distributions.hpp"

#include <boost/math/distributions/normal.hpp>
#include <boost/math/distributions/students_t.hpp>
#include <cmath>
#include <limits>
#include <utility>

#include "dqest/errors.hpp"

namespace dqest {

namespace {

const boost::math::normal_distribution<double>& std_normal_dist() {
  static const boost::math::normal_distribution<double> d;
  return d;
}

}  // namespace

double Distribution::es(double alpha) const {
  const double q = quantile(1.0 - alpha);
  return q + upper_partial_moment(q) / alpha;
}

double Distribution::expectile(double alpha) const {
  if (!(alpha > 0.0 && alpha < 1.0)) {
    throw InvalidInput("expectile level must lie in (0,1)");
  }
  const double mu = mean();
  // Root of f(t) = (1-a) E[(X-t)_+] - a E[(t-X)_+]; continuous and strictly
  // decreasing, f(mu) has the sign of (1-2a).
  auto f = [&](double t) {
    const double upm = upper_partial_moment(t);
    return (1.0 - alpha) * upm - alpha * (upm + t - mu);
  };
  // Expand a bracket around the mean.
  double step = 1.0;
  double lo = mu - step, hi = mu + step;
  while (f(lo) <= 0.0) {
    step *= 2.0;
    lo = mu - step;
    if (step > 1e12) throw InvalidInput("expectile bracket expansion failed");
  }
  step = 1.0;
  while (f(hi) >= 0.0) {
    step *= 2.0;
    hi = mu + step;
    if (step > 1e12) throw InvalidInput("expectile bracket expansion failed");
  }
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (f(mid) > 0.0) {
      lo = mid;
    } else {
      hi = mid;
    }
    if (hi - lo <= 1e-14 * (1.0 + std::fabs(mid))) break;
  }
  return 0.5 * (lo + hi);
}

// ---------------------------------------------------------------------------
// StdNormal

double StdNormal::pdf(double x) const { return boost::math::pdf(std_normal_dist(), x); }

double StdNormal::cdf(double x) const { return boost::math::cdf(std_normal_dist(), x); }

double StdNormal::quantile(double p) const {
  return boost::math::quantile(std_normal_dist(), p);
}

double StdNormal::upper_partial_moment(double t) const {
  // E[(Z - t)_+] = phi(t) - t (1 - Phi(t))
  return pdf(t) - t * (1.0 - cdf(t));
}

double StdNormal::partial_mean_below(double y) const {
  // int_{-inf}^{y} x phi(x) dx = -phi(y)
  return -pdf(y);
}

double StdNormal::es(double alpha) const {
  return pdf(quantile(1.0 - alpha)) / alpha;
}

// ---------------------------------------------------------------------------
// StdStudentT

StdStudentT::StdStudentT(double nu) : nu_(nu) {
  if (!(nu > 1.0)) {
    throw InvalidInput("Student-t requires nu > 1 for finite-mean formulas");
  }
}

double StdStudentT::pdf(double x) const {
  return boost::math::pdf(boost::math::students_t_distribution<double>(nu_), x);
}

double StdStudentT::cdf(double x) const {
  return boost::math::cdf(boost::math::students_t_distribution<double>(nu_), x);
}

double StdStudentT::quantile(double p) const {
  return boost::math::quantile(boost::math::students_t_distribution<double>(nu_), p);
}

double StdStudentT::upper_partial_moment(double t) const {
  // E[(X - t)_+] = (nu + t^2)/(nu - 1) f(t) - t (1 - F(t))
  return (nu_ + t * t) / (nu_ - 1.0) * pdf(t) - t * (1.0 - cdf(t));
}

double StdStudentT::partial_mean_below(double y) const {
  // int_{-inf}^{y} x f(x) dx = -(nu + y^2)/(nu - 1) f(y)
  return -(nu_ + y * y) / (nu_ - 1.0) * pdf(y);
}

double StdStudentT::es(double alpha) const {
  const double q = quantile(1.0 - alpha);
  return (nu_ + q * q) / (nu_ - 1.0) * pdf(q) / alpha;
}

// ---------------------------------------------------------------------------
// LocationScale

LocationScale::LocationScale(DistributionPtr base, double loc, double scale)
    : base_(std::move(base)), loc_(loc), scale_(scale) {
  if (!base_) throw InvalidInput("LocationScale: null base distribution");
  if (!(scale > 0.0) || !std::isfinite(scale) || !std::isfinite(loc)) {
    throw InvalidInput("LocationScale: scale must be positive and finite");
  }
}

double LocationScale::pdf(double x) const { return base_->pdf((x - loc_) / scale_) / scale_; }

double LocationScale::cdf(double x) const { return base_->cdf((x - loc_) / scale_); }

double LocationScale::quantile(double p) const { return loc_ + scale_ * base_->quantile(p); }

double LocationScale::mean() const { return loc_ + scale_ * base_->mean(); }

double LocationScale::upper_partial_moment(double t) const {
  return scale_ * base_->upper_partial_moment((t - loc_) / scale_);
}

double LocationScale::partial_mean_below(double y) const {
  const double z = (y - loc_) / scale_;
  return loc_ * base_->cdf(z) + scale_ * base_->partial_mean_below(z);
}

double LocationScale::es(double alpha) const { return loc_ + scale_ * base_->es(alpha); }

}  // namespace dqest
