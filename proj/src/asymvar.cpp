#include "dqest/asymvar.hpp"

#include <algorithm>
#include <cmath>
#include <utility>

#include "dqest/errors.hpp"

namespace dqest {

double AsymVariance::recompute() const {
  double q = a_vec.transpose() * cov_mat * a_vec;
  if (c_const) q /= (*c_const) * (*c_const);
  return q;
}

Eigen::MatrixXd long_run_cov(const Eigen::MatrixXd& series, int max_lag, LagWeights weights) {
  const Eigen::Index n = series.rows();
  const Eigen::Index d = series.cols();
  if (n < 2) throw InvalidInput("long_run_cov needs at least 2 observations");
  if (max_lag < 0) throw InvalidInput("max_lag must be >= 0");

  const Eigen::RowVectorXd mean = series.colwise().mean();
  const Eigen::MatrixXd centered = series.rowwise() - mean;
  const double dn = static_cast<double>(n);

  Eigen::MatrixXd sigma = (centered.transpose() * centered) / dn;
  const int lag_cap = static_cast<int>(std::min<Eigen::Index>(max_lag, n - 1));
  for (int l = 1; l <= lag_cap; ++l) {
    Eigen::MatrixXd gamma = Eigen::MatrixXd::Zero(d, d);
    for (Eigen::Index k = 0; k + l < n; ++k) {
      gamma.noalias() += centered.row(k).transpose() * centered.row(k + l);
    }
    gamma /= dn;
    const double w =
        (weights == LagWeights::BARTLETT) ? 1.0 - static_cast<double>(l) / (max_lag + 1.0) : 1.0;
    sigma += w * (gamma + gamma.transpose());
  }
  return sigma;
}

namespace {

bool has_duplicate_sums(const LossSample& data) {
  std::vector<double> s(data.row_sums().begin(), data.row_sums().end());
  std::sort(s.begin(), s.end());
  return std::adjacent_find(s.begin(), s.end()) != s.end();
}

double positive_density(const Distribution& d, double x, const char* what) {
  const double f = d.pdf(x);
  if (!(f > 0.0) || !std::isfinite(f)) {
    throw NonPositiveDensity(std::string("non-positive plug-in density for ") + what);
  }
  return f;
}

// Centered variance of the scalar projection w = A'row and the standard error
// of its sample variance, sqrt((m4 - m2^2)/N).
double projection_se(const Eigen::MatrixXd& series, const Eigen::VectorXd& a) {
  const Eigen::VectorXd w = series * a;
  const double mean = w.mean();
  const double dn = static_cast<double>(w.size());
  double m2 = 0.0, m4 = 0.0;
  for (Eigen::Index k = 0; k < w.size(); ++k) {
    const double c = w[k] - mean;
    m2 += c * c;
    m4 += c * c * c * c;
  }
  m2 /= dn;
  m4 /= dn;
  return std::sqrt(std::max(m4 - m2 * m2, 0.0) / dn);
}

AsymVariance assemble(Eigen::VectorXd a, Eigen::MatrixXd cov, std::optional<double> c,
                      int lag_window, bool ties, double mc_se) {
  AsymVariance out;
  out.a_vec = std::move(a);
  out.cov_mat = std::move(cov);
  out.c_const = c;
  out.lag_window = lag_window;
  out.ties_warning = ties;
  out.mc_std_err = mc_se;
  const double raw = out.recompute();
  if (raw < 0.0) {
    out.sigma2 = 0.0;
    out.floored_negative = true;
  } else {
    out.sigma2 = raw;
  }
  return out;
}

// --- series builders ---------------------------------------------------------

Eigen::MatrixXd indicator_series(const LossSample& data, const std::vector<double>& t,
                                 double sum_threshold) {
  const Eigen::Index n = data.rows();
  const auto p = static_cast<Eigen::Index>(t.size());
  Eigen::MatrixXd series(n, p + 1);
  for (Eigen::Index k = 0; k < n; ++k) {
    for (Eigen::Index i = 0; i < p; ++i) {
      series(k, i) = data.data()(k, i) <= t[static_cast<std::size_t>(i)] ? 1.0 : 0.0;
    }
    series(k, p) = data.row_sums()[k] <= sum_threshold ? 1.0 : 0.0;
  }
  return series;
}

Eigen::MatrixXd positive_part_series(const LossSample& data, const std::vector<double>& t,
                                     double sum_threshold) {
  const Eigen::Index n = data.rows();
  const auto p = static_cast<Eigen::Index>(t.size());
  Eigen::MatrixXd series(n, p + 1);
  for (Eigen::Index k = 0; k < n; ++k) {
    for (Eigen::Index i = 0; i < p; ++i) {
      series(k, i) = std::max(data.data()(k, i) - t[static_cast<std::size_t>(i)], 0.0);
    }
    series(k, p) = std::max(data.row_sums()[k] - sum_threshold, 0.0);
  }
  return series;
}

// Observation vector per row for the expectile delta method:
// ((S-t)_+, |S-t|, (y_1-X_1) 1{X_1<=y_1}, X_1, ..., (y_n-X_n) 1{X_n<=y_n}, X_n)
Eigen::MatrixXd expectile_series(const LossSample& data, const std::vector<double>& y,
                                 double t) {
  const Eigen::Index n = data.rows();
  const auto p = static_cast<Eigen::Index>(y.size());
  Eigen::MatrixXd series(n, 2 * p + 2);
  for (Eigen::Index k = 0; k < n; ++k) {
    const double d = data.row_sums()[k] - t;
    series(k, 0) = std::max(d, 0.0);
    series(k, 1) = std::fabs(d);
    for (Eigen::Index i = 0; i < p; ++i) {
      const double yi = y[static_cast<std::size_t>(i)];
      const double x = data.data()(k, i);
      series(k, 2 + 2 * i) = x <= yi ? yi - x : 0.0;
      series(k, 3 + 2 * i) = x;
    }
  }
  return series;
}

// --- ingredients -------------------------------------------------------------

struct VarIngredients {
  std::vector<double> t;
  double t_sum = 0.0;
  Eigen::VectorXd a;
};

VarIngredients var_ingredients(const Margins& margins, const Distribution& sumplug,
                               RiskLevel alpha) {
  const auto n = margins.size();
  if (n == 0) throw InvalidInput("at least one margin plug-in required");
  VarIngredients ing;
  ing.t.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    ing.t[i] = margins[i]->quantile(1.0 - alpha.value());
    ing.t_sum += ing.t[i];
  }
  const double g = positive_density(sumplug, ing.t_sum, "the sum at t_{n+1}");
  ing.a.resize(static_cast<Eigen::Index>(n + 1));
  for (std::size_t i = 0; i < n; ++i) {
    const double f = positive_density(*margins[i], ing.t[i], "a margin at its quantile");
    ing.a[static_cast<Eigen::Index>(i)] = g / (alpha.value() * f);
  }
  ing.a[static_cast<Eigen::Index>(n)] = -1.0 / alpha.value();
  return ing;
}

struct EsIngredients {
  std::vector<double> t;      // marginal VaR_alpha quantiles
  double target = 0.0;        // sum of marginal ES_alpha
  double alpha_star = 0.0;
  double s = 0.0;             // VaR_{alpha*} of the sum
  double c = 0.0;
  Eigen::VectorXd a;
};

EsIngredients es_ingredients(const Margins& margins, const Distribution& sumplug,
                             RiskLevel alpha) {
  const auto n = margins.size();
  if (n == 0) throw InvalidInput("at least one margin plug-in required");
  EsIngredients ing;
  ing.t.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    ing.t[i] = margins[i]->quantile(1.0 - alpha.value());
    ing.target += margins[i]->es(alpha.value());
  }
  ing.alpha_star = solve_alpha_star(sumplug, ing.target, alpha);
  ing.s = sumplug.quantile(1.0 - ing.alpha_star);
  const double dq = ing.alpha_star / alpha.value();
  ing.c = (ing.s - sumplug.es(ing.alpha_star)) / dq;
  ing.a.resize(static_cast<Eigen::Index>(n + 1));
  for (std::size_t i = 0; i < n; ++i) {
    ing.a[static_cast<Eigen::Index>(i)] = 1.0 / alpha.value();
  }
  ing.a[static_cast<Eigen::Index>(n)] = -1.0 / ing.alpha_star;
  return ing;
}

}  // namespace

ExpectileParts dq_ex_ingredients(const Margins& margins, const Distribution& sumplug,
                                 RiskLevel alpha) {
  const auto n = margins.size();
  if (n == 0) throw InvalidInput("at least one margin plug-in required");
  if (!(alpha.value() < 0.5)) throw InvalidInput("the expectile index requires alpha < 1/2");

  ExpectileParts p;
  p.y.resize(n);
  p.mu.resize(n);
  p.mu_minus.resize(n);
  p.tilde_f_at_y.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    // The tilde quantile at 1-alpha is exactly the alpha-expectile.
    p.y[i] = margins[i]->expectile(alpha.value());
    p.t += p.y[i];
    p.mu[i] = margins[i]->mean();
    p.mu_minus[i] = margins[i]->lower_partial_moment(p.y[i]);
    const TildeTransform tilde(margins[i]);
    const double tf = tilde.pdf(p.y[i]);
    if (!(tf > 0.0) || !std::isfinite(tf)) {
      throw NonPositiveDensity("non-positive tilde density at a marginal expectile");
    }
    p.tilde_f_at_y[i] = tf;
  }

  p.g_at_t = sumplug.cdf(p.t);
  p.theta1 = sumplug.upper_partial_moment(p.t);
  p.theta2 = 2.0 * p.theta1 + p.t - sumplug.mean();  // E|S-t| = upm + lpm
  if (!(p.theta2 > 0.0)) {
    throw DegenerateDenominator("E|S - t| vanishes; the sum is degenerate at t");
  }

  const auto dim = static_cast<Eigen::Index>(2 * n + 2);
  p.v.resize(dim);
  p.v[0] = p.theta1;
  p.v[1] = p.theta2;
  p.grad_h = Eigen::MatrixXd::Zero(dim, 2);
  p.grad_h(0, 0) = 1.0;
  p.grad_h(1, 1) = 1.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double d = 2.0 * p.mu_minus[i] + p.mu[i] - p.y[i];
    const double common = 1.0 / (p.tilde_f_at_y[i] * d * d);
    const double d_mu_minus = (d - 2.0 * p.mu_minus[i]) * common;
    const double d_mu = -p.mu_minus[i] * common;
    const auto r = static_cast<Eigen::Index>(2 + 2 * i);
    p.v[r] = p.mu_minus[i];
    p.v[r + 1] = p.mu[i];
    p.grad_h(r, 0) = (1.0 - p.g_at_t) * d_mu_minus;
    p.grad_h(r, 1) = (1.0 - 2.0 * p.g_at_t) * d_mu_minus;
    p.grad_h(r + 1, 0) = (1.0 - p.g_at_t) * d_mu;
    p.grad_h(r + 1, 1) = (1.0 - 2.0 * p.g_at_t) * d_mu;
  }
  p.grad_g[0] = 1.0 / (alpha.value() * p.theta2);
  p.grad_g[1] = -p.theta1 / (alpha.value() * p.theta2 * p.theta2);
  return p;
}

double solve_alpha_star(const Distribution& sum_dist, double target, RiskLevel a) {
  double lo = 1e-13;
  double hi = 1.0 - 1e-13;
  const double es_lo = sum_dist.es(lo);
  if (target >= es_lo - 1e-9 * (1.0 + std::fabs(es_lo))) {
    throw AssumptionViolated(
        "sum of marginal ES reaches the attainable upper range of ES(S); alpha* undefined");
  }
  if (target <= sum_dist.es(hi)) {
    throw AssumptionViolated("target ES lies below the mean of the sum; alpha* undefined");
  }
  // Seed the bracket at the index level when possible.
  const double at_a = sum_dist.es(a.value());
  if (at_a > target) {
    lo = a.value();
  } else {
    hi = a.value();
  }
  while (hi - lo > 1e-10) {
    const double mid = 0.5 * (lo + hi);
    if (sum_dist.es(mid) > target) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

double solve_alpha_star(const UnivariateSample& sum_sample, double target, RiskLevel a) {
  return solve_alpha_star(EmpiricalDistribution(sum_sample), target, a);
}

// --- DQ^VaR ------------------------------------------------------------------

namespace {

AsymVariance dq_var_from_data(const LossSample& data, const Margins& margins,
                              const Distribution& sumplug, RiskLevel a, int max_lag,
                              LagWeights weights, bool mc_path) {
  if (static_cast<Eigen::Index>(margins.size()) != data.cols()) {
    throw InvalidInput("margin plug-in count does not match the data width");
  }
  const auto ing = var_ingredients(margins, sumplug, a);
  const Eigen::MatrixXd series = indicator_series(data, ing.t, ing.t_sum);
  Eigen::MatrixXd cov = long_run_cov(series, max_lag, weights);
  const double se = mc_path ? projection_se(series, ing.a) : 0.0;
  return assemble(ing.a, std::move(cov), std::nullopt, max_lag,
                  mc_path ? false : has_duplicate_sums(data), se);
}

}  // namespace

AsymVariance sigma2_dq_var_iid(const LossSample& data, const Margins& margins,
                               const Distribution& sumplug, RiskLevel a) {
  return dq_var_from_data(data, margins, sumplug, a, 0, LagWeights::BARTLETT, false);
}

AsymVariance sigma2_dq_var_iid(const JointSampler& sampler, const Margins& margins,
                               const Distribution& sumplug, RiskLevel a,
                               const MonteCarlo& mc) {
  const LossSample draws = sampler(mc.draws, mc.seed);
  return dq_var_from_data(draws, margins, sumplug, a, 0, LagWeights::BARTLETT, true);
}

AsymVariance sigma2_dq_var_mixing(const LossSample& series, const Margins& margins,
                                  const Distribution& sumplug, RiskLevel a, int max_lag,
                                  LagWeights weights) {
  return dq_var_from_data(series, margins, sumplug, a, max_lag, weights, false);
}

// --- DQ^ES -------------------------------------------------------------------

namespace {

AsymVariance dq_es_from_data(const LossSample& data, const Margins& margins,
                             const Distribution& sumplug, RiskLevel a, int max_lag,
                             LagWeights weights, bool mc_path) {
  if (static_cast<Eigen::Index>(margins.size()) != data.cols()) {
    throw InvalidInput("margin plug-in count does not match the data width");
  }
  const auto ing = es_ingredients(margins, sumplug, a);
  const Eigen::MatrixXd series = positive_part_series(data, ing.t, ing.s);
  Eigen::MatrixXd cov = long_run_cov(series, max_lag, weights);
  const double se = mc_path ? projection_se(series, ing.a) / (ing.c * ing.c) : 0.0;
  return assemble(ing.a, std::move(cov), ing.c, max_lag,
                  mc_path ? false : has_duplicate_sums(data), se);
}

}  // namespace

AsymVariance sigma2_dq_es_iid(const LossSample& data, const Margins& margins,
                              const Distribution& sumplug, RiskLevel a) {
  return dq_es_from_data(data, margins, sumplug, a, 0, LagWeights::BARTLETT, false);
}

AsymVariance sigma2_dq_es_iid(const JointSampler& sampler, const Margins& margins,
                              const Distribution& sumplug, RiskLevel a, const MonteCarlo& mc) {
  const LossSample draws = sampler(mc.draws, mc.seed);
  return dq_es_from_data(draws, margins, sumplug, a, 0, LagWeights::BARTLETT, true);
}

AsymVariance sigma2_dq_es_mixing(const LossSample& series, const Margins& margins,
                                 const Distribution& sumplug, RiskLevel a, int max_lag,
                                 LagWeights weights) {
  return dq_es_from_data(series, margins, sumplug, a, max_lag, weights, false);
}

// --- DQ^ex -------------------------------------------------------------------

namespace {

AsymVariance dq_ex_from_data(const LossSample& data, const Margins& margins,
                             const Distribution& sumplug, RiskLevel a, bool mc_path) {
  if (static_cast<Eigen::Index>(margins.size()) != data.cols()) {
    throw InvalidInput("margin plug-in count does not match the data width");
  }
  const auto parts = dq_ex_ingredients(margins, sumplug, a);
  const Eigen::VectorXd a_ex = parts.grad_h * parts.grad_g;
  const Eigen::MatrixXd series = expectile_series(data, parts.y, parts.t);
  Eigen::MatrixXd cov = long_run_cov(series, 0, LagWeights::BARTLETT);
  const double se = mc_path ? projection_se(series, a_ex) : 0.0;
  return assemble(a_ex, std::move(cov), std::nullopt, 0,
                  mc_path ? false : has_duplicate_sums(data), se);
}

}  // namespace

AsymVariance sigma2_dq_ex_iid(const LossSample& data, const Margins& margins,
                              const Distribution& sumplug, RiskLevel a) {
  return dq_ex_from_data(data, margins, sumplug, a, false);
}

AsymVariance sigma2_dq_ex_iid(const JointSampler& sampler, const Margins& margins,
                              const Distribution& sumplug, RiskLevel a, const MonteCarlo& mc) {
  const LossSample draws = sampler(mc.draws, mc.seed);
  return dq_ex_from_data(draws, margins, sumplug, a, true);
}

// --- DR ----------------------------------------------------------------------

namespace {

AsymVariance dr_from_data(const LossSample& data, const Margins& margins,
                          const Distribution& sumplug, RiskLevel a, RiskMeasureKind measure,
                          bool mc_path) {
  if (static_cast<Eigen::Index>(margins.size()) != data.cols()) {
    throw InvalidInput("margin plug-in count does not match the data width");
  }
  const auto n = margins.size();
  const double alpha = a.value();

  std::vector<double> t(n);
  double t_sum = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    t[i] = margins[i]->quantile(1.0 - alpha);
    t_sum += t[i];
  }
  const double s = sumplug.quantile(1.0 - alpha);

  Eigen::VectorXd r(static_cast<Eigen::Index>(n + 1));
  Eigen::MatrixXd series;
  if (measure == RiskMeasureKind::VAR) {
    if (t_sum == 0.0) {
      throw ZeroDenominator("sum of marginal VaR is zero; the DR variance diverges");
    }
    const double g = positive_density(sumplug, s, "the sum at its quantile");
    for (std::size_t i = 0; i < n; ++i) {
      const double f = positive_density(*margins[i], t[i], "a margin at its quantile");
      r[static_cast<Eigen::Index>(i)] = s / (f * t_sum * t_sum);
    }
    r[static_cast<Eigen::Index>(n)] = -1.0 / (g * t_sum);
    series = indicator_series(data, t, s);
  } else {
    double es_sum_marginals = 0.0;
    for (std::size_t i = 0; i < n; ++i) es_sum_marginals += margins[i]->es(alpha);
    if (es_sum_marginals == 0.0) {
      throw ZeroDenominator("sum of marginal ES is zero; the DR variance diverges");
    }
    const double es_s = sumplug.es(alpha);
    const double denom2 = es_sum_marginals * es_sum_marginals;
    for (std::size_t i = 0; i < n; ++i) {
      r[static_cast<Eigen::Index>(i)] = -es_s / (alpha * denom2);
    }
    r[static_cast<Eigen::Index>(n)] = 1.0 / (alpha * es_sum_marginals);
    series = positive_part_series(data, t, s);
  }

  Eigen::MatrixXd cov = long_run_cov(series, 0, LagWeights::BARTLETT);
  const double se = mc_path ? projection_se(series, r) : 0.0;
  return assemble(r, std::move(cov), std::nullopt, 0,
                  mc_path ? false : has_duplicate_sums(data), se);
}

}  // namespace

AsymVariance sigma2_dr(const LossSample& data, const Margins& margins,
                       const Distribution& sumplug, RiskLevel a, RiskMeasureKind measure) {
  return dr_from_data(data, margins, sumplug, a, measure, false);
}

AsymVariance sigma2_dr(const JointSampler& sampler, const Margins& margins,
                       const Distribution& sumplug, RiskLevel a, RiskMeasureKind measure,
                       const MonteCarlo& mc) {
  const LossSample draws = sampler(mc.draws, mc.seed);
  return dr_from_data(draws, margins, sumplug, a, measure, true);
}

}  // namespace dqest
