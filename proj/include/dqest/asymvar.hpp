#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include "dqest/dqcore.hpp"
#include "dqest/empdist.hpp"

namespace dqest {

// Lag weights for the truncated long-run covariance
//   Sigma_hat = Gamma_0 + sum_{l=1..L} w(l) (Gamma_l + Gamma_l').
// BARTLETT uses w(l) = 1 - l/(L+1) (positive semidefinite); FLAT uses w = 1,
// the literal truncated series, which may produce an indefinite estimate.
enum class LagWeights { BARTLETT, FLAT };

// Monte Carlo budget for covariance entries of analytic models (joint
// indicator/positive-part moments of elliptical sums have no closed form).
struct MonteCarlo {
  std::int64_t draws = 1'000'000;
  std::uint64_t seed = 20240915;
};

using JointSampler = std::function<LossSample(std::int64_t, std::uint64_t)>;
using Margins = std::vector<DistributionPtr>;

// sigma^2 together with its ingredients so the quadratic form is auditable:
// sigma2 == a_vec' cov_mat a_vec (divided by c_const^2 when present), unless
// floored_negative reports that an indefinite long-run estimate was clipped.
struct AsymVariance {
  double sigma2 = 0.0;
  Eigen::VectorXd a_vec;
  Eigen::MatrixXd cov_mat;
  std::optional<double> c_const;
  int lag_window = 0;
  bool floored_negative = false;
  // Duplicate row sums in the input series break the no-ties condition
  // behind the long-run variance formulas; reported, never fatal.
  bool ties_warning = false;
  // Standard error of sigma2 from the Monte Carlo covariance step; 0 for
  // data inputs.
  double mc_std_err = 0.0;

  double recompute() const;
};

// Long-run covariance of a (rows = time) vector series, divisor N.
// max_lag = 0 reduces to the plain covariance matrix.
Eigen::MatrixXd long_run_cov(const Eigen::MatrixXd& series, int max_lag, LagWeights weights);

// The unique beta in (0,1) with ES_beta(sum_dist) = target, by bisection on
// the strictly decreasing map beta -> ES_beta; tolerance 1e-10 in beta.
// The level `a` seeds the bracket.  Throws AssumptionViolated when the target
// is outside the attainable ES range.
double solve_alpha_star(const Distribution& sum_dist, double target, RiskLevel a);
double solve_alpha_star(const UnivariateSample& sum_sample, double target, RiskLevel a);

// --- i.i.d. variances -------------------------------------------------------
// Data inputs estimate the covariance by sample moments of the observed
// series; sampler inputs draw `mc.draws` joints at the fixed seed.  Thresholds
// and densities always come from the margin/sum plug-ins.

AsymVariance sigma2_dq_var_iid(const LossSample& data, const Margins& margins,
                               const Distribution& sumplug, RiskLevel a);
AsymVariance sigma2_dq_var_iid(const JointSampler& sampler, const Margins& margins,
                               const Distribution& sumplug, RiskLevel a,
                               const MonteCarlo& mc = {});

AsymVariance sigma2_dq_es_iid(const LossSample& data, const Margins& margins,
                              const Distribution& sumplug, RiskLevel a);
AsymVariance sigma2_dq_es_iid(const JointSampler& sampler, const Margins& margins,
                              const Distribution& sumplug, RiskLevel a,
                              const MonteCarlo& mc = {});

AsymVariance sigma2_dq_ex_iid(const LossSample& data, const Margins& margins,
                              const Distribution& sumplug, RiskLevel a);
AsymVariance sigma2_dq_ex_iid(const JointSampler& sampler, const Margins& margins,
                              const Distribution& sumplug, RiskLevel a,
                              const MonteCarlo& mc = {});

// --- alpha-mixing variances (long-run covariance) ---------------------------
// Rows of `series` must be in time order.  max_lag = 0 reproduces the i.i.d.
// value bit for bit.

AsymVariance sigma2_dq_var_mixing(const LossSample& series, const Margins& margins,
                                  const Distribution& sumplug, RiskLevel a, int max_lag,
                                  LagWeights weights = LagWeights::BARTLETT);
AsymVariance sigma2_dq_es_mixing(const LossSample& series, const Margins& margins,
                                 const Distribution& sumplug, RiskLevel a, int max_lag,
                                 LagWeights weights = LagWeights::BARTLETT);

// --- diversification ratio --------------------------------------------------

AsymVariance sigma2_dr(const LossSample& data, const Margins& margins,
                       const Distribution& sumplug, RiskLevel a, RiskMeasureKind measure);
AsymVariance sigma2_dr(const JointSampler& sampler, const Margins& margins,
                       const Distribution& sumplug, RiskLevel a, RiskMeasureKind measure,
                       const MonteCarlo& mc = {});

// --- expectile-variance ingredients ------------------------------------------
// Exposed so the gradient matrix can be checked against finite differences of
// the underlying plug-in map.

struct ExpectileParts {
  double t = 0.0;       // sum of marginal expectiles
  double g_at_t = 0.0;  // G(t)
  double theta1 = 0.0;  // E (S - t)_+
  double theta2 = 0.0;  // E |S - t|
  std::vector<double> y;           // tilde quantiles (= marginal expectiles)
  std::vector<double> mu;          // marginal means
  std::vector<double> mu_minus;    // E (X_i - y_i)_-
  std::vector<double> tilde_f_at_y;
  Eigen::VectorXd v;               // (theta1, theta2, mu_1^-, mu_1, ...)
  Eigen::MatrixXd grad_h;          // (2n+2) x 2
  Eigen::Vector2d grad_g;
};

ExpectileParts dq_ex_ingredients(const Margins& margins, const Distribution& sumplug,
                                 RiskLevel a);

}  // namespace dqest
