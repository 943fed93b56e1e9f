#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "dqest/dqcore.hpp"
#include "dqest/empdist.hpp"

namespace dqest {

// AR(1)-GARCH(1,1) parameters with variance-standardized Student-t
// innovations:
//   X_s = c + phi X_{s-1} + eps_s,  eps_s = sigma_s z_s,  z_s ~ t_nu(0,1),
//   sigma_s^2 = omega + alpha_g eps_{s-1}^2 + beta_g sigma_{s-1}^2.
struct GarchParams {
  double c = 0.0;
  double phi = 0.0;
  double omega = 1e-4;
  double alpha_g = 0.05;
  double beta_g = 0.90;
  double nu = 8.0;

  bool variance_stationary() const { return alpha_g + beta_g < 1.0; }
  void validate() const;  // omega > 0, alpha_g/beta_g >= 0, |phi| < 1, nu > 2
};

struct RollingConfig {
  int window = 500;
  int step = 21;            // fixed-stride approximation of monthly stepping
  int boot_reps = 500;
  double ci_level = 0.95;
  double alpha = 0.1;
  IndexKind index_kind = IndexKind::DQ_VAR;
  int threads = 0;          // 0 = hardware concurrency

  void validate() const;    // window >= 50, step >= 1, boot_reps >= 2
};

// Conditional-variance filter output for a fitted series.
struct GarchFilter {
  std::vector<double> eps;     // AR residuals, length T-1
  std::vector<double> sigma2;  // conditional variances, length T-1
  double sigma2_init = 0.0;    // the recursion seed actually used
};

// Runs the AR/GARCH recursions of the model above over a time-ordered series.
// sigma^2 starts at omega/(1-alpha_g-beta_g) when that is positive (variance
// stationarity) and at the sample variance of the AR residuals otherwise.
GarchFilter garch_filter(const std::vector<double>& series, const GarchParams& params);

// Student-t quasi log-likelihood of the filtered series.
double garch_log_likelihood(const std::vector<double>& series, const GarchParams& params);

// Quasi-MLE via multi-start Nelder-Mead on an unconstrained reparameterization
// (log omega, log(nu-2), logistic phi and ARCH/GARCH simplex).  Throws
// FitFailed when the likelihood is non-finite at every start (e.g. a constant
// series).
GarchParams fit_ar_garch(const std::vector<double>& series,
                         const std::optional<GarchParams>& init = std::nullopt);

// z_hat_s = (X_s - c - phi X_{s-1}) / sigma_hat_s, length = input length - 1.
UnivariateSample standardized_residuals(const std::vector<double>& series,
                                        const GarchParams& params);

// One fitted asset of an aligned panel window.
struct FittedAsset {
  GarchParams params;
  std::vector<double> residuals;  // standardized, length m-1
  double x0 = 0.0;                // first window observation
  double sigma2_init = 0.0;       // recursion seed per the fit rule
};

struct FittedPanel {
  std::vector<FittedAsset> assets;  // residual rows share the same dates
};

FittedPanel fit_panel_window(const Eigen::MatrixXd& window);

// Cross-sectionally joint residual bootstrap: every replication draws ONE
// index vector with replacement and applies it to all assets, preserving
// cross-sectional dependence; each asset's path is rebuilt with its own
// parameters from its first window observation.  Deterministic per
// (seed, replication).
std::vector<LossSample> joint_residual_bootstrap(const FittedPanel& panel, int boot_reps,
                                                 std::uint64_t seed);

// Simulate a path of the model (burn-in discarded); test/verification helper.
std::vector<double> simulate_ar_garch(const GarchParams& params, int length,
                                      std::uint64_t seed, int burn_in = 500);

struct DqSeriesPoint {
  std::string date;     // last date of the window
  bool ok = false;
  double estimate = 0.0;
  double boot_mean = 0.0;
  double ci_lo = 0.0;
  double ci_hi = 0.0;
  double boot_var = 0.0;
  std::string error;    // set when !ok (fit failure); gaps are never filled
};

struct DqSeries {
  std::vector<DqSeriesPoint> points;
  // Aligned with points; per-asset fitted parameters of each window, empty
  // for gap windows.
  std::vector<std::vector<GarchParams>> window_fits;
};

// Date-aligned panel of losses.
struct Panel {
  std::vector<std::string> dates;  // ISO-8601, ascending
  std::vector<std::string> tickers;
  Eigen::MatrixXd values;          // rows = dates, cols = tickers
  int dropped_rows = 0;            // unaligned/incomplete rows removed on load
};

// Rolling-window point estimates with percentile bootstrap confidence bands.
DqSeries rolling_dq_with_ci(const Panel& panel, const RollingConfig& cfg, std::uint64_t seed);

// CSV panel: header `date,TICKER1,...`; rows with missing or unparsable cells
// are dropped (counted in Panel::dropped_rows).  With from_prices, values are
// prices and log-losses -log(P_t/P_{t-1}) are computed.
Panel load_panel_csv(const std::string& path, bool from_prices = false);

// `date,estimate,boot_mean,ci_lo,ci_hi,boot_var`; gap windows have empty cells.
std::string dq_series_to_csv(const DqSeries& series);

}  // namespace dqest
