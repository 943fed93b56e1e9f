#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "dqest/asymvar.hpp"
#include "dqest/elliptical.hpp"

namespace dqest {

// Equicorrelated elliptical model point: family, dimension n, correlation r,
// degrees of freedom nu (ignored for NORMAL).
struct ModelSpec {
  Family family = Family::NORMAL;
  int n = 5;
  double r = 0.3;
  double nu = 3.0;

  EllipticalModel build() const;
};

struct ExperimentSpec {
  IndexKind estimator = IndexKind::DQ_VAR;
  ModelSpec model;
  double alpha = 0.1;
  std::int64_t n_samples = 5000;
  int n_reps = 2000;
  std::uint64_t seed = 1;
  // Optional per-component location offset applied to every draw (the DR
  // location-sensitivity experiments); DQ indices are invariant to it.
  std::optional<std::vector<double>> shift;
  MonteCarlo mc;     // budget for the theoretical-variance covariance step
  int threads = 0;   // 0 = hardware concurrency
};

struct Histogram {
  std::vector<double> edges;   // size bins+1
  std::vector<int> counts;     // size bins
};

struct ExperimentResult {
  std::vector<double> estimates;             // successful replications, rep order
  std::vector<int> failed_reps;              // replication indices that errored
  std::vector<std::string> failure_messages; // parallel to failed_reps
  double true_value = 0.0;
  double theory_sigma2 = 0.0;
  double sample_mean = 0.0;
  std::optional<double> sample_var_scaled;   // N * unbiased sample variance
  Histogram histogram;                       // Freedman-Diaconis bins
  double normal_overlay_mean = 0.0;          // true_value
  double normal_overlay_var = 0.0;           // theory_sigma2 / N
};

// M independent estimates with replication-indexed seeds; deterministic for a
// fixed spec + seed regardless of the thread count.
ExperimentResult run_histogram_experiment(const ExperimentSpec& spec);

// True index value of the spec's model (with optional shift, which only
// matters for DR).
double true_value_for(const ExperimentSpec& spec);

// Plug-in asymptotic variance of the spec's estimator on the spec's model.
double theory_sigma2_for(const ExperimentSpec& spec);

enum class SweepVar { ALPHA, R, N, NU };

struct CurvePoint {
  double grid_value = 0.0;
  double sigma2 = 0.0;
};

// Theoretical-variance table over a 1-D parameter grid (all other parameters
// held at the base spec).
std::vector<CurvePoint> run_variance_curve(const ExperimentSpec& base, SweepVar var,
                                           const std::vector<double>& grid);

struct DrShiftPoint {
  double eps = 0.0;
  double sigma2_var = 0.0;
  double sigma2_es = 0.0;
  bool divergent_var = false;  // denominator hit zero at this grid point
  bool divergent_es = false;
};

// DR variance on the recentered model X - (phi(X_1),...,phi(X_n)) + eps,
// each measure centered by itself.  Singular grid points are flagged.
std::vector<DrShiftPoint> run_dr_shift_sweep(const EllipticalModel& model, RiskLevel a,
                                             const std::vector<double>& eps_grid,
                                             const MonteCarlo& mc = {});

// One-sample Kolmogorov-Smirnov statistic against N(0,1) and its asymptotic
// p-value (with the small-sample correction on the effective sqrt(n)).
double ks_statistic_vs_std_normal(std::vector<double> values);
double ks_pvalue(double d, std::size_t n);

// Freedman-Diaconis histogram.
Histogram make_histogram(const std::vector<double>& values);

// Run `count` index-addressed tasks on up to `threads` workers; results must
// be written to index-addressed slots so the schedule cannot change them.
void parallel_for(int count, int threads, const std::function<void(int)>& fn);

}  // namespace dqest
