#include <doctest.h>

#include <cmath>
#include <random>
#include <vector>

#include "dqest/elliptical.hpp"
#include "dqest/errors.hpp"
#include "dqest/simharness.hpp"
#include "oracles.hpp"

using namespace dqest;

namespace {

ExperimentSpec quick_spec(IndexKind kind) {
  ExperimentSpec spec;
  spec.estimator = kind;
  spec.model = ModelSpec{};  // default normal, n=5, r=0.3
  spec.alpha = 0.1;
  spec.n_samples = 1500;
  spec.n_reps = 300;
  spec.seed = 20;
  spec.mc = MonteCarlo{200000, 3};
  return spec;
}

}  // namespace

TEST_CASE("histogram experiment is reproducible and thread-count independent") {
  auto spec = quick_spec(IndexKind::DQ_VAR);
  spec.n_reps = 60;
  spec.threads = 1;
  const auto a = run_histogram_experiment(spec);
  spec.threads = 4;
  const auto b = run_histogram_experiment(spec);
  REQUIRE(a.estimates.size() == b.estimates.size());
  for (std::size_t i = 0; i < a.estimates.size(); ++i) {
    CHECK(a.estimates[i] == b.estimates[i]);
  }
  CHECK(a.sample_mean == b.sample_mean);
  CHECK(a.histogram.edges == b.histogram.edges);
}

TEST_CASE("histogram experiment sanity on the default model") {
  const auto res = run_histogram_experiment(quick_spec(IndexKind::DQ_VAR));
  CHECK(res.failed_reps.empty());
  CHECK(res.true_value == doctest::Approx(0.2668).epsilon(0.01));
  CHECK(std::fabs(res.sample_mean - res.true_value) < 0.02);
  REQUIRE(res.sample_var_scaled.has_value());
  CHECK(std::fabs(*res.sample_var_scaled - res.theory_sigma2) / res.theory_sigma2 < 0.35);
  CHECK(res.normal_overlay_mean == res.true_value);
  CHECK(res.normal_overlay_var == doctest::Approx(res.theory_sigma2 / 1500.0));
  // sample statistics recomputable from the estimates
  CHECK(res.sample_mean == doctest::Approx(testutil::sample_mean(res.estimates)).epsilon(1e-12));
  CHECK(*res.sample_var_scaled ==
        doctest::Approx(1500.0 * testutil::sample_variance(res.estimates)).epsilon(1e-12));
  // histogram counts cover every estimate
  int total = 0;
  for (int c : res.histogram.counts) total += c;
  CHECK(total == static_cast<int>(res.estimates.size()));
}

TEST_CASE("single replication reports no scaled variance") {
  auto spec = quick_spec(IndexKind::DQ_VAR);
  spec.n_reps = 1;
  const auto res = run_histogram_experiment(spec);
  CHECK(res.estimates.size() == 1);
  CHECK_FALSE(res.sample_var_scaled.has_value());
}

TEST_CASE("coverage of nominal CIs built from the theory variance") {
  auto spec = quick_spec(IndexKind::DQ_VAR);
  spec.n_samples = 2000;
  spec.n_reps = 400;
  spec.mc = MonteCarlo{400000, 5};
  const auto res = run_histogram_experiment(spec);
  const double half =
      1.959963984540054 * std::sqrt(res.theory_sigma2 / static_cast<double>(spec.n_samples));
  int covered = 0;
  for (double v : res.estimates) {
    if (res.true_value >= v - half && res.true_value <= v + half) ++covered;
  }
  const double rate = static_cast<double>(covered) / static_cast<double>(res.estimates.size());
  CHECK(rate > 0.93);
  CHECK(rate < 0.97 + 1e-9);
}

TEST_CASE("variance curve over alpha falls monotonically") {
  auto spec = quick_spec(IndexKind::DQ_VAR);
  spec.mc = MonteCarlo{300000, 11};
  const std::vector<double> grid{0.05, 0.15, 0.3};
  const auto curve = run_variance_curve(spec, SweepVar::ALPHA, grid);
  REQUIRE(curve.size() == 3);
  CHECK(curve[0].sigma2 > curve[1].sigma2);
  CHECK(curve[1].sigma2 > curve[2].sigma2);
}

TEST_CASE("DR shift sweep diverges near zero while DQ stays put") {
  const EllipticalModel model(Family::NORMAL, Eigen::VectorXd::Zero(3), equicorr_sigma(3, 0.3));
  const RiskLevel a(0.1);
  const std::vector<double> eps{10.0, 1.0, 0.1};
  const auto pts = run_dr_shift_sweep(model, a, eps, MonteCarlo{150000, 7});
  REQUIRE(pts.size() == 3);
  CHECK(pts[0].sigma2_var < pts[1].sigma2_var);
  CHECK(pts[1].sigma2_var < pts[2].sigma2_var);
  CHECK(pts[0].sigma2_es < pts[1].sigma2_es);
  CHECK(pts[1].sigma2_es < pts[2].sigma2_es);

  // DQ point estimates are exactly invariant under the recentering shift
  const LossSample draws = model.sample(2000, 99);
  std::vector<double> dq_values;
  for (double e : eps) {
    Eigen::MatrixXd shifted = draws.data();
    for (Eigen::Index i = 0; i < 3; ++i) {
      const double phi = model.margin_plugin(static_cast<int>(i))->var(a.value());
      shifted.col(i).array() += -phi + e;
    }
    dq_values.push_back(dq_var(LossSample(std::move(shifted)), a).value);
  }
  CHECK(std::fabs(dq_values[0] - dq_values[1]) < 1e-12);
  CHECK(std::fabs(dq_values[1] - dq_values[2]) < 1e-12);
}

TEST_CASE("KS statistic behaves on null and alternative") {
  std::mt19937_64 rng(1234);
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::vector<double> null_draws(2000), shifted(2000);
  for (std::size_t i = 0; i < null_draws.size(); ++i) {
    null_draws[i] = gauss(rng);
    shifted[i] = gauss(rng) + 0.5;
  }
  const double d_null = ks_statistic_vs_std_normal(null_draws);
  const double d_alt = ks_statistic_vs_std_normal(shifted);
  CHECK(ks_pvalue(d_null, null_draws.size()) > 0.01);
  CHECK(ks_pvalue(d_alt, shifted.size()) < 0.001);
}

TEST_CASE("standardized DQ estimates pass the KS normality check") {
  auto spec = quick_spec(IndexKind::DQ_ES);
  spec.n_samples = 3000;
  spec.n_reps = 500;
  spec.mc = MonteCarlo{400000, 13};
  const auto res = run_histogram_experiment(spec);
  std::vector<double> z;
  z.reserve(res.estimates.size());
  const double sd = std::sqrt(res.theory_sigma2 / static_cast<double>(spec.n_samples));
  for (double v : res.estimates) z.push_back((v - res.true_value) / sd);
  CHECK(ks_pvalue(ks_statistic_vs_std_normal(z), z.size()) > 0.01);
}
