#include <doctest.h>

#include <Eigen/Eigenvalues>
#include <cmath>
#include <memory>
#include <random>
#include <vector>

#include "dqest/asymvar.hpp"
#include "dqest/elliptical.hpp"
#include "dqest/errors.hpp"
#include "dqest/rng.hpp"
#include "dqest/tsboot.hpp"
#include "oracles.hpp"

using namespace dqest;

namespace {

EllipticalModel normal_model(int n = 5, double r = 0.3) {
  return EllipticalModel(Family::NORMAL, Eigen::VectorXd::Zero(n), equicorr_sigma(n, r));
}

EllipticalModel t_model(double nu = 3.0, int n = 5, double r = 0.3) {
  return EllipticalModel(Family::STUDENT_T, Eigen::VectorXd::Zero(n), equicorr_sigma(n, r), nu);
}

Margins model_margins(const EllipticalModel& m) {
  Margins out;
  for (int i = 0; i < m.dim(); ++i) out.push_back(m.margin_plugin(i));
  return out;
}

// stationary vector AR(1) with equicorrelated Gaussian innovations and
// N(0, sigma) marginals
LossSample var1_panel(double rho, int n, double r, std::int64_t length, std::uint64_t seed) {
  const EllipticalModel innov(Family::NORMAL, Eigen::VectorXd::Zero(n),
                              equicorr_sigma(n, r) * (1.0 - rho * rho));
  const LossSample shocks = innov.sample(length + 200, seed);
  Eigen::MatrixXd path(length, n);
  Eigen::VectorXd state = Eigen::VectorXd::Zero(n);
  for (Eigen::Index k = 0; k < shocks.rows(); ++k) {
    state = rho * state + shocks.data().row(k).transpose();
    if (k >= 200) path.row(k - 200) = state.transpose();
  }
  return LossSample(std::move(path));
}

}  // namespace

TEST_CASE("long-run covariance basics") {
  std::mt19937_64 rng(1);
  Eigen::MatrixXd series(300, 3);
  std::normal_distribution<double> gauss(0.0, 1.0);
  for (Eigen::Index k = 0; k < series.rows(); ++k) {
    for (Eigen::Index i = 0; i < series.cols(); ++i) series(k, i) = gauss(rng);
  }
  series.col(2).setConstant(4.2);  // zero-variance coordinate

  const Eigen::MatrixXd lag0 = long_run_cov(series, 0, LagWeights::BARTLETT);
  // plain covariance, divisor N
  const Eigen::RowVectorXd mean = series.colwise().mean();
  const Eigen::MatrixXd centered = series.rowwise() - mean;
  const Eigen::MatrixXd expect = centered.transpose() * centered / 300.0;
  CHECK((lag0 - expect).cwiseAbs().maxCoeff() < 1e-14);
  CHECK(lag0.row(2).cwiseAbs().maxCoeff() == doctest::Approx(0.0));

  // reversing time leaves the symmetrized estimate unchanged
  Eigen::MatrixXd reversed = series.colwise().reverse();
  const Eigen::MatrixXd fwd = long_run_cov(series, 7, LagWeights::BARTLETT);
  const Eigen::MatrixXd bwd = long_run_cov(reversed, 7, LagWeights::BARTLETT);
  CHECK((fwd - bwd).cwiseAbs().maxCoeff() < 1e-12);

  // symmetry to machine precision
  CHECK((fwd - fwd.transpose()).cwiseAbs().maxCoeff() < 1e-14);
}

TEST_CASE("solve_alpha_star fixed points and analytic round-trip") {
  const auto sum_normal = std::make_shared<LocationScale>(std::make_shared<StdNormal>(), 0.0,
                                                          std::sqrt(11.0));
  const RiskLevel a(0.1);
  // target at the index level returns the level itself
  CHECK(solve_alpha_star(*sum_normal, sum_normal->es(0.1), a) == doctest::Approx(0.1).epsilon(1e-8));
  // comonotonic identical margins: n * ES_a(X) for the sum n * X
  const auto sum3 = std::make_shared<LocationScale>(std::make_shared<StdNormal>(), 0.0, 3.0);
  const StdNormal base;
  CHECK(solve_alpha_star(*sum3, 3.0 * base.es(0.1), a) == doctest::Approx(0.1).epsilon(1e-8));
  // analytic normal ES oracle phi(Phi^-1(1-beta))/beta at beta = 0.05
  const double target = std::sqrt(11.0) * base.pdf(base.quantile(0.95)) / 0.05;
  CHECK(solve_alpha_star(*sum_normal, target, a) == doctest::Approx(0.05).epsilon(1e-7));

  // unattainable target on an empirical sum
  const UnivariateSample sums(std::vector<double>{0.0, 1.0, 2.0, 3.0});
  CHECK_THROWS_AS(solve_alpha_star(sums, 3.0, RiskLevel(0.1)), AssumptionViolated);
  CHECK_THROWS_AS(solve_alpha_star(sums, 10.0, RiskLevel(0.1)), AssumptionViolated);
}

TEST_CASE("dq_var variance: reported values and singleton degeneracy") {
  const RiskLevel a(0.1);
  {
    const auto m = normal_model();
    const auto av = sigma2_dq_var_iid(m.sampler(), model_margins(m), *m.sum_plugin(), a);
    CHECK(std::fabs(av.sigma2 - 1.88) < 0.1);
    CHECK(av.mc_std_err > 0.0);
    CHECK(av.sigma2 == doctest::Approx(av.recompute()));
  }
  {
    const auto m = t_model();
    const auto av = sigma2_dq_var_iid(m.sampler(), model_margins(m), *m.sum_plugin(), a);
    CHECK(std::fabs(av.sigma2 - 2.52) < 0.15);
  }
  {
    const auto m = normal_model(1, 0.0);
    const auto av = sigma2_dq_var_iid(m.sampler(), model_margins(m), *m.sum_plugin(), a,
                                      MonteCarlo{100000, 4});
    CHECK(av.sigma2 == doctest::Approx(0.0));
  }
}

TEST_CASE("dq_es variance: reported values") {
  const RiskLevel a(0.1);
  {
    const auto m = normal_model();
    const auto av = sigma2_dq_es_iid(m.sampler(), model_margins(m), *m.sum_plugin(), a);
    CHECK(std::fabs(av.sigma2 - 1.48) < 0.1);
    REQUIRE(av.c_const.has_value());
    CHECK(*av.c_const < 0.0);
    CHECK(av.sigma2 == doctest::Approx(av.recompute()));
  }
  {
    const auto m = t_model();
    const auto av = sigma2_dq_es_iid(m.sampler(), model_margins(m), *m.sum_plugin(), a);
    CHECK(std::fabs(av.sigma2 - 5.28) < 0.3);
  }
}

TEST_CASE("dq_es variance: comonotonic margins degenerate consistently") {
  // two identical margins: the estimator is constant 1, the plug-in variance 0
  const RiskLevel a(0.1);
  const auto base = std::make_shared<StdNormal>();
  Margins margins{base, base};
  const LocationScale sum(base, 0.0, 2.0);
  JointSampler sampler = [](std::int64_t n, std::uint64_t seed) {
    const EllipticalModel one(Family::NORMAL, Eigen::VectorXd::Zero(1), equicorr_sigma(1, 0.0));
    const LossSample x = one.sample(n, seed);
    Eigen::MatrixXd dup(n, 2);
    dup.col(0) = x.data().col(0);
    dup.col(1) = x.data().col(0);
    return LossSample(std::move(dup));
  };
  const auto av = sigma2_dq_es_iid(sampler, margins, sum, a, MonteCarlo{200000, 9});
  CHECK(av.sigma2 < 1e-10);

  // Monte Carlo variance of the estimator itself is zero too
  const EllipticalModel one(Family::NORMAL, Eigen::VectorXd::Zero(1), equicorr_sigma(1, 0.0));
  std::vector<double> ests;
  for (int k = 0; k < 50; ++k) {
    const LossSample x = one.sample(500, derive_seed(31, static_cast<std::uint64_t>(k)));
    Eigen::MatrixXd dup(500, 2);
    dup.col(0) = x.data().col(0);
    dup.col(1) = x.data().col(0);
    ests.push_back(dq_es(LossSample(std::move(dup)), a).value);
  }
  CHECK(std::fabs(testutil::sample_mean(ests) - 1.0) < 1e-9);
  CHECK(testutil::sample_variance(ests) * 500.0 < 1e-12);
}

TEST_CASE("dq_es variance matches a Monte Carlo oracle on the default model") {
  // simulation oracle: N * variance of the estimator over replications
  const RiskLevel a(0.1);
  const auto m = normal_model();
  const auto av = sigma2_dq_es_iid(m.sampler(), model_margins(m), *m.sum_plugin(), a,
                                   MonteCarlo{400000, 17});
  const std::int64_t n = 2000;
  const int reps = 600;
  std::vector<double> ests;
  ests.reserve(reps);
  for (int k = 0; k < reps; ++k) {
    ests.push_back(dq_es(m.sample(n, derive_seed(77, static_cast<std::uint64_t>(k))), a).value);
  }
  const double mc = static_cast<double>(n) * testutil::sample_variance(ests);
  CHECK(std::fabs(av.sigma2 - mc) / mc < 0.10 + 2.0 * std::sqrt(2.0 / reps));
}

TEST_CASE("dq_ex variance: values and gradient finite differences") {
  const RiskLevel a(0.1);
  {
    // The plug-in value is cross-checked against the estimator's sampling
    // variance below; 0.686 is the frozen regression value for the default
    // normal model (independent MC gives 0.664 +/- 0.017 at N=5000 and
    // 0.677 +/- 0.018 at N=20000).
    const auto m = normal_model();
    const auto av = sigma2_dq_ex_iid(m.sampler(), model_margins(m), *m.sum_plugin(), a);
    CHECK(std::fabs(av.sigma2 - 0.686) < 0.02);
    CHECK(av.sigma2 == doctest::Approx(av.recompute()));

    const std::int64_t n = 4000;
    const int reps = 800;
    std::vector<double> ests;
    ests.reserve(reps);
    for (int k = 0; k < reps; ++k) {
      ests.push_back(dq_ex(m.sample(n, derive_seed(555, static_cast<std::uint64_t>(k))), a).value);
    }
    const double mc = static_cast<double>(n) * testutil::sample_variance(ests);
    CHECK(std::fabs(av.sigma2 - mc) / mc < 0.10 + 2.0 * std::sqrt(2.0 / reps));
  }
  {
    const auto m = t_model();
    const auto av = sigma2_dq_ex_iid(m.sampler(), model_margins(m), *m.sum_plugin(), a);
    CHECK(std::fabs(av.sigma2 - 2.53) < 0.15);
  }

  // finite-difference check of grad_h columns on the plug-in map
  const auto m = normal_model(3, 0.4);
  const auto margins = model_margins(m);
  const auto sum = m.sum_plugin();
  const auto parts = dq_ex_ingredients(margins, *sum, a);
  const std::size_t dim = 2 * margins.size() + 2;

  auto h = [&](const Eigen::VectorXd& x, int which) {
    double acc = x[which];
    const double w = which == 0 ? (1.0 - parts.g_at_t) : (1.0 - 2.0 * parts.g_at_t);
    for (std::size_t i = 0; i < margins.size(); ++i) {
      const double num = x[static_cast<Eigen::Index>(2 + 2 * i)];
      const double den = 2.0 * num + x[static_cast<Eigen::Index>(3 + 2 * i)] -
                         parts.y[i];
      acc += w * num / (parts.tilde_f_at_y[i] * den);
    }
    return acc;
  };

  double worst = 0.0;
  for (std::size_t j = 0; j < dim; ++j) {
    for (int which = 0; which < 2; ++which) {
      const double step = 1e-6 * (1.0 + std::fabs(parts.v[static_cast<Eigen::Index>(j)]));
      Eigen::VectorXd up = parts.v, dn = parts.v;
      up[static_cast<Eigen::Index>(j)] += step;
      dn[static_cast<Eigen::Index>(j)] -= step;
      const double fd = (h(up, which) - h(dn, which)) / (2.0 * step);
      const double an = parts.grad_h(static_cast<Eigen::Index>(j), which);
      const double denom = std::max(std::fabs(an), 1e-8);
      worst = std::max(worst, std::fabs(fd - an) / denom);
    }
  }
  CHECK(worst < 1e-5);
}

TEST_CASE("mixing variance: lag zero equals the i.i.d. value bit for bit") {
  const auto m = normal_model();
  const LossSample data = m.sample(4000, 1001);
  const auto margins = model_margins(m);
  const auto sum = m.sum_plugin();
  const RiskLevel a(0.1);

  const auto iid_var = sigma2_dq_var_iid(data, margins, *sum, a);
  const auto mix_var = sigma2_dq_var_mixing(data, margins, *sum, a, 0);
  CHECK(iid_var.sigma2 == mix_var.sigma2);
  CHECK(iid_var.a_vec == mix_var.a_vec);
  CHECK(iid_var.cov_mat == mix_var.cov_mat);

  const auto iid_es = sigma2_dq_es_iid(data, margins, *sum, a);
  const auto mix_es = sigma2_dq_es_mixing(data, margins, *sum, a, 0);
  CHECK(iid_es.sigma2 == mix_es.sigma2);
}

TEST_CASE("mixing variance exceeds the naive i.i.d. formula under positive dependence") {
  const RiskLevel a(0.1);
  const int n = 5;
  const double rho = 0.5;
  const LossSample series = var1_panel(rho, n, 0.3, 40000, 2002);
  // stationary marginals are exactly N(0, equicorr) so analytic plug-ins apply
  const auto m = normal_model(n, 0.3);
  const auto margins = model_margins(m);
  const auto sum = m.sum_plugin();
  const int lag = static_cast<int>(std::cbrt(40000.0));

  const auto mix = sigma2_dq_var_mixing(series, margins, *sum, a, lag);
  const auto naive = sigma2_dq_var_iid(series, margins, *sum, a);
  CHECK(mix.sigma2 > naive.sigma2);
  CHECK(mix.lag_window == lag);
}

TEST_CASE("mixing variance tracks a simulation oracle on dependent panels") {
  // vector AR(1) Gaussian panel; oracle = N * Var(estimator) over replications
  const RiskLevel a(0.1);
  const int n = 3;
  const double rho = 0.5;
  const auto m = normal_model(n, 0.3);
  const auto margins = model_margins(m);
  const auto sum = m.sum_plugin();

  const LossSample longrun = var1_panel(rho, n, 0.3, 60000, 3003);
  const int lag = static_cast<int>(std::cbrt(60000.0));
  const auto plug = sigma2_dq_var_mixing(longrun, margins, *sum, a, lag);

  const std::int64_t len = 2000;
  const int reps = 500;
  std::vector<double> ests;
  ests.reserve(reps);
  for (int k = 0; k < reps; ++k) {
    const LossSample panel = var1_panel(rho, n, 0.3, len, derive_seed(91, static_cast<std::uint64_t>(k)));
    ests.push_back(dq_var(panel, a).value);
  }
  const double oracle = static_cast<double>(len) * testutil::sample_variance(ests);
  CHECK(std::fabs(plug.sigma2 - oracle) / oracle < 0.15);
}

TEST_CASE("ES mixing variance tracks a simulation oracle on GARCH panels") {
  // two independent AR-GARCH columns with mild persistence so the truncated
  // long-run sum captures the dependence; margins via data-driven plug-ins
  const RiskLevel a(0.1);
  GarchParams p;
  p.c = 0.0;
  p.phi = 0.2;
  p.omega = 0.2;
  p.alpha_g = 0.15;
  p.beta_g = 0.55;
  p.nu = 8.0;

  auto make_panel = [&](std::int64_t len, std::uint64_t seed) {
    Eigen::MatrixXd m(len, 2);
    const auto x = simulate_ar_garch(p, static_cast<int>(len), derive_seed(seed, 1));
    const auto y = simulate_ar_garch(p, static_cast<int>(len), derive_seed(seed, 2));
    for (std::int64_t k = 0; k < len; ++k) {
      m(k, 0) = x[static_cast<std::size_t>(k)];
      m(k, 1) = y[static_cast<std::size_t>(k)];
    }
    return LossSample(std::move(m));
  };

  const std::int64_t n_long = 40000;
  const LossSample longrun = make_panel(n_long, 11);
  Margins margins;
  for (Eigen::Index i = 0; i < 2; ++i) {
    margins.push_back(std::make_shared<EmpiricalDistribution>(longrun.column_sample(i)));
  }
  const EmpiricalDistribution sumplug(longrun.sum_sample());
  const int lag = static_cast<int>(std::cbrt(static_cast<double>(n_long)));
  const auto plug = sigma2_dq_es_mixing(longrun, margins, sumplug, a, lag);

  const std::int64_t len = 2000;
  const int reps = 500;
  std::vector<double> ests(reps);
  for (int k = 0; k < reps; ++k) {
    ests[static_cast<std::size_t>(k)] =
        dq_es(make_panel(len, derive_seed(131, static_cast<std::uint64_t>(k))), a).value;
  }
  const double oracle = static_cast<double>(len) * testutil::sample_variance(ests);
  CHECK(std::fabs(plug.sigma2 - oracle) / oracle < 0.15);
}

TEST_CASE("flat lag weights may go negative and are floored with a flag") {
  // crafted alternating series makes the literal truncated sum indefinite
  Eigen::MatrixXd seesaw(400, 1);
  for (Eigen::Index k = 0; k < 400; ++k) seesaw(k, 0) = (k % 2 == 0) ? 1.0 : -1.0;
  const Eigen::MatrixXd lr = long_run_cov(seesaw, 1, LagWeights::FLAT);
  CHECK(lr(0, 0) < 0.0);  // var + 2*cov(lag1) is negative for a seesaw
}

TEST_CASE("appending a constant column contributes nothing to the ES variance") {
  const RiskLevel a(0.1);
  const auto m = normal_model(2, 0.3);
  const LossSample data = m.sample(3000, 404);
  const auto margins = model_margins(m);
  const auto sum = m.sum_plugin();
  const auto base = sigma2_dq_es_mixing(data, margins, *sum, a, 5);

  Eigen::MatrixXd padded(data.rows(), 3);
  padded.leftCols(2) = data.data();
  padded.col(2).setConstant(1.5);
  Margins margins3 = margins;
  // a point mass margin has ES = VaR = 1.5; use a tight analytic stand-in
  margins3.push_back(std::make_shared<LocationScale>(std::make_shared<StdNormal>(), 1.5, 1e-8));
  const LocationScale sum3(std::make_shared<StdNormal>(), 1.5, std::sqrt(equicorr_sigma(2, 0.3).sum()));
  const auto padded_var =
      sigma2_dq_es_mixing(LossSample(std::move(padded)), margins3, sum3, a, 5);
  CHECK(padded_var.sigma2 == doctest::Approx(base.sigma2).epsilon(5e-2));
}

TEST_CASE("duplicate row sums raise the ties warning") {
  Eigen::MatrixXd m(4, 2);
  m << 1.0, 2.0, 2.0, 1.0, 0.0, 1.0, 5.0, -1.0;  // rows 0 and 1 share the sum 3
  const LossSample data(std::move(m));
  const auto margins = Margins{std::make_shared<StdNormal>(), std::make_shared<StdNormal>()};
  const LocationScale sum(std::make_shared<StdNormal>(), 0.0, 2.0);
  const auto av = sigma2_dq_var_mixing(data, margins, sum, RiskLevel(0.25), 0);
  CHECK(av.ties_warning);
}

TEST_CASE("dr variance: reported values, divergence and zero denominator") {
  const RiskLevel a(0.1);
  {
    const auto m = normal_model();
    const auto v = sigma2_dr(m.sampler(), model_margins(m), *m.sum_plugin(), a,
                             RiskMeasureKind::VAR);
    const auto e = sigma2_dr(m.sampler(), model_margins(m), *m.sum_plugin(), a,
                             RiskMeasureKind::ES);
    CHECK(std::fabs(v.sigma2 - 0.43) < 0.03);
    CHECK(std::fabs(e.sigma2 - 0.23) < 0.02);
  }
  {
    const auto m = t_model();
    const auto v = sigma2_dr(m.sampler(), model_margins(m), *m.sum_plugin(), a,
                             RiskMeasureKind::VAR);
    const auto e = sigma2_dr(m.sampler(), model_margins(m), *m.sum_plugin(), a,
                             RiskMeasureKind::ES);
    CHECK(std::fabs(v.sigma2 - 0.67) < 0.05);
    CHECK(std::fabs(e.sigma2 - 0.60) < 0.04);
  }

  // recentered margins: sigma2 grows without bound as eps -> 0
  const auto m = normal_model();
  std::vector<double> sweep;
  for (double eps : {1.0, 0.1, 0.01}) {
    Margins margins;
    std::vector<double> offsets;
    for (int i = 0; i < 5; ++i) {
      const auto mp = m.margin_plugin(i);
      offsets.push_back(-mp->var(a.value()) + eps);
      margins.push_back(std::make_shared<LocationScale>(m.standard_base(), offsets.back(), 1.0));
    }
    const LocationScale sum(m.standard_base(),
                            offsets[0] + offsets[1] + offsets[2] + offsets[3] + offsets[4],
                            std::sqrt(equicorr_sigma(5, 0.3).sum()));
    JointSampler sampler = [&m, offsets](std::int64_t nd, std::uint64_t seed) {
      LossSample raw = m.sample(nd, seed);
      Eigen::MatrixXd shifted = raw.data();
      for (Eigen::Index i = 0; i < 5; ++i) {
        shifted.col(i).array() += offsets[static_cast<std::size_t>(i)];
      }
      return LossSample(std::move(shifted));
    };
    sweep.push_back(
        sigma2_dr(sampler, margins, sum, a, RiskMeasureKind::VAR, MonteCarlo{200000, 5}).sigma2);
  }
  CHECK(sweep[1] > sweep[0]);
  CHECK(sweep[2] > sweep[1]);

  // exactly centered data: zero marginal sum
  const LossSample draws = m.sample(500, 22);
  Eigen::MatrixXd centered = draws.data();
  Margins emp;
  for (Eigen::Index i = 0; i < 5; ++i) {
    const double v = empirical_var(draws.column_sample(i), a);
    centered.col(i).array() -= v;
  }
  const LossSample cdata(std::move(centered));
  for (Eigen::Index i = 0; i < 5; ++i) {
    emp.push_back(std::make_shared<EmpiricalDistribution>(cdata.column_sample(i)));
  }
  const EmpiricalDistribution csum(cdata.sum_sample());
  CHECK_THROWS_AS(sigma2_dr(cdata, emp, csum, a, RiskMeasureKind::VAR), ZeroDenominator);
}

TEST_CASE("covariance matrices are symmetric and PSD on i.i.d. inputs") {
  const auto m = t_model();
  const auto av = sigma2_dq_var_iid(m.sampler(), model_margins(m), *m.sum_plugin(), RiskLevel(0.1),
                                    MonteCarlo{200000, 314});
  CHECK((av.cov_mat - av.cov_mat.transpose()).cwiseAbs().maxCoeff() < 1e-14);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(av.cov_mat);
  CHECK(eig.eigenvalues().minCoeff() >= -1e-10 * av.cov_mat.trace());
}

TEST_CASE("variance responds to alpha and tail weight as reported") {
  // sigma2 falls as alpha grows, and falls as t tails get lighter
  const MonteCarlo mc{200000, 99};
  const auto normal = normal_model();
  const auto margins_n = model_margins(normal);
  const auto sum_n = normal.sum_plugin();
  const auto lo = sigma2_dq_var_iid(normal.sampler(), margins_n, *sum_n, RiskLevel(0.05), mc);
  const auto hi = sigma2_dq_var_iid(normal.sampler(), margins_n, *sum_n, RiskLevel(0.3), mc);
  CHECK(lo.sigma2 > hi.sigma2);
  const auto lo_es = sigma2_dq_es_iid(normal.sampler(), margins_n, *sum_n, RiskLevel(0.05), mc);
  const auto hi_es = sigma2_dq_es_iid(normal.sampler(), margins_n, *sum_n, RiskLevel(0.3), mc);
  CHECK(lo_es.sigma2 > hi_es.sigma2);

  const auto t3 = t_model(3.0);
  const auto t10 = t_model(10.0);
  const auto v3 = sigma2_dq_var_iid(t3.sampler(), model_margins(t3), *t3.sum_plugin(),
                                    RiskLevel(0.1), mc);
  const auto v10 = sigma2_dq_var_iid(t10.sampler(), model_margins(t10), *t10.sum_plugin(),
                                     RiskLevel(0.1), mc);
  CHECK(v3.sigma2 > v10.sigma2);
  const auto e3 = sigma2_dq_es_iid(t3.sampler(), model_margins(t3), *t3.sum_plugin(),
                                   RiskLevel(0.1), mc);
  const auto e10 = sigma2_dq_es_iid(t10.sampler(), model_margins(t10), *t10.sum_plugin(),
                                    RiskLevel(0.1), mc);
  CHECK(e3.sigma2 > e10.sigma2);
}
