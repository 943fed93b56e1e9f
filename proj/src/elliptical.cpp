#include "dqest/elliptical.hpp"

#include <cmath>
#include <memory>
#include <utility>

#include "dqest/errors.hpp"
#include "dqest/rng.hpp"

namespace dqest {

Eigen::MatrixXd equicorr_sigma(int n, double r) {
  if (n < 1) throw InvalidInput("equicorr_sigma: n must be >= 1");
  if (!(r >= 0.0 && r <= 1.0)) throw InvalidInput("equicorr_sigma: r must lie in [0,1]");
  Eigen::MatrixXd sigma = Eigen::MatrixXd::Constant(n, n, r);
  sigma.diagonal().setOnes();
  return sigma;
}

double k_sigma(const Eigen::MatrixXd& sigma_mat) {
  const double total = sigma_mat.sum();
  if (!(total > 0.0)) throw InvalidInput("k_sigma: sum of dispersion entries must be positive");
  double sd_sum = 0.0;
  for (Eigen::Index i = 0; i < sigma_mat.rows(); ++i) {
    sd_sum += std::sqrt(sigma_mat(i, i));
  }
  return sd_sum / std::sqrt(total);
}

EllipticalModel::EllipticalModel(Family family, Eigen::VectorXd mu, Eigen::MatrixXd sigma_mat,
                                 double nu)
    : EllipticalModel(family, std::move(mu), std::move(sigma_mat), nu, false) {}

EllipticalModel EllipticalModel::relaxed_student_t(Eigen::VectorXd mu,
                                                   Eigen::MatrixXd sigma_mat, double nu) {
  return EllipticalModel(Family::STUDENT_T, std::move(mu), std::move(sigma_mat), nu, true);
}

EllipticalModel::EllipticalModel(Family family, Eigen::VectorXd mu, Eigen::MatrixXd sigma_mat,
                                 double nu, bool allow_low_moments)
    : family_(family), mu_(std::move(mu)), sigma_mat_(std::move(sigma_mat)), nu_(nu) {
  if (mu_.size() < 1) throw InvalidInput("elliptical model needs dimension >= 1");
  if (sigma_mat_.rows() != mu_.size() || sigma_mat_.cols() != mu_.size()) {
    throw InvalidInput("dispersion matrix shape does not match the location vector");
  }
  if (!sigma_mat_.allFinite() || !mu_.allFinite()) {
    throw InvalidInput("elliptical model parameters contain NaN or infinite value");
  }
  if (!sigma_mat_.isApprox(sigma_mat_.transpose(), 1e-12)) {
    throw InvalidInput("dispersion matrix must be symmetric");
  }
  if (family_ == Family::STUDENT_T) {
    if (allow_low_moments) {
      if (!(nu_ > 1.0)) throw InvalidInput("relaxed Student-t still needs nu > 1");
      low_moment_ = !(nu_ > 2.0);
    } else if (!(nu_ > 2.0)) {
      throw InvalidInput("Student-t needs nu > 2 (finite variance); see relaxed constructor");
    }
  }
  Eigen::LLT<Eigen::MatrixXd> llt(sigma_mat_);
  if (llt.info() != Eigen::Success) {
    throw InvalidInput("dispersion matrix is not positive definite");
  }
  chol_lower_ = llt.matrixL();
}

bool EllipticalModel::centered() const { return mu_.isZero(0.0); }

DistributionPtr EllipticalModel::standard_base() const {
  if (family_ == Family::NORMAL) return std::make_shared<StdNormal>();
  return std::make_shared<StdStudentT>(nu_);
}

DistributionPtr EllipticalModel::margin_plugin(int i) const {
  if (i < 0 || i >= dim()) throw InvalidInput("margin index out of range");
  return std::make_shared<LocationScale>(standard_base(), mu_[i],
                                         std::sqrt(sigma_mat_(i, i)));
}

DistributionPtr EllipticalModel::sum_plugin() const {
  return std::make_shared<LocationScale>(standard_base(), mu_.sum(),
                                         std::sqrt(sigma_mat_.sum()));
}

LossSample EllipticalModel::sample(std::int64_t n_draws, std::uint64_t seed) const {
  if (n_draws < 1) throw InvalidInput("sample: n_draws must be >= 1");
  const int n = dim();
  auto rng = make_rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);

  Eigen::MatrixXd out(n_draws, n);
  Eigen::VectorXd z(n);
  if (family_ == Family::NORMAL) {
    for (std::int64_t k = 0; k < n_draws; ++k) {
      for (int i = 0; i < n; ++i) z[i] = gauss(rng);
      out.row(k) = (mu_ + chol_lower_ * z).transpose();
    }
  } else {
    std::chi_squared_distribution<double> chisq(nu_);
    for (std::int64_t k = 0; k < n_draws; ++k) {
      for (int i = 0; i < n; ++i) z[i] = gauss(rng);
      const double w = chisq(rng);
      const double scale = std::sqrt(nu_ / w);
      out.row(k) = (mu_ + scale * (chol_lower_ * z)).transpose();
    }
  }
  return LossSample(std::move(out));
}

std::function<LossSample(std::int64_t, std::uint64_t)> EllipticalModel::sampler() const {
  return [model = *this](std::int64_t n_draws, std::uint64_t seed) {
    return model.sample(n_draws, seed);
  };
}

double superquantile_cdf(const Distribution& base, double x) {
  // F_bar(x) = 1 - beta where ES_beta(Y) = x; beta -> ES_beta is continuous
  // and strictly decreasing with range (mean, ess-sup).
  double lo = 1e-15, hi = 1.0 - 1e-15;
  if (x >= base.es(lo)) return 1.0;
  if (x <= base.es(hi)) return 0.0;
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (base.es(mid) > x) {
      lo = mid;
    } else {
      hi = mid;
    }
    if (hi - lo <= 1e-15) break;
  }
  return 1.0 - 0.5 * (lo + hi);
}

double true_dq_var(const EllipticalModel& model, RiskLevel a) {
  const auto base = model.standard_base();
  const double k = k_sigma(model.sigma());
  const double q = base->quantile(1.0 - a.value());
  return (1.0 - base->cdf(k * q)) / a.value();
}

double true_dq_es(const EllipticalModel& model, RiskLevel a) {
  const auto base = model.standard_base();
  const double k = k_sigma(model.sigma());
  const double target = k * base->es(a.value());
  return (1.0 - superquantile_cdf(*base, target)) / a.value();
}

double true_dq_ex(const EllipticalModel& model, RiskLevel a) {
  if (!(a.value() < 0.5)) throw InvalidInput("true_dq_ex requires alpha < 1/2");
  if (model.family() == Family::STUDENT_T && !(model.nu() > 2.0)) {
    throw InvalidInput("true_dq_ex requires nu > 2");
  }
  const auto base = model.standard_base();
  const double k = k_sigma(model.sigma());
  const double ex = base->expectile(a.value());
  const TildeTransform tilde(base);
  return (1.0 - tilde.cdf(k * ex)) / a.value();
}

double true_dr(const EllipticalModel& model) {
  if (!model.centered()) {
    throw NotCentered("the DR closed form 1/k_Sigma holds for centered models only");
  }
  return 1.0 / k_sigma(model.sigma());
}

double true_index_value(const EllipticalModel& model, RiskLevel a, IndexKind kind) {
  switch (kind) {
    case IndexKind::DQ_VAR: return true_dq_var(model, a);
    case IndexKind::DQ_ES: return true_dq_es(model, a);
    case IndexKind::DQ_EX: return true_dq_ex(model, a);
    case IndexKind::DR_VAR:
    case IndexKind::DR_ES: return true_dr(model);
  }
  throw InvalidInput("unknown index kind");
}

}  // namespace dqest
