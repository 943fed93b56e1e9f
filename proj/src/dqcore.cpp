#include "dqest/dqcore.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <utility>

#include "dqest/errors.hpp"

namespace dqest {

std::string to_string(IndexKind k) {
  switch (k) {
    case IndexKind::DQ_VAR: return "dq-var";
    case IndexKind::DQ_ES: return "dq-es";
    case IndexKind::DQ_EX: return "dq-ex";
    case IndexKind::DR_VAR: return "dr-var";
    case IndexKind::DR_ES: return "dr-es";
  }
  return "?";
}

std::optional<IndexKind> index_kind_from_string(const std::string& s) {
  if (s == "dq-var") return IndexKind::DQ_VAR;
  if (s == "dq-es") return IndexKind::DQ_ES;
  if (s == "dq-ex") return IndexKind::DQ_EX;
  if (s == "dr-var") return IndexKind::DR_VAR;
  if (s == "dr-es") return IndexKind::DR_ES;
  return std::nullopt;
}

LossSample::LossSample(Eigen::MatrixXd data) : data_(std::move(data)) {
  if (data_.rows() < 2 || data_.cols() < 1) {
    throw InvalidInput("loss sample needs at least 2 observations and 1 component");
  }
  if (!data_.allFinite()) throw InvalidInput("loss sample contains NaN or infinite value");
  row_sums_.resize(data_.rows());
  // fixed left-to-right summation order per row
  for (Eigen::Index k = 0; k < data_.rows(); ++k) {
    double s = 0.0;
    for (Eigen::Index i = 0; i < data_.cols(); ++i) s += data_(k, i);
    row_sums_[k] = s;
  }
}

UnivariateSample LossSample::column_sample(Eigen::Index i) const {
  const auto col = data_.col(i);
  return UnivariateSample(std::vector<double>(col.begin(), col.end()));
}

UnivariateSample LossSample::sum_sample() const {
  return UnivariateSample(std::vector<double>(row_sums_.begin(), row_sums_.end()));
}

namespace {

std::vector<double> marginal_estimates(const LossSample& ls, RiskLevel a,
                                       double (*stat)(const UnivariateSample&, RiskLevel)) {
  std::vector<double> out(static_cast<std::size_t>(ls.cols()));
  for (Eigen::Index i = 0; i < ls.cols(); ++i) {
    out[static_cast<std::size_t>(i)] = stat(ls.column_sample(i), a);
  }
  return out;
}

double vec_sum(const std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s += x;
  return s;
}

}  // namespace

DqEstimate dq_var(const LossSample& ls, RiskLevel a) {
  auto xs = marginal_estimates(ls, a, &empirical_var);
  const double t = vec_sum(xs);
  Eigen::Index count = 0;
  for (Eigen::Index k = 0; k < ls.rows(); ++k) {
    if (ls.row_sums()[k] > t) ++count;
  }
  const double n = static_cast<double>(ls.rows());
  DqEstimate est;
  est.kind = IndexKind::DQ_VAR;
  est.alpha = a.value();
  est.value = static_cast<double>(count) / (n * a.value());
  est.marginal_stats = std::move(xs);
  est.threshold = t;
  return est;
}

DqEstimate dq_es(const LossSample& ls, RiskLevel a) {
  const double alpha = a.value();
  auto xs = marginal_estimates(ls, a, &empirical_es);
  const double t = vec_sum(xs);
  const auto n = static_cast<std::size_t>(ls.rows());
  const double dn = static_cast<double>(n);

  DqEstimate est;
  est.kind = IndexKind::DQ_ES;
  est.alpha = alpha;
  est.marginal_stats = std::move(xs);
  est.threshold = t;

  // Deviations d_k = S^(k) - t.  Kinks of phi(r) = sum (r d_k + 1)_+ sit at
  // r = -1/d_k for d_k < 0; terms with d_k >= 0 stay linear on r > 0.
  std::vector<std::pair<double, double>> kinks;  // (r_k, d_k), d_k < 0
  kinks.reserve(n);
  double sum_nonneg_d = 0.0;
  std::size_t count_nonneg = 0;
  bool any_positive = false;
  for (std::size_t k = 0; k < n; ++k) {
    const double d = ls.row_sums()[static_cast<Eigen::Index>(k)] - t;
    if (d > 0.0) any_positive = true;
    if (d >= 0.0) {
      sum_nonneg_d += d;
      ++count_nonneg;
    } else {
      kinks.emplace_back(-1.0 / d, d);
    }
  }

  if (!any_positive) {
    est.value = 0.0;
    est.alpha_star = 0.0;
    return est;
  }

  std::sort(kinks.begin(), kinks.end());

  // At r = kink_j, the still-positive negative terms are those with a larger
  // kink; accumulate their d-sums and counts from the right.
  const std::size_t m = kinks.size();
  std::vector<double> suffix_d(m + 1, 0.0);
  std::vector<double> suffix_cnt(m + 1, 0.0);
  for (std::size_t j = m; j-- > 0;) {
    suffix_d[j] = suffix_d[j + 1] + kinks[j].second;
    suffix_cnt[j] = suffix_cnt[j + 1] + 1.0;
  }

  // Boundary r -> 0+ gives phi = N, i.e. the estimate 1/alpha.
  double best_obj = dn;
  double best_r = 0.0;
  for (std::size_t j = 0; j < m; ++j) {
    const double r = kinks[j].first;
    // terms with kink <= r contribute 0 (ties at the kink are exactly 0)
    const double obj = r * (sum_nonneg_d + suffix_d[j + 1]) +
                       (static_cast<double>(count_nonneg) + suffix_cnt[j + 1]);
    if (obj < best_obj) {
      best_obj = obj;
      best_r = r;
    }
  }

  est.value = best_obj / (dn * alpha);
  est.alpha_star = alpha * est.value;
  est.minimizer_r = best_r;
  return est;
}

DqEstimate dq_ex(const LossSample& ls, RiskLevel a, bool allow_noncanonical_alpha) {
  const double alpha = a.value();
  if (alpha >= 0.5 && !allow_noncanonical_alpha) {
    throw InvalidInput("dq_ex requires alpha < 1/2 (pass the exploration flag to override)");
  }
  auto xs = marginal_estimates(ls, a, &empirical_expectile);
  const double t = vec_sum(xs);

  double pos = 0.0, abs = 0.0;
  for (Eigen::Index k = 0; k < ls.rows(); ++k) {
    const double d = ls.row_sums()[k] - t;
    if (d > 0.0) pos += d;
    abs += std::fabs(d);
  }
  if (abs == 0.0) {
    throw DegenerateDenominator("all row sums equal the aggregate expectile threshold");
  }

  DqEstimate est;
  est.kind = IndexKind::DQ_EX;
  est.alpha = alpha;
  est.value = pos / (alpha * abs);
  est.marginal_stats = std::move(xs);
  est.threshold = t;
  est.canonical = alpha < 0.5;
  return est;
}

DqEstimate dr(const LossSample& ls, RiskLevel a, RiskMeasureKind measure) {
  auto stat = (measure == RiskMeasureKind::VAR) ? &empirical_var : &empirical_es;
  auto xs = marginal_estimates(ls, a, stat);
  const double denom = vec_sum(xs);
  if (denom == 0.0) {
    throw ZeroDenominator("sum of marginal risk measures is zero; DR is undefined");
  }
  const double numer = stat(ls.sum_sample(), a);

  DqEstimate est;
  est.kind = (measure == RiskMeasureKind::VAR) ? IndexKind::DR_VAR : IndexKind::DR_ES;
  est.alpha = a.value();
  est.value = numer / denom;
  est.marginal_stats = std::move(xs);
  est.threshold = numer;
  return est;
}

DqEstimate estimate_index(const LossSample& ls, RiskLevel a, IndexKind kind,
                          bool allow_noncanonical_alpha) {
  switch (kind) {
    case IndexKind::DQ_VAR: return dq_var(ls, a);
    case IndexKind::DQ_ES: return dq_es(ls, a);
    case IndexKind::DQ_EX: return dq_ex(ls, a, allow_noncanonical_alpha);
    case IndexKind::DR_VAR: return dr(ls, a, RiskMeasureKind::VAR);
    case IndexKind::DR_ES: return dr(ls, a, RiskMeasureKind::ES);
  }
  throw InvalidInput("unknown index kind");
}

}  // namespace dqest
