#pragma once

#include <Eigen/Dense>
#include <optional>
#include <string>
#include <vector>

#include "dqest/empdist.hpp"

namespace dqest {

enum class IndexKind { DQ_VAR, DQ_ES, DQ_EX, DR_VAR, DR_ES };

enum class RiskMeasureKind { VAR, ES };

std::string to_string(IndexKind k);
std::optional<IndexKind> index_kind_from_string(const std::string& s);

// Joint loss observations: rows are observations, columns are portfolio
// components.  Row sums are materialized once with a fixed summation order.
class LossSample {
 public:
  explicit LossSample(Eigen::MatrixXd data);

  Eigen::Index rows() const { return data_.rows(); }
  Eigen::Index cols() const { return data_.cols(); }
  const Eigen::MatrixXd& data() const { return data_; }
  const Eigen::VectorXd& row_sums() const { return row_sums_; }

  UnivariateSample column_sample(Eigen::Index i) const;
  UnivariateSample sum_sample() const;

 private:
  Eigen::MatrixXd data_;
  Eigen::VectorXd row_sums_;
};

struct DqEstimate {
  IndexKind kind;
  double alpha;
  double value;
  // Per-component risk-measure estimates x_hat_i entering the index.
  std::vector<double> marginal_stats;
  // Aggregate threshold sum_i x_hat_i for the DQ indices; the sum's own
  // risk-measure estimate (the ratio numerator) for DR.
  double threshold;
  // DQ_ES only: alpha * value, and the minimizing kink of the convex
  // piecewise-linear objective (0 when the boundary value 1/alpha is optimal).
  std::optional<double> alpha_star;
  std::optional<double> minimizer_r;
  // False when dq_ex was evaluated outside its canonical range alpha < 1/2.
  bool canonical = true;
};

// (1/(N a)) #{k : S^(k) > sum_i VaR_hat_a(X_i)}; strict inequality.
DqEstimate dq_var(const LossSample& ls, RiskLevel a);

// Zero if no row sum exceeds t = sum_i ES_hat_a(X_i); otherwise the exact
// minimum over r > 0 of (1/(N a)) sum_k (r (S^(k) - t) + 1)_+, computed by
// enumerating the kinks r = 1/(t - S^(k)) and the r -> 0+ boundary value 1/a.
DqEstimate dq_es(const LossSample& ls, RiskLevel a);

// (1/a) sum_k (S^(k) - t)_+ / sum_k |S^(k) - t| with t = sum_i ex_hat_a(X_i).
// Canonical for a < 1/2; pass allow_noncanonical_alpha to explore a in (0,1).
DqEstimate dq_ex(const LossSample& ls, RiskLevel a, bool allow_noncanonical_alpha = false);

// Diversification ratio phi_hat(S) / sum_i phi_hat(X_i) for phi in {VaR, ES}.
// Throws ZeroDenominator when the marginal sum vanishes.
DqEstimate dr(const LossSample& ls, RiskLevel a, RiskMeasureKind measure);

DqEstimate estimate_index(const LossSample& ls, RiskLevel a, IndexKind kind,
                          bool allow_noncanonical_alpha = false);

}  // namespace dqest
