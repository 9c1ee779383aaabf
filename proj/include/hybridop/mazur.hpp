#pragma once

#include <cstddef>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "hybridop/seqspace.hpp"

namespace hybridop {

/// Truncation of B x = sum_k x_k zeta^(k) to n columns and m rows.
///
/// Columns whose direction reaches past row m are cut (not renormalized);
/// max_truncation_defect() reports the largest l2 mass lost that way so an
/// experiment can pick m large enough.
class MazurOperator {
 public:
  MazurOperator(EnumerationMode mode, std::size_t columns, std::size_t rows);

  /// Row frame chosen as the largest support index among the n columns, so
  /// that no column is truncated.
  static MazurOperator covering(EnumerationMode mode, std::size_t columns);

  EnumerationMode mode() const { return mode_; }
  std::size_t cols() const { return zetas_.size(); }
  std::size_t rows() const { return rows_; }

  const SphereVector& zeta(std::size_t k) const;  // 1-based
  const RealSeq& column(std::size_t k) const;     // truncated zeta^(k), 1-based
  double max_truncation_defect() const { return max_defect_; }

  /// sum_k x_k zeta^(k); throws OutOfFrame if supp(x) leaves {1..n}.
  RealSeq apply(const RealSeq& x) const;
  /// (<eta, zeta^(1)>, ..., <eta, zeta^(n)>); throws OutOfFrame if supp(eta) leaves {1..m}.
  RealSeq apply_adjoint(const RealSeq& eta) const;

  /// The m x n_cols matrix whose k-th column is the truncated zeta^(k).
  Eigen::MatrixXd finite_section(std::size_t n_cols) const;
  Eigen::MatrixXd finite_section() const { return finite_section(cols()); }

 private:
  EnumerationMode mode_;
  std::size_t rows_;
  std::vector<SphereVector> zetas_;
  std::vector<RealSeq> columns_;
  double max_defect_ = 0.0;
};

/// Block-diagonal section of A = (B, C) acting on pairs (x1, x2), where C
/// is the coordinate embedding of l1 into l2.
class BlockOperator {
 public:
  explicit BlockOperator(MazurOperator top);

  const MazurOperator& top() const { return top_; }
  std::size_t rows() const { return 2 * top_.rows(); }
  std::size_t cols() const { return 2 * top_.cols(); }

  std::pair<RealSeq, RealSeq> apply(const RealSeq& x1, const RealSeq& x2) const;
  Eigen::MatrixXd section() const;

 private:
  MazurOperator top_;
};

BlockOperator composite_hybrid(const MazurOperator& b);

/// Dense vector of length `frame`; OutOfFrame if v reaches past it.
Eigen::VectorXd to_dense(const RealSeq& v, std::size_t frame);
RealSeq to_sparse(const Eigen::VectorXd& v);

/// Numerical rank from the singular values with the usual
/// max(m, n) * eps * sigma_max cutoff.
std::size_t numerical_rank(const Eigen::MatrixXd& a);

}  // namespace hybridop
