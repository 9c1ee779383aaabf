#include "hybridop/mazur.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace hybridop {

namespace {

void require_frame(const RealSeq& v, std::size_t frame, const char* what) {
  if (v.max_index() > frame) {
    throw Error(ErrorCode::OutOfFrame, std::string(what) + " has support index " + std::to_string(v.max_index()) +
                                           " outside the frame of size " + std::to_string(frame));
  }
}

}  // namespace

MazurOperator::MazurOperator(EnumerationMode mode, std::size_t columns, std::size_t rows)
    : mode_(mode), rows_(rows) {
  if (columns == 0) throw Error(ErrorCode::BadParameter, "column budget must be at least 1");
  if (rows == 0) throw Error(ErrorCode::BadParameter, "row frame must be at least 1");
  zetas_ = enumerate_sphere(mode, columns);
  columns_.reserve(columns);
  for (const auto& z : zetas_) {
    RealSeq col;
    double lost = 0.0;
    for (const auto& [i, x] : z.unit()) {
      if (i <= rows) {
        col.set(i, x);
      } else {
        lost += x * x;
      }
    }
    max_defect_ = std::max(max_defect_, std::sqrt(lost));
    columns_.push_back(std::move(col));
  }
}

MazurOperator MazurOperator::covering(EnumerationMode mode, std::size_t columns) {
  std::size_t rows = 1;
  for (const auto& z : enumerate_sphere(mode, columns)) rows = std::max(rows, z.direction().max_index());
  return MazurOperator(mode, columns, rows);
}

const SphereVector& MazurOperator::zeta(std::size_t k) const {
  if (k == 0 || k > zetas_.size()) throw Error(ErrorCode::OutOfFrame, "column index " + std::to_string(k));
  return zetas_[k - 1];
}

const RealSeq& MazurOperator::column(std::size_t k) const {
  if (k == 0 || k > columns_.size()) throw Error(ErrorCode::OutOfFrame, "column index " + std::to_string(k));
  return columns_[k - 1];
}

RealSeq MazurOperator::apply(const RealSeq& x) const {
  require_frame(x, cols(), "x");
  std::vector<double> acc(rows_ + 1, 0.0);
  for (const auto& [k, xk] : x) {
    for (const auto& [i, z] : columns_[k - 1]) acc[i] += xk * z;
  }
  RealSeq out;
  for (std::size_t i = 1; i <= rows_; ++i) out.set(i, acc[i]);
  return out;
}

RealSeq MazurOperator::apply_adjoint(const RealSeq& eta) const {
  require_frame(eta, rows_, "eta");
  std::vector<double> dense(rows_ + 1, 0.0);
  for (const auto& [i, v] : eta) dense[i] = v;
  RealSeq out;
  for (std::size_t k = 0; k < columns_.size(); ++k) {
    double s = 0.0;
    for (const auto& [i, z] : columns_[k]) s += dense[i] * z;
    out.set(k + 1, s);
  }
  return out;
}

Eigen::MatrixXd MazurOperator::finite_section(std::size_t n_cols) const {
  if (n_cols == 0 || n_cols > cols()) {
    throw Error(ErrorCode::OutOfFrame, "section width " + std::to_string(n_cols) + " exceeds column budget " +
                                           std::to_string(cols()));
  }
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(rows_), static_cast<Eigen::Index>(n_cols));
  for (std::size_t k = 0; k < n_cols; ++k) {
    for (const auto& [i, z] : columns_[k]) a(static_cast<Eigen::Index>(i - 1), static_cast<Eigen::Index>(k)) = z;
  }
  return a;
}

BlockOperator::BlockOperator(MazurOperator top) : top_(std::move(top)) {}

std::pair<RealSeq, RealSeq> BlockOperator::apply(const RealSeq& x1, const RealSeq& x2) const {
  require_frame(x2, top_.cols(), "x2");
  RealSeq embedded;
  for (const auto& [i, v] : x2) {
    if (i <= top_.rows()) embedded.set(i, v);
  }
  return {top_.apply(x1), embedded};
}

Eigen::MatrixXd BlockOperator::section() const {
  const auto m = static_cast<Eigen::Index>(top_.rows());
  const auto n = static_cast<Eigen::Index>(top_.cols());
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(2 * m, 2 * n);
  a.topLeftCorner(m, n) = top_.finite_section();
  const Eigen::Index d = std::min(m, n);
  a.block(m, n, d, d).setIdentity();
  return a;
}

BlockOperator composite_hybrid(const MazurOperator& b) { return BlockOperator(b); }

std::size_t numerical_rank(const Eigen::MatrixXd& a) {
  if (a.size() == 0) return 0;
  Eigen::BDCSVD<Eigen::MatrixXd> svd(a);
  const auto& s = svd.singularValues();
  if (s.size() == 0 || s(0) == 0.0) return 0;
  const double cutoff =
      static_cast<double>(std::max(a.rows(), a.cols())) * std::numeric_limits<double>::epsilon() * s(0);
  std::size_t r = 0;
  for (Eigen::Index i = 0; i < s.size(); ++i) {
    if (s(i) > cutoff) ++r;
  }
  return r;
}

Eigen::VectorXd to_dense(const RealSeq& v, std::size_t frame) {
  if (v.max_index() > frame) throw Error(ErrorCode::OutOfFrame, "sequence leaves the frame");
  Eigen::VectorXd out = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(frame));
  for (const auto& [i, x] : v) out(static_cast<Eigen::Index>(i - 1)) = x;
  return out;
}

RealSeq to_sparse(const Eigen::VectorXd& v) {
  RealSeq out;
  for (Eigen::Index i = 0; i < v.size(); ++i) out.set(static_cast<std::size_t>(i + 1), v(i));
  return out;
}

}  // namespace hybridop
