#include <algorithm>
#include <random>

#include "hybridop/certify.hpp"

namespace hybridop {

namespace {

Eigen::MatrixXd orthonormal_columns(const Eigen::MatrixXd& m) {
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(m);
  return qr.householderQ() * Eigen::MatrixXd::Identity(m.rows(), m.cols());
}

double smallest_singular_value(const Eigen::MatrixXd& m) {
  if (m.size() == 0) return 0.0;
  Eigen::BDCSVD<Eigen::MatrixXd> svd(m);
  return svd.singularValues().minCoeff();
}

}  // namespace

QuotientFactorization::QuotientFactorization(Eigen::MatrixXd a, Eigen::MatrixXd u_basis)
    : a_(std::move(a)), u_(std::move(u_basis)) {
  const Eigen::Index n = a_.cols();
  if (u_.rows() != n) throw Error(ErrorCode::BadDimensions, "complement basis rows differ from the operator columns");
  const auto r = static_cast<Eigen::Index>(numerical_rank(a_));
  Eigen::BDCSVD<Eigen::MatrixXd> svd(a_, Eigen::ComputeFullV);
  w_ = svd.matrixV().leftCols(r);
  null_ = svd.matrixV().rightCols(n - r);
  if (u_.cols() != r) {
    throw Error(ErrorCode::NotAComplement, "complement basis has " + std::to_string(u_.cols()) +
                                               " columns, the rank is " + std::to_string(r));
  }
  Eigen::MatrixXd joined(n, n);
  joined << u_, null_;
  if (static_cast<Eigen::Index>(numerical_rank(joined)) != n) {
    throw Error(ErrorCode::NotAComplement, "span(U) meets the null-space");
  }
  a_tilde_ = a_ * w_;
}

void QuotientFactorization::require_range(const Eigen::VectorXd& y) const {
  if (y.size() != a_.rows()) throw Error(ErrorCode::BadDimensions, "vector length differs from the operator rows");
  const Eigen::VectorXd x = a_tilde_.colPivHouseholderQr().solve(y);
  if ((a_tilde_ * x - y).norm() > 1e-9 * (1.0 + y.norm())) {
    throw Error(ErrorCode::NotInRange, "vector is not in the range of the operator");
  }
}

Eigen::VectorXd QuotientFactorization::quotient(const Eigen::VectorXd& x) const {
  if (x.size() != a_.cols()) throw Error(ErrorCode::BadDimensions, "vector length differs from the operator columns");
  return w_.transpose() * x;
}

Eigen::VectorXd QuotientFactorization::a_tilde(const Eigen::VectorXd& q) const {
  if (q.size() != w_.cols()) throw Error(ErrorCode::BadDimensions, "quotient coordinates have the wrong length");
  return a_tilde_ * q;
}

Eigen::VectorXd QuotientFactorization::a_tilde_inverse(const Eigen::VectorXd& y) const {
  require_range(y);
  return a_tilde_.colPivHouseholderQr().solve(y);
}

Eigen::VectorXd QuotientFactorization::a_u_pinv(const Eigen::VectorXd& y) const {
  require_range(y);
  const Eigen::MatrixXd au = a_ * u_;
  return u_ * au.colPivHouseholderQr().solve(y);
}

Eigen::VectorXd QuotientFactorization::q_u_pinv(const Eigen::VectorXd& q) const {
  if (q.size() != w_.cols()) throw Error(ErrorCode::BadDimensions, "quotient coordinates have the wrong length");
  const Eigen::MatrixXd wu = w_.transpose() * u_;
  return u_ * wu.colPivHouseholderQr().solve(q);
}

double QuotientFactorization::sigma_min_a_tilde() const { return smallest_singular_value(a_tilde_); }

double QuotientFactorization::sigma_min_q_on_u() const {
  if (u_.cols() == 0) return 0.0;
  return smallest_singular_value(w_.transpose() * orthonormal_columns(u_));
}

FactorizationReport factorization_check(const Eigen::MatrixXd& a, const Eigen::MatrixXd& u_basis,
                                        std::size_t samples, double tol, std::uint64_t seed) {
  if (samples == 0) throw Error(ErrorCode::BadParameter, "at least one sample is required");
  if (!(tol > 0.0)) throw Error(ErrorCode::BadParameter, "tolerance must be positive");
  const QuotientFactorization f(a, u_basis);
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss;
  auto random_vector = [&](Eigen::Index len) {
    Eigen::VectorXd v(len);
    for (Eigen::Index i = 0; i < len; ++i) v(i) = gauss(rng);
    return v;
  };
  FactorizationReport rep;
  rep.samples = samples;
  for (std::size_t s = 0; s < samples; ++s) {
    const Eigen::VectorXd y = a * random_vector(a.cols());
    const Eigen::VectorXd lhs1 = f.a_tilde_inverse(y);
    const Eigen::VectorXd rhs1 = f.quotient(f.a_u_pinv(y));
    rep.tilde_inverse_residual = std::max(rep.tilde_inverse_residual, (lhs1 - rhs1).norm() / (1.0 + lhs1.norm()));

    const Eigen::VectorXd q = random_vector(static_cast<Eigen::Index>(f.rank()));
    const Eigen::VectorXd lhs2 = f.q_u_pinv(q);
    const Eigen::VectorXd rhs2 = f.a_u_pinv(f.a_tilde(q));
    rep.q_pinv_residual = std::max(rep.q_pinv_residual, (lhs2 - rhs2).norm() / (1.0 + lhs2.norm()));
  }
  rep.sigma_min_a_tilde = f.sigma_min_a_tilde();
  rep.sigma_min_q_on_u = f.sigma_min_q_on_u();
  rep.passed = rep.tilde_inverse_residual <= tol && rep.q_pinv_residual <= tol;
  return rep;
}

}  // namespace hybridop
