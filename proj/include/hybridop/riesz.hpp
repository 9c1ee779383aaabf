#pragma once

#include <cstddef>
#include <vector>

#include <Eigen/Dense>

#include "hybridop/mazur.hpp"
#include "hybridop/seqspace.hpp"

namespace hybridop {

/// Subsequence zeta^(k_1), zeta^(k_2), ... with ||e^(l) - zeta^(k_l)||_2 <= 1/(2l).
struct RieszSelection {
  EnumerationMode mode;
  std::vector<std::size_t> indices;  // k_l
  std::vector<double> defects;       // d_l
  std::vector<SphereVector> atoms;   // zeta^(k_l)
  double lambda_bound = 0.0;         // sqrt(sum_{l<=L} 1/(4 l^2))
  double lambda_data = 0.0;          // sqrt(sum_{l<=L} d_l^2)

  std::size_t levels() const { return indices.size(); }
};

/// For l = 1..L picks the smallest unused enumeration index whose vector is
/// within 1/(2l) of e^(l). Throws NotFoundWithinBudget when the first
/// `budget` terms do not cover every level.
RieszSelection greedy_select(EnumerationMode mode, std::size_t levels, std::size_t budget);

/// sqrt(sum_{l=1}^{L} 1/(4 l^2)).
double lambda_bound(std::size_t levels);
/// The L -> infinity limit pi / (2 sqrt 6).
double lambda_bound_limit();

/// m x L section of T with T e^(l) = zeta^(k_l). Checks that every singular
/// value lies in [1 - lambda_data, 1 + lambda_data].
Eigen::MatrixXd build_T(const RieszSelection& selection, std::size_t rows);

/// B restricted to U = span{e^(k_l)}. Elements of U are handled either as
/// sequences supported on {k_l} or as coefficient vectors of length L.
class RestrictedOperator {
 public:
  RestrictedOperator(const MazurOperator& base, RieszSelection selection);

  const RieszSelection& selection() const { return selection_; }
  const Eigen::MatrixXd& matrix() const { return columns_; }
  std::size_t rows() const { return static_cast<std::size_t>(columns_.rows()); }
  std::size_t levels() const { return static_cast<std::size_t>(columns_.cols()); }
  double sigma_min() const { return sigma_min_; }
  double sigma_max() const { return sigma_max_; }

  /// Coefficients (u_1..u_L) of a sequence supported on {k_l}; OutOfFrame otherwise.
  Eigen::VectorXd coefficients(const RealSeq& u) const;
  RealSeq embed(const Eigen::VectorXd& coeffs) const;

  RealSeq apply(const RealSeq& u) const;

 private:
  RieszSelection selection_;
  Eigen::MatrixXd columns_;
  double sigma_min_ = 0.0;
  double sigma_max_ = 0.0;
};

/// B|_U; certifies injectivity on the frame via sigma_min >= 1 - lambda_data > 0.
RestrictedOperator restrict_to(const MazurOperator& base, const RieszSelection& selection);

}  // namespace hybridop
