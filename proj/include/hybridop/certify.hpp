#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "hybridop/lp.hpp"
#include "hybridop/mazur.hpp"

namespace hybridop {

// ---------------------------------------------------------------------------
// Minimum-norm certificates

struct CertificateOutcome {
  enum class Verdict { Feasible, InfeasibleAtK };
  Verdict verdict = Verdict::Feasible;
  RealSeq eta;                       // Feasible only
  std::size_t infeasible_at = 0;     // InfeasibleAtK only: smallest infeasible K'
  std::size_t constraints = 0;       // K used
  double margin = 0.0;               // min over eta of max_k |<eta, zeta^(k)>| - 1, at the reported K
  double eta_pairing = 0.0;          // <eta, eta~> for Feasible outcomes
  double proof_constant = 0.0;       // 2 / ||s_m zeta^(m) + s_n zeta^(n)||

  bool feasible() const { return verdict == Verdict::Feasible; }
};

/// Decides whether some eta on the row frame satisfies
///   <eta, zeta^(m)> = s_m,  <eta, zeta^(n)> = s_n,  |<eta, zeta^(k)>| <= 1 (k <= K).
/// On infeasibility the smallest infeasible K' in [max(m, n), K] is
/// reported; the constraint sets are nested, so K' is located by bisection.
CertificateOutcome minnorm_certificate(const MazurOperator& b, std::size_t m, std::size_t n, int s_m, int s_n,
                                       std::size_t constraints);

/// 2 / ||s_m zeta^(m) + s_n zeta^(n)||_2, the value of <eta, eta~> for every
/// feasible eta. Infinite for an antipodal pair with matching signs.
double proof_constant(const MazurOperator& b, std::size_t m, std::size_t n, int s_m, int s_n);

struct AlignedAtom {
  RealSeq solution;  // c e^(k)
  double value = 0;  // |c| = ||y||_2
  std::size_t index = 0;
};

/// If y = c zeta^(k) for some k <= budget (exact direction match), the
/// one-atom solution c e^(k); nullopt otherwise. y = 0 gives x = 0.
std::optional<AlignedAtom> minnorm_trivial(const FinSeq& y, EnumerationMode mode, std::size_t budget);

// ---------------------------------------------------------------------------
// Quasi-distance between parallel solution sets

/// qdist(A^{-1}(y'), A^{-1}(y)) = min_c ||x(y') - x(y) - Z c||_1 with the
/// l1 norm on the domain.
double qdist(const Eigen::MatrixXd& a, const Eigen::MatrixXd& nullspace_basis, const Eigen::VectorXd& y,
             const Eigen::VectorXd& y_prime);

/// The LP solved by qdist, exposed for dumping.
LinearProgram<double> qdist_program(const Eigen::MatrixXd& nullspace_basis, const Eigen::VectorXd& shift);

// ---------------------------------------------------------------------------
// Well-/ill-posedness classification

enum class Tri { True, False, Unknown };

struct Flag {
  Tri value = Tri::Unknown;
  std::string provenance;
};

struct ClassificationFlags {
  Flag closed_range;
  Flag complemented_nullspace;
  Flag range_contains_infdim_closed_subspace;
  Flag strictly_singular;
  Flag compact;
};

enum class Verdict { WellPosed, IllPosedTypeI, IllPosedTypeII };

std::string to_string(Verdict v);
std::string to_string(Tri t);

/// Well-posed iff the range is closed and the null-space complemented;
/// otherwise type I iff the range contains an infinite-dimensional closed
/// subspace. Throws IndeterminateClassification when a flag the decision
/// depends on is Unknown.
Verdict classify(const ClassificationFlags& flags);

/// Strictly singular with an infinite-dimensional closed subspace in the
/// range. Such operators are never compact and have uncomplemented
/// null-spaces.
Tri is_hybrid(const ClassificationFlags& flags);

struct CatalogEntry {
  std::string name;
  ClassificationFlags flags;
  Verdict expected;
};

std::vector<CatalogEntry> operator_catalog();

// ---------------------------------------------------------------------------
// Quotient factorization A = A~ Q and the pseudo-inverses around it

/// X/N(A) is coordinatized by the orthogonal complement of N(A): Q x = W^T x
/// with W an orthonormal basis of the row space.
class QuotientFactorization {
 public:
  /// Throws NotAComplement unless span(U) + N(A) = R^n with trivial intersection.
  QuotientFactorization(Eigen::MatrixXd a, Eigen::MatrixXd u_basis);

  std::size_t rank() const { return static_cast<std::size_t>(w_.cols()); }
  const Eigen::MatrixXd& nullspace() const { return null_; }
  const Eigen::MatrixXd& reference_complement() const { return w_; }

  Eigen::VectorXd quotient(const Eigen::VectorXd& x) const;        // Q
  Eigen::VectorXd a_tilde(const Eigen::VectorXd& q) const;         // A~
  Eigen::VectorXd a_tilde_inverse(const Eigen::VectorXd& y) const; // A~^{-1}, y in R(A)
  Eigen::VectorXd a_u_pinv(const Eigen::VectorXd& y) const;        // A_U^dagger, y in R(A)
  Eigen::VectorXd q_u_pinv(const Eigen::VectorXd& q) const;        // Q_U^dagger

  double sigma_min_a_tilde() const;
  double sigma_min_q_on_u() const;

 private:
  void require_range(const Eigen::VectorXd& y) const;

  Eigen::MatrixXd a_;
  Eigen::MatrixXd u_;
  Eigen::MatrixXd w_;
  Eigen::MatrixXd null_;
  Eigen::MatrixXd a_tilde_;
};

struct FactorizationReport {
  std::size_t samples = 0;
  double tilde_inverse_residual = 0.0;  // max || A~^{-1} y - Q A_U^dagger y ||
  double q_pinv_residual = 0.0;         // max || Q_U^dagger q - A_U^dagger A~ q ||
  double sigma_min_a_tilde = 0.0;
  double sigma_min_q_on_u = 0.0;
  bool passed = false;
};

/// Checks A~^{-1} = Q A_U^dagger and Q_U^dagger = A_U^dagger A~ on random
/// range elements. Residuals are relative: ||lhs - rhs|| / (1 + ||lhs||).
FactorizationReport factorization_check(const Eigen::MatrixXd& a, const Eigen::MatrixXd& u_basis,
                                        std::size_t samples, double tol, std::uint64_t seed = 1);

}  // namespace hybridop
