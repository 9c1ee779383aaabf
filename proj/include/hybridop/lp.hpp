#pragma once

// Dense two-phase simplex for small linear programs, in floating point or
// exact rational arithmetic.

#include <cstddef>
#include <optional>
#include <ostream>
#include <vector>

#include "hybridop/seqspace.hpp"

namespace hybridop {

/// minimize c^T x  s.t.  A_ub x <= b_ub,  A_eq x = b_eq,  lower <= x <= upper.
/// A missing bound is infinite; variables default to x >= 0.
template <class Scalar>
struct LinearProgram {
  std::vector<Scalar> objective;
  std::vector<std::vector<Scalar>> ineq_lhs;
  std::vector<Scalar> ineq_rhs;
  std::vector<std::vector<Scalar>> eq_lhs;
  std::vector<Scalar> eq_rhs;
  std::vector<std::optional<Scalar>> lower;
  std::vector<std::optional<Scalar>> upper;

  explicit LinearProgram(std::size_t variables = 0)
      : objective(variables, Scalar(0)), lower(variables, Scalar(0)), upper(variables) {}

  std::size_t variables() const { return objective.size(); }

  void set_free(std::size_t j) {
    lower[j].reset();
    upper[j].reset();
  }
  void add_le(std::vector<Scalar> row, Scalar rhs) {
    ineq_lhs.push_back(std::move(row));
    ineq_rhs.push_back(std::move(rhs));
  }
  void add_eq(std::vector<Scalar> row, Scalar rhs) {
    eq_lhs.push_back(std::move(row));
    eq_rhs.push_back(std::move(rhs));
  }
};

enum class LpStatus { Optimal, Infeasible, Unbounded };

template <class Scalar>
struct LpResult {
  LpStatus status = LpStatus::Infeasible;
  std::vector<Scalar> point;
  Scalar value = Scalar(0);
  std::size_t pivots = 0;
};

/// Bland's rule throughout, so the method terminates on degenerate
/// problems. Throws BadDimensions on inconsistent shapes.
template <class Scalar>
LpResult<Scalar> lp_solve(const LinearProgram<Scalar>& lp);

/// CPLEX-style LP text (Minimize / Subject To / Bounds / End).
template <class Scalar>
void write_lp_text(const LinearProgram<Scalar>& lp, std::ostream& out);

extern template LpResult<double> lp_solve<double>(const LinearProgram<double>&);
extern template LpResult<Rational> lp_solve<Rational>(const LinearProgram<Rational>&);
extern template void write_lp_text<double>(const LinearProgram<double>&, std::ostream&);
extern template void write_lp_text<Rational>(const LinearProgram<Rational>&, std::ostream&);

}  // namespace hybridop
