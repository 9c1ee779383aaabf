#include "hybridop/certify.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>
#include <string>

namespace hybridop {

namespace {

struct StageResult {
  bool equalities_consistent = true;
  double margin = 0.0;  // optimal t
  Eigen::VectorXd eta;
};

Eigen::VectorXd dense_column(const MazurOperator& b, std::size_t k) {
  Eigen::VectorXd v = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(b.rows()));
  for (const auto& [i, x] : b.column(k)) v(static_cast<Eigen::Index>(i - 1)) = x;
  return v;
}

// min t  s.t.  <zeta^(m), eta> = s_m, <zeta^(n), eta> = s_n, |<zeta^(k), eta>| <= 1 + t  (k <= K),
// by constraint generation over k.
StageResult min_violation(const MazurOperator& b, std::size_t m, std::size_t n, int s_m, int s_n, std::size_t K) {
  const std::size_t r = b.rows();
  std::set<std::size_t> working{m, n};
  StageResult out;
  while (true) {
    LinearProgram<double> lp(r + 1);
    for (std::size_t j = 0; j <= r; ++j) lp.set_free(j);
    lp.objective[r] = 1.0;
    auto row_of = [&](std::size_t k, double sign) {
      std::vector<double> row(r + 1, 0.0);
      for (const auto& [i, x] : b.column(k)) row[i - 1] = sign * x;
      return row;
    };
    lp.add_eq(row_of(m, 1.0), static_cast<double>(s_m));
    lp.add_eq(row_of(n, 1.0), static_cast<double>(s_n));
    for (std::size_t k : working) {
      auto up = row_of(k, 1.0);
      up[r] = -1.0;
      lp.add_le(std::move(up), 1.0);
      auto down = row_of(k, -1.0);
      down[r] = -1.0;
      lp.add_le(std::move(down), 1.0);
    }
    const LpResult<double> sol = lp_solve(lp);
    if (sol.status == LpStatus::Infeasible) {
      out.equalities_consistent = false;
      out.margin = std::numeric_limits<double>::infinity();
      return out;
    }
    if (sol.status != LpStatus::Optimal) throw Error(ErrorCode::NumericalFailure, "certificate LP is unbounded");
    Eigen::VectorXd eta(static_cast<Eigen::Index>(r));
    for (std::size_t i = 0; i < r; ++i) eta(static_cast<Eigen::Index>(i)) = sol.point[i];
    const double t = sol.point[r];

    std::vector<std::pair<double, std::size_t>> violated;
    for (std::size_t k = 1; k <= K; ++k) {
      if (working.count(k)) continue;
      double s = 0.0;
      for (const auto& [i, x] : b.column(k)) s += eta(static_cast<Eigen::Index>(i - 1)) * x;
      const double v = std::abs(s) - 1.0;
      if (v > t + 1e-12) violated.emplace_back(v, k);
    }
    if (violated.empty()) {
      out.margin = t;
      out.eta = eta;
      return out;
    }
    std::sort(violated.begin(), violated.end(), [](const auto& a, const auto& c) {
      return a.first > c.first || (a.first == c.first && a.second < c.second);
    });
    for (std::size_t i = 0; i < std::min<std::size_t>(violated.size(), 32); ++i) working.insert(violated[i].second);
  }
}

constexpr double kFeasibilityTol = 1e-9;

bool feasible(const StageResult& s) { return s.equalities_consistent && s.margin <= kFeasibilityTol; }

}  // namespace

double proof_constant(const MazurOperator& b, std::size_t m, std::size_t n, int s_m, int s_n) {
  const Eigen::VectorXd combo = s_m * dense_column(b, m) + s_n * dense_column(b, n);
  const double len = combo.norm();
  return len == 0.0 ? std::numeric_limits<double>::infinity() : 2.0 / len;
}

CertificateOutcome minnorm_certificate(const MazurOperator& b, std::size_t m, std::size_t n, int s_m, int s_n,
                                       std::size_t constraints) {
  if (m == n) throw Error(ErrorCode::BadSupport, "the two support indices must differ");
  if (m == 0 || n == 0) throw Error(ErrorCode::BadSupport, "support indices are 1-based");
  if ((s_m != 1 && s_m != -1) || (s_n != 1 && s_n != -1)) throw Error(ErrorCode::BadParameter, "signs must be +1 or -1");
  const std::size_t first = std::max(m, n);
  if (constraints < first) {
    throw Error(ErrorCode::BadSupport, "constraint count " + std::to_string(constraints) +
                                           " does not reach the support indices");
  }
  if (constraints > b.cols()) throw Error(ErrorCode::OutOfFrame, "constraint count exceeds the column budget");

  CertificateOutcome out;
  out.proof_constant = proof_constant(b, m, n, s_m, s_n);
  const StageResult full = min_violation(b, m, n, s_m, s_n, constraints);
  if (feasible(full)) {
    out.verdict = CertificateOutcome::Verdict::Feasible;
    out.constraints = constraints;
    out.eta = to_sparse(full.eta);
    out.margin = full.margin;
    const Eigen::VectorXd combo = s_m * dense_column(b, m) + s_n * dense_column(b, n);
    out.eta_pairing = combo.norm() == 0.0 ? 0.0 : full.eta.dot(combo) / combo.norm();
    return out;
  }
  // Smallest infeasible K' in [first, constraints].
  std::size_t lo = first;
  std::size_t hi = constraints;
  StageResult at_hi = full;
  while (lo < hi) {
    const std::size_t mid = lo + (hi - lo) / 2;
    StageResult s = min_violation(b, m, n, s_m, s_n, mid);
    if (feasible(s)) {
      lo = mid + 1;
    } else {
      hi = mid;
      at_hi = std::move(s);
    }
  }
  out.verdict = CertificateOutcome::Verdict::InfeasibleAtK;
  out.infeasible_at = hi;
  out.constraints = constraints;
  out.margin = at_hi.margin;
  return out;
}

std::optional<AlignedAtom> minnorm_trivial(const FinSeq& y, EnumerationMode mode, std::size_t budget) {
  if (y.empty()) return AlignedAtom{RealSeq{}, 0.0, 0};
  const FinSeq p = canonical_primitive(y);
  FinSeq negated;
  for (const auto& [i, x] : p) negated.set(i, -x);
  const double len = norm(y, NormKind::L2);
  SphereEnumerator e(mode);
  for (std::size_t k = 1; k <= budget; ++k) {
    const SphereVector z = e.next();
    double c = 0.0;
    if (z.direction() == p) {
      c = len;
    } else if (z.direction() == negated) {
      c = -len;
    } else {
      continue;
    }
    return AlignedAtom{RealSeq{{k, c}}, std::abs(c), k};
  }
  return std::nullopt;
}

LinearProgram<double> qdist_program(const Eigen::MatrixXd& nullspace_basis, const Eigen::VectorXd& shift) {
  const auto n = static_cast<std::size_t>(shift.size());
  const auto r = static_cast<std::size_t>(nullspace_basis.cols());
  if (static_cast<std::size_t>(nullspace_basis.rows()) != n) {
    throw Error(ErrorCode::BadDimensions, "null-space basis rows differ from the domain dimension");
  }
  // Variables: c (free, r entries) then slacks s (n entries, >= 0).
  LinearProgram<double> lp(r + n);
  for (std::size_t j = 0; j < r; ++j) lp.set_free(j);
  for (std::size_t i = 0; i < n; ++i) lp.objective[r + i] = 1.0;
  for (std::size_t i = 0; i < n; ++i) {
    std::vector<double> up(r + n, 0.0);
    std::vector<double> down(r + n, 0.0);
    for (std::size_t j = 0; j < r; ++j) {
      const double z = nullspace_basis(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
      up[j] = -z;
      down[j] = z;
    }
    up[r + i] = -1.0;
    down[r + i] = -1.0;
    const double d = shift(static_cast<Eigen::Index>(i));
    lp.add_le(std::move(up), -d);   // d - Zc <= s
    lp.add_le(std::move(down), d);  // Zc - d <= s
  }
  return lp;
}

double qdist(const Eigen::MatrixXd& a, const Eigen::MatrixXd& nullspace_basis, const Eigen::VectorXd& y,
             const Eigen::VectorXd& y_prime) {
  if (y.size() != a.rows() || y_prime.size() != a.rows()) {
    throw Error(ErrorCode::BadDimensions, "right-hand sides must match the operator rows");
  }
  if (nullspace_basis.rows() != a.cols()) {
    throw Error(ErrorCode::BadDimensions, "null-space basis rows differ from the operator columns");
  }
  const std::size_t rank_a = numerical_rank(a);
  const std::size_t rank_z = numerical_rank(nullspace_basis);
  const double scale = (1.0 + a.norm()) * (1.0 + nullspace_basis.norm());
  if (nullspace_basis.cols() > 0 && (a * nullspace_basis).cwiseAbs().maxCoeff() > 1e-9 * scale) {
    throw Error(ErrorCode::BadParameter, "null-space basis is not annihilated by the operator");
  }
  if (rank_a + rank_z != static_cast<std::size_t>(a.cols())) {
    throw Error(ErrorCode::BadParameter, "null-space basis does not span the null-space");
  }
  const Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXd> cod(a);
  auto particular = [&](const Eigen::VectorXd& rhs) {
    Eigen::VectorXd x = cod.solve(rhs);
    x += cod.solve(rhs - a * x);  // one step of iterative refinement
    if ((a * x - rhs).norm() > 1e-9 * (1.0 + rhs.norm())) {
      throw Error(ErrorCode::NotInRange, "right-hand side is not in the range of the section");
    }
    return x;
  };
  const Eigen::VectorXd shift = particular(y_prime) - particular(y);
  const LpResult<double> sol = lp_solve(qdist_program(nullspace_basis, shift));
  if (sol.status != LpStatus::Optimal) throw Error(ErrorCode::NumericalFailure, "qdist LP did not reach an optimum");
  return std::max(0.0, sol.value);
}

}  // namespace hybridop
