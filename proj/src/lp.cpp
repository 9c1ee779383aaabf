#include "hybridop/lp.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace hybridop {

namespace {

template <class Scalar>
struct Arith;

template <>
struct Arith<double> {
  static double eps() { return 1e-9; }
  static double abs(double x) { return std::abs(x); }
};

template <>
struct Arith<Rational> {
  static Rational eps() { return Rational(0); }
  static Rational abs(const Rational& x) { return boost::multiprecision::abs(x); }
};

// Original variable j expressed as offset + sum coef * (nonnegative column).
template <class Scalar>
struct VarMap {
  Scalar offset = Scalar(0);
  std::vector<std::pair<std::size_t, Scalar>> terms;
};

template <class Scalar>
class Tableau {
 public:
  Tableau(std::size_t rows, std::size_t cols) : t_(rows, std::vector<Scalar>(cols + 1, Scalar(0))), basis_(rows) {}

  std::vector<Scalar>& row(std::size_t i) { return t_[i]; }
  Scalar& rhs(std::size_t i) { return t_[i].back(); }
  std::size_t rows() const { return t_.size(); }
  std::size_t cols() const { return t_.empty() ? 0 : t_[0].size() - 1; }
  std::vector<std::size_t>& basis() { return basis_; }

  void pivot(std::size_t r, std::size_t s, std::vector<Scalar>& cost) {
    const Scalar inv = Scalar(1) / t_[r][s];
    for (auto& v : t_[r]) v *= inv;
    t_[r][s] = Scalar(1);
    for (std::size_t i = 0; i < t_.size(); ++i) {
      if (i == r || t_[i][s] == Scalar(0)) continue;
      const Scalar f = t_[i][s];
      for (std::size_t j = 0; j < t_[i].size(); ++j) t_[i][j] -= f * t_[r][j];
      t_[i][s] = Scalar(0);
    }
    if (cost[s] != Scalar(0)) {
      const Scalar f = cost[s];
      for (std::size_t j = 0; j < cost.size(); ++j) cost[j] -= f * t_[r][j];
      cost[s] = Scalar(0);
    }
    basis_[r] = s;
    ++pivots_;
  }

  // Minimizes with reduced-cost row `cost` (last entry holds -value).
  // Returns false on unboundedness.
  bool run(std::vector<Scalar>& cost, std::size_t allowed_cols) {
    const Scalar eps = Arith<Scalar>::eps();
    while (true) {
      if (pivots_ > kMaxPivots) throw Error(ErrorCode::NumericalFailure, "simplex pivot limit exceeded");
      std::size_t enter = allowed_cols;
      for (std::size_t j = 0; j < allowed_cols; ++j) {
        if (cost[j] < -eps) {
          enter = j;
          break;
        }
      }
      if (enter == allowed_cols) return true;
      std::size_t leave = rows();
      Scalar best(0);
      for (std::size_t i = 0; i < rows(); ++i) {
        if (!(t_[i][enter] > eps)) continue;
        const Scalar ratio = t_[i].back() / t_[i][enter];
        if (leave == rows() || ratio < best - eps || (!(ratio > best + eps) && basis_[i] < basis_[leave])) {
          leave = i;
          best = ratio;
        }
      }
      if (leave == rows()) return false;
      pivot(leave, enter, cost);
    }
  }

  std::size_t pivots() const { return pivots_; }

 private:
  static constexpr std::size_t kMaxPivots = 5000000;
  std::vector<std::vector<Scalar>> t_;
  std::vector<std::size_t> basis_;
  std::size_t pivots_ = 0;
};

template <class Scalar>
void check_shapes(const LinearProgram<Scalar>& lp) {
  const std::size_t n = lp.variables();
  auto bad = [](const std::string& what) { throw Error(ErrorCode::BadDimensions, what); };
  if (lp.lower.size() != n || lp.upper.size() != n) bad("bound vectors differ from the variable count");
  if (lp.ineq_lhs.size() != lp.ineq_rhs.size()) bad("inequality rows and right-hand sides differ");
  if (lp.eq_lhs.size() != lp.eq_rhs.size()) bad("equality rows and right-hand sides differ");
  for (const auto& r : lp.ineq_lhs) {
    if (r.size() != n) bad("inequality row length differs from the variable count");
  }
  for (const auto& r : lp.eq_lhs) {
    if (r.size() != n) bad("equality row length differs from the variable count");
  }
}

}  // namespace

template <class Scalar>
LpResult<Scalar> lp_solve(const LinearProgram<Scalar>& lp) {
  check_shapes(lp);
  const Scalar eps = Arith<Scalar>::eps();
  const std::size_t n = lp.variables();

  // Shift and split variables into nonnegative columns.
  std::vector<VarMap<Scalar>> vars(n);
  std::size_t ncols = 0;
  std::vector<std::pair<std::size_t, Scalar>> box_rows;  // column <= width
  for (std::size_t j = 0; j < n; ++j) {
    const auto& lo = lp.lower[j];
    const auto& hi = lp.upper[j];
    if (lo) {
      vars[j].offset = *lo;
      vars[j].terms.emplace_back(ncols, Scalar(1));
      if (hi) box_rows.emplace_back(ncols, *hi - *lo);
      ++ncols;
    } else if (hi) {
      vars[j].offset = *hi;
      vars[j].terms.emplace_back(ncols++, Scalar(-1));
    } else {
      vars[j].terms.emplace_back(ncols++, Scalar(1));
      vars[j].terms.emplace_back(ncols++, Scalar(-1));
    }
  }

  struct Row {
    std::vector<Scalar> coef;
    Scalar rhs;
    bool inequality;
  };
  std::vector<Row> rows;
  auto transform = [&](const std::vector<Scalar>& a, const Scalar& b, bool ineq) {
    Row r{std::vector<Scalar>(ncols, Scalar(0)), b, ineq};
    for (std::size_t j = 0; j < n; ++j) {
      if (a[j] == Scalar(0)) continue;
      r.rhs -= a[j] * vars[j].offset;
      for (const auto& [c, f] : vars[j].terms) r.coef[c] += a[j] * f;
    }
    rows.push_back(std::move(r));
  };
  for (std::size_t i = 0; i < lp.ineq_lhs.size(); ++i) transform(lp.ineq_lhs[i], lp.ineq_rhs[i], true);
  for (const auto& [c, width] : box_rows) {
    Row r{std::vector<Scalar>(ncols, Scalar(0)), width, true};
    r.coef[c] = Scalar(1);
    rows.push_back(std::move(r));
  }
  for (std::size_t i = 0; i < lp.eq_lhs.size(); ++i) transform(lp.eq_lhs[i], lp.eq_rhs[i], false);

  std::size_t nslack = 0;
  for (const auto& r : rows) nslack += r.inequality ? 1 : 0;
  std::vector<bool> needs_art(rows.size(), false);
  std::size_t nart = 0;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (!rows[i].inequality || rows[i].rhs < Scalar(0)) {
      needs_art[i] = true;
      ++nart;
    }
  }

  const std::size_t art_begin = ncols + nslack;
  const std::size_t total = art_begin + nart;
  Tableau<Scalar> tab(rows.size(), total);
  std::size_t slack = ncols;
  std::size_t art = art_begin;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    auto& tr = tab.row(i);
    const bool flip = rows[i].rhs < Scalar(0);
    const Scalar sign = flip ? Scalar(-1) : Scalar(1);
    for (std::size_t c = 0; c < ncols; ++c) tr[c] = sign * rows[i].coef[c];
    tab.rhs(i) = sign * rows[i].rhs;
    if (rows[i].inequality) {
      tr[slack] = sign;
      if (!needs_art[i]) tab.basis()[i] = slack;
      ++slack;
    }
    if (needs_art[i]) {
      tr[art] = Scalar(1);
      tab.basis()[i] = art++;
    }
  }

  LpResult<Scalar> result;
  if (nart > 0) {
    std::vector<Scalar> cost(total + 1, Scalar(0));
    for (std::size_t j = art_begin; j < total; ++j) cost[j] = Scalar(1);
    for (std::size_t i = 0; i < tab.rows(); ++i) {
      if (tab.basis()[i] >= art_begin) {
        for (std::size_t j = 0; j <= total; ++j) cost[j] -= tab.row(i)[j];
      }
    }
    tab.run(cost, total);
    Scalar scale(1);
    for (std::size_t i = 0; i < tab.rows(); ++i) scale = std::max(scale, Arith<Scalar>::abs(tab.rhs(i)));
    const Scalar infeasibility = -cost[total];
    if (infeasibility > eps * scale) {
      result.status = LpStatus::Infeasible;
      result.pivots = tab.pivots();
      return result;
    }
    // Drive artificial variables out of the basis where possible.
    for (std::size_t i = 0; i < tab.rows(); ++i) {
      if (tab.basis()[i] < art_begin) continue;
      for (std::size_t j = 0; j < art_begin; ++j) {
        if (Arith<Scalar>::abs(tab.row(i)[j]) > eps) {
          tab.pivot(i, j, cost);
          break;
        }
      }
    }
  }

  std::vector<Scalar> cost(total + 1, Scalar(0));
  for (std::size_t j = 0; j < n; ++j) {
    for (const auto& [c, f] : vars[j].terms) cost[c] += lp.objective[j] * f;
  }
  for (std::size_t i = 0; i < tab.rows(); ++i) {
    const std::size_t b = tab.basis()[i];
    if (cost[b] == Scalar(0)) continue;
    const Scalar f = cost[b];
    for (std::size_t j = 0; j <= total; ++j) cost[j] -= f * tab.row(i)[j];
  }
  const bool bounded = tab.run(cost, art_begin);
  result.pivots = tab.pivots();
  if (!bounded) {
    result.status = LpStatus::Unbounded;
    return result;
  }

  std::vector<Scalar> col_value(total, Scalar(0));
  for (std::size_t i = 0; i < tab.rows(); ++i) col_value[tab.basis()[i]] = tab.rhs(i);
  result.point.assign(n, Scalar(0));
  for (std::size_t j = 0; j < n; ++j) {
    Scalar v = vars[j].offset;
    for (const auto& [c, f] : vars[j].terms) v += f * col_value[c];
    result.point[j] = v;
  }
  result.value = Scalar(0);
  for (std::size_t j = 0; j < n; ++j) result.value += lp.objective[j] * result.point[j];
  result.status = LpStatus::Optimal;
  return result;
}

template <class Scalar>
void write_lp_text(const LinearProgram<Scalar>& lp, std::ostream& out) {
  check_shapes(lp);
  const std::streamsize saved = out.precision(17);
  auto term_list = [&](const std::vector<Scalar>& row) {
    bool any = false;
    for (std::size_t j = 0; j < row.size(); ++j) {
      if (row[j] == Scalar(0)) continue;
      out << (row[j] < Scalar(0) ? " - " : (any ? " + " : " ")) << Arith<Scalar>::abs(row[j]) << " x" << (j + 1);
      any = true;
    }
    if (!any) out << " 0 x1";
  };
  out << "\\ hybridop linear program\nMinimize\n obj:";
  term_list(lp.objective);
  out << "\nSubject To\n";
  for (std::size_t i = 0; i < lp.ineq_lhs.size(); ++i) {
    out << " le" << (i + 1) << ":";
    term_list(lp.ineq_lhs[i]);
    out << " <= " << lp.ineq_rhs[i] << "\n";
  }
  for (std::size_t i = 0; i < lp.eq_lhs.size(); ++i) {
    out << " eq" << (i + 1) << ":";
    term_list(lp.eq_lhs[i]);
    out << " = " << lp.eq_rhs[i] << "\n";
  }
  out << "Bounds\n";
  for (std::size_t j = 0; j < lp.variables(); ++j) {
    const auto& lo = lp.lower[j];
    const auto& hi = lp.upper[j];
    if (!lo && !hi) {
      out << " x" << (j + 1) << " free\n";
    } else if (lo && hi) {
      out << " " << *lo << " <= x" << (j + 1) << " <= " << *hi << "\n";
    } else if (lo) {
      out << " x" << (j + 1) << " >= " << *lo << "\n";
    } else {
      out << " -inf <= x" << (j + 1) << " <= " << *hi << "\n";
    }
  }
  out << "End\n";
  out.precision(saved);
}

template LpResult<double> lp_solve<double>(const LinearProgram<double>&);
template LpResult<Rational> lp_solve<Rational>(const LinearProgram<Rational>&);
template void write_lp_text<double>(const LinearProgram<double>&, std::ostream&);
template void write_lp_text<Rational>(const LinearProgram<Rational>&, std::ostream&);

}  // namespace hybridop
