#include "hybridop/riesz.hpp"

#include <cmath>
#include <numbers>
#include <set>
#include <string>

namespace hybridop {

namespace {

constexpr double kSpectralSlack = 1e-9;

Eigen::VectorXd singular_values(const Eigen::MatrixXd& a) {
  Eigen::BDCSVD<Eigen::MatrixXd> svd(a);
  return svd.singularValues();
}

}  // namespace

RieszSelection greedy_select(EnumerationMode mode, std::size_t levels, std::size_t budget) {
  if (levels == 0) throw Error(ErrorCode::BadParameter, "selection depth must be at least 1");
  RieszSelection sel;
  sel.mode = mode;
  sel.indices.assign(levels, 0);
  sel.defects.assign(levels, 0.0);
  std::vector<std::optional<SphereVector>> atoms(levels);
  std::set<std::size_t> used;
  std::size_t open = levels;

  // A vector within 1/2 of e^(l) has its l-th coordinate above 7/8, so l is
  // its unique largest coordinate and one pass serves every level.
  SphereEnumerator e(mode);
  for (std::size_t k = 1; k <= budget && open > 0; ++k) {
    SphereVector z = e.next();
    std::size_t lead = 0;
    double best = 0.0;
    for (const auto& [i, x] : z.unit()) {
      if (x > best) {
        best = x;
        lead = i;
      }
    }
    if (lead == 0 || lead > levels || atoms[lead - 1] || used.count(k)) continue;
    RealSeq target{{lead, 1.0}};
    double d = norm(subtract(target, z.unit()), NormKind::L2);
    if (d <= 1.0 / (2.0 * static_cast<double>(lead))) {
      sel.indices[lead - 1] = k;
      sel.defects[lead - 1] = d;
      atoms[lead - 1] = z;
      used.insert(k);
      --open;
    }
  }
  for (std::size_t l = 0; l < levels; ++l) {
    if (!atoms[l]) {
      throw Error(ErrorCode::NotFoundWithinBudget, "no enumeration index <= " + std::to_string(budget) +
                                                       " within 1/(2l) of e^(" + std::to_string(l + 1) + ")");
    }
    sel.atoms.push_back(*atoms[l]);
  }
  double ss = 0.0;
  for (double d : sel.defects) ss += d * d;
  sel.lambda_data = std::sqrt(ss);
  sel.lambda_bound = lambda_bound(levels);
  return sel;
}

double lambda_bound(std::size_t levels) {
  double s = 0.0;
  for (std::size_t l = levels; l >= 1; --l) {
    double dl = static_cast<double>(l);
    s += 1.0 / (4.0 * dl * dl);
  }
  return std::sqrt(s);
}

double lambda_bound_limit() { return std::numbers::pi / (2.0 * std::sqrt(6.0)); }

Eigen::MatrixXd build_T(const RieszSelection& selection, std::size_t rows) {
  const std::size_t levels = selection.levels();
  if (rows < levels) throw Error(ErrorCode::OutOfFrame, "row frame smaller than the selection depth");
  Eigen::MatrixXd t = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(levels));
  for (std::size_t l = 0; l < levels; ++l) {
    const auto& unit = selection.atoms[l].unit();
    if (unit.max_index() > rows) {
      throw Error(ErrorCode::OutOfFrame, "zeta^(" + std::to_string(selection.indices[l]) + ") leaves the row frame");
    }
    for (const auto& [i, x] : unit) t(static_cast<Eigen::Index>(i - 1), static_cast<Eigen::Index>(l)) = x;
  }
  const Eigen::VectorXd s = singular_values(t);
  const double lam = selection.lambda_data;
  for (Eigen::Index i = 0; i < s.size(); ++i) {
    if (s(i) < 1.0 - lam - kSpectralSlack || s(i) > 1.0 + lam + kSpectralSlack) {
      throw Error(ErrorCode::NumericalFailure, "singular value " + std::to_string(s(i)) + " outside [1 - lambda, 1 + lambda]");
    }
  }
  return t;
}

RestrictedOperator::RestrictedOperator(const MazurOperator& base, RieszSelection selection)
    : selection_(std::move(selection)) {
  const std::size_t levels = selection_.levels();
  columns_ = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(base.rows()), static_cast<Eigen::Index>(levels));
  for (std::size_t l = 0; l < levels; ++l) {
    const std::size_t k = selection_.indices[l];
    if (k > base.cols()) {
      throw Error(ErrorCode::OutOfFrame, "selected index " + std::to_string(k) + " exceeds the column budget");
    }
    if (!(base.zeta(k).direction() == selection_.atoms[l].direction())) {
      throw Error(ErrorCode::BadParameter, "selection was built from a different enumeration");
    }
    if (selection_.atoms[l].direction().max_index() > base.rows()) {
      throw Error(ErrorCode::OutOfFrame, "zeta^(" + std::to_string(k) + ") is truncated by the row frame");
    }
    for (const auto& [i, x] : base.column(k)) {
      columns_(static_cast<Eigen::Index>(i - 1), static_cast<Eigen::Index>(l)) = x;
    }
  }
  const Eigen::VectorXd s = singular_values(columns_);
  sigma_max_ = s(0);
  sigma_min_ = s(s.size() - 1);
  if (static_cast<std::size_t>(s.size()) < levels || sigma_min_ < 1.0 - selection_.lambda_data - kSpectralSlack ||
      1.0 - selection_.lambda_data <= 0.0) {
    throw Error(ErrorCode::NumericalFailure, "restricted section is not certified injective");
  }
}

Eigen::VectorXd RestrictedOperator::coefficients(const RealSeq& u) const {
  Eigen::VectorXd c = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(levels()));
  for (const auto& [k, x] : u) {
    bool found = false;
    for (std::size_t l = 0; l < levels(); ++l) {
      if (selection_.indices[l] == k) {
        c(static_cast<Eigen::Index>(l)) = x;
        found = true;
        break;
      }
    }
    if (!found) throw Error(ErrorCode::OutOfFrame, "coordinate " + std::to_string(k) + " is not in U");
  }
  return c;
}

RealSeq RestrictedOperator::embed(const Eigen::VectorXd& coeffs) const {
  if (static_cast<std::size_t>(coeffs.size()) != levels()) {
    throw Error(ErrorCode::BadDimensions, "coefficient vector length differs from the selection depth");
  }
  RealSeq u;
  for (std::size_t l = 0; l < levels(); ++l) u.set(selection_.indices[l], coeffs(static_cast<Eigen::Index>(l)));
  return u;
}

RealSeq RestrictedOperator::apply(const RealSeq& u) const {
  const Eigen::VectorXd y = columns_ * coefficients(u);
  RealSeq out;
  for (Eigen::Index i = 0; i < y.size(); ++i) out.set(static_cast<std::size_t>(i + 1), y(i));
  return out;
}

RestrictedOperator restrict_to(const MazurOperator& base, const RieszSelection& selection) {
  return RestrictedOperator(base, selection);
}

}  // namespace hybridop
