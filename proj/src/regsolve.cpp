#include "hybridop/regsolve.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <random>
#include <string>
#include <vector>

namespace hybridop {

namespace {

constexpr std::size_t kPolishEvery = 50;

void validate(const TikhonovProblem& p) {
  if (!(p.alpha > 0.0) || !std::isfinite(p.alpha)) {
    throw Error(ErrorCode::BadParameter, "alpha must be positive, got " + std::to_string(p.alpha));
  }
  if (p.op.rows() != p.data.size()) throw Error(ErrorCode::BadDimensions, "data length differs from operator rows");
  if (!p.data.allFinite() || !p.op.allFinite()) throw Error(ErrorCode::BadData, "non-finite operator or data");
}

double spectral_norm(const Eigen::MatrixXd& a) {
  if (a.size() == 0) return 0.0;
  Eigen::BDCSVD<Eigen::MatrixXd> svd(a);
  return svd.singularValues()(0);
}

StudyRow solve_row(const Eigen::MatrixXd& a, const Eigen::VectorXd& data, const Eigen::VectorXd& truth, double delta,
                   double alpha, const SolverOptions& options) {
  TikhonovProblem p{a, data, alpha};
  RegularizationResult r = tikhonov_solve(p, options);
  StudyRow row;
  row.delta = delta;
  row.alpha = alpha;
  row.error_l1 = (r.x - truth).lpNorm<1>();
  row.residual = (a * r.x - data).norm();
  row.iterations = r.iterations;
  row.converged = r.converged;
  return row;
}

double trend_of(const std::vector<StudyRow>& rows) {
  if (rows.size() < 2) return 1.0;
  std::size_t ok = 0;
  for (std::size_t i = 1; i < rows.size(); ++i) {
    if (rows[i].error_l1 <= rows[i - 1].error_l1) ++ok;
  }
  return static_cast<double>(ok) / static_cast<double>(rows.size() - 1);
}

}  // namespace

Eigen::VectorXd noise_direction(std::size_t dim, std::uint64_t seed) {
  if (dim == 0) throw Error(ErrorCode::BadParameter, "noise direction needs a positive dimension");
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  Eigen::VectorXd w(static_cast<Eigen::Index>(dim));
  do {
    for (Eigen::Index i = 0; i < w.size(); ++i) w(i) = gauss(rng);
  } while (w.norm() == 0.0);
  return w / w.norm();
}

double tikhonov_objective(const TikhonovProblem& p, const Eigen::VectorXd& x) {
  return (p.op * x - p.data).squaredNorm() + p.alpha * x.lpNorm<1>();
}

double subgradient_residual(const TikhonovProblem& p, const Eigen::VectorXd& x) {
  const Eigen::VectorXd g = 2.0 * p.op.transpose() * (p.op * x - p.data);
  double worst = 0.0;
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    double r;
    if (x(i) > 0.0) {
      r = std::abs(g(i) + p.alpha);
    } else if (x(i) < 0.0) {
      r = std::abs(g(i) - p.alpha);
    } else {
      r = std::max(0.0, std::abs(g(i)) - p.alpha);
    }
    worst = std::max(worst, r);
  }
  return worst;
}

Eigen::VectorXd soft_threshold(const Eigen::VectorXd& v, double level) {
  Eigen::VectorXd out(v.size());
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    const double a = std::abs(v(i)) - level;
    out(i) = a > 0.0 ? std::copysign(a, v(i)) : 0.0;
  }
  return out;
}

RegularizationResult tikhonov_solve(const TikhonovProblem& p, const SolverOptions& options,
                                    const Eigen::VectorXd* warm_start) {
  validate(p);
  const Eigen::Index n = p.op.cols();
  RegularizationResult res;
  res.x = Eigen::VectorXd::Zero(n);
  if (warm_start) {
    if (warm_start->size() != n) throw Error(ErrorCode::BadDimensions, "warm start length differs from operator columns");
    res.x = *warm_start;
  }
  const double smax = spectral_norm(p.op);
  if (smax == 0.0) {
    // A = 0: the objective is alpha ||x||_1.
    res.x.setZero();
    res.objective = tikhonov_objective(p, res.x);
    res.converged = true;
    return res;
  }
  const double lipschitz = 2.0 * smax * smax;
  const double step = 1.0 / lipschitz;
  const double level = p.alpha * step;

  auto prox_grad = [&](const Eigen::VectorXd& z) {
    const Eigen::VectorXd g = 2.0 * p.op.transpose() * (p.op * z - p.data);
    return soft_threshold(z - step * g, level);
  };

  // On a fixed support S with signs s the optimality system is linear:
  // 2 A_S^T (A_S x_S - y) + alpha s = 0. Solving it exactly finishes the
  // slow tail of the proximal iteration.
  auto polish = [&](const Eigen::VectorXd& from) -> std::optional<Eigen::VectorXd> {
    std::vector<Eigen::Index> support;
    for (Eigen::Index i = 0; i < n; ++i) {
      if (from(i) != 0.0) support.push_back(i);
    }
    if (support.empty()) return std::nullopt;
    const auto k = static_cast<Eigen::Index>(support.size());
    Eigen::MatrixXd as(p.op.rows(), k);
    Eigen::VectorXd signs(k);
    for (Eigen::Index j = 0; j < k; ++j) {
      as.col(j) = p.op.col(support[static_cast<std::size_t>(j)]);
      signs(j) = from(support[static_cast<std::size_t>(j)]) > 0.0 ? 1.0 : -1.0;
    }
    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(as.transpose() * as);
    if (qr.rank() < k) return std::nullopt;
    const Eigen::VectorXd xs = qr.solve(as.transpose() * p.data - 0.5 * p.alpha * signs);
    Eigen::VectorXd out = Eigen::VectorXd::Zero(n);
    for (Eigen::Index j = 0; j < k; ++j) {
      if (xs(j) * signs(j) <= 0.0) return std::nullopt;
      out(support[static_cast<std::size_t>(j)]) = xs(j);
    }
    return out;
  };

  Eigen::VectorXd x = res.x;
  Eigen::VectorXd z = x;
  double fx = tikhonov_objective(p, x);
  double t = 1.0;
  res.subgradient_residual = subgradient_residual(p, x);
  if (res.subgradient_residual <= options.tol) {
    res.objective = fx;
    res.converged = true;
    return res;
  }
  for (std::size_t it = 1; it <= options.max_iter; ++it) {
    Eigen::VectorXd candidate = prox_grad(z);
    double fc = tikhonov_objective(p, candidate);
    if (fc > fx) {
      // Restart the momentum and take a plain proximal step from x.
      t = 1.0;
      candidate = prox_grad(x);
      fc = tikhonov_objective(p, candidate);
      if (fc > fx) {
        candidate = x;
        fc = fx;
      }
    }
    const double t_next = 0.5 * (1.0 + std::sqrt(1.0 + 4.0 * t * t));
    z = candidate + ((t - 1.0) / t_next) * (candidate - x);
    x = std::move(candidate);
    fx = fc;
    t = t_next;
    res.trace.push_back(fx);
    res.iterations = it;
    res.subgradient_residual = subgradient_residual(p, x);
    if (res.subgradient_residual <= options.tol) {
      res.converged = true;
      break;
    }
    if (it % kPolishEvery == 0) {
      if (auto polished = polish(x)) {
        const double fp = tikhonov_objective(p, *polished);
        const double rp = subgradient_residual(p, *polished);
        if (fp <= fx + 1e-12 * (1.0 + std::abs(fx)) && rp <= options.tol) {
          x = *polished;
          fx = fp;
          res.trace.push_back(fx);
          res.subgradient_residual = rp;
          res.converged = true;
          break;
        }
      }
    }
  }
  res.x = x;
  res.objective = fx;
  return res;
}

LeastSquaresSection least_squares_section(const Eigen::MatrixXd& section, const Eigen::VectorXd& y) {
  if (section.rows() != y.size()) throw Error(ErrorCode::BadDimensions, "data length differs from section rows");
  LeastSquaresSection out;
  Eigen::BDCSVD<Eigen::MatrixXd> svd(section, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const Eigen::VectorXd& s = svd.singularValues();
  const double cutoff = s.size() == 0 ? 0.0
                                      : static_cast<double>(std::max(section.rows(), section.cols())) *
                                            std::numeric_limits<double>::epsilon() * s(0);
  Eigen::VectorXd coeff = svd.matrixU().transpose() * y;
  for (Eigen::Index i = 0; i < s.size(); ++i) {
    if (s(i) > cutoff && s(i) > 0.0) {
      coeff(i) /= s(i);
      ++out.rank;
    } else {
      coeff(i) = 0.0;
    }
  }
  out.min_norm_solution = svd.matrixV() * coeff;
  out.residual_infimum = (section * out.min_norm_solution - y).norm();
  return out;
}

bool NoiseStudy::strictly_decreasing() const {
  for (std::size_t i = 1; i < rows.size(); ++i) {
    if (!(rows[i].error_l1 < rows[i - 1].error_l1)) return false;
  }
  return true;
}

double choose_alpha(const ParameterRule& rule, const Eigen::MatrixXd& op, const Eigen::VectorXd& data, double delta,
                    const SolverOptions& options) {
  if (rule.kind == ParameterRule::Kind::APriori) {
    const double alpha = rule.c * delta;
    if (!(alpha > 0.0)) throw Error(ErrorCode::BadParameter, "parameter rule yields alpha <= 0");
    return alpha;
  }
  if (!(delta > 0.0) || !(rule.tau > 0.0)) {
    throw Error(ErrorCode::BadParameter, "discrepancy principle needs delta > 0 and tau > 0");
  }
  const double target = rule.tau * delta;
  const double alpha_max = 2.0 * (op.transpose() * data).lpNorm<Eigen::Infinity>();
  if (!(alpha_max > 0.0) || data.norm() <= target) return std::max(alpha_max, delta);
  auto residual = [&](double alpha) {
    TikhonovProblem p{op, data, alpha};
    const RegularizationResult r = tikhonov_solve(p, options);
    return (op * r.x - data).norm();
  };
  double lo = std::log(alpha_max * 1e-12);
  double hi = std::log(alpha_max);
  if (residual(std::exp(lo)) > target) return std::exp(lo);
  for (int i = 0; i < 60; ++i) {
    const double mid = 0.5 * (lo + hi);
    const double r = residual(std::exp(mid));
    if (std::abs(r - target) <= 1e-3 * target) return std::exp(mid);
    if (r > target) {
      hi = mid;
    } else {
      lo = mid;
    }
  }
  return std::exp(0.5 * (lo + hi));
}

RealSeq sparse_truth(const RestrictedOperator& op, std::size_t atoms, std::uint64_t seed) {
  if (atoms == 0 || atoms > op.levels()) {
    throw Error(ErrorCode::BadParameter, "atom count must lie in [1, " + std::to_string(op.levels()) + "]");
  }
  std::mt19937_64 rng(seed);
  std::vector<std::size_t> levels(op.levels());
  for (std::size_t l = 0; l < levels.size(); ++l) levels[l] = l;
  // Partial Fisher-Yates with explicit draws; std::shuffle is not portable across standard libraries.
  for (std::size_t i = 0; i < atoms; ++i) {
    const std::size_t j = i + static_cast<std::size_t>(rng() % (levels.size() - i));
    std::swap(levels[i], levels[j]);
  }
  Eigen::VectorXd coeffs = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(op.levels()));
  for (std::size_t i = 0; i < atoms; ++i) {
    const double mag = 1.0 + static_cast<double>(rng() >> 11) * 0x1.0p-53;
    coeffs(static_cast<Eigen::Index>(levels[i])) = (rng() & 1) ? mag : -mag;
  }
  return op.embed(coeffs);
}

NoiseStudy noise_convergence_study(const RestrictedOperator& op, const RealSeq& x_true,
                                   const std::vector<double>& deltas, const ParameterRule& rule, std::uint64_t seed,
                                   const SolverOptions& options) {
  if (deltas.empty()) throw Error(ErrorCode::BadParameter, "empty noise grid");
  for (std::size_t i = 0; i < deltas.size(); ++i) {
    if (!(deltas[i] >= 0.0) || (i > 0 && !(deltas[i] < deltas[i - 1]))) {
      throw Error(ErrorCode::BadParameter, "noise grid must be nonnegative and strictly descending");
    }
  }
  const Eigen::VectorXd truth = op.coefficients(x_true);
  const Eigen::VectorXd exact = op.matrix() * truth;
  const Eigen::VectorXd w = noise_direction(op.rows(), seed);
  NoiseStudy study;
  study.truth = x_true;
  for (double delta : deltas) {
    const Eigen::VectorXd data = exact + delta * w;
    const double alpha = choose_alpha(rule, op.matrix(), data, delta, options);
    study.rows.push_back(solve_row(op.matrix(), data, truth, delta, alpha, options));
  }
  study.trend = trend_of(study.rows);
  return study;
}

NoiseStudy alpha_sweep(const RestrictedOperator& op, const RealSeq& x_true, double delta,
                       const std::vector<double>& alphas, std::uint64_t seed, const SolverOptions& options) {
  if (!(delta >= 0.0)) throw Error(ErrorCode::BadParameter, "noise level must be nonnegative");
  const Eigen::VectorXd truth = op.coefficients(x_true);
  const Eigen::VectorXd data = op.matrix() * truth + delta * noise_direction(op.rows(), seed);
  NoiseStudy study;
  study.truth = x_true;
  for (double alpha : alphas) study.rows.push_back(solve_row(op.matrix(), data, truth, delta, alpha, options));
  study.trend = trend_of(study.rows);
  return study;
}

ProbeReport full_space_failure_probe(const MazurOperator& b, const RealSeq& y_delta,
                                     const std::vector<std::size_t>& n_grid, double alpha,
                                     const SolverOptions& options) {
  if (n_grid.empty()) throw Error(ErrorCode::BadParameter, "empty section grid");
  for (std::size_t i = 1; i < n_grid.size(); ++i) {
    if (!(n_grid[i] > n_grid[i - 1])) throw Error(ErrorCode::BadParameter, "section grid must be ascending");
  }
  if (y_delta.max_index() > b.rows()) throw Error(ErrorCode::OutOfFrame, "data leaves the row frame");
  const Eigen::VectorXd data = to_dense(y_delta, b.rows());
  ProbeReport report;
  Eigen::VectorXd previous;
  for (std::size_t n : n_grid) {
    TikhonovProblem p{b.finite_section(n), data, alpha};
    Eigen::VectorXd start = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(n));
    if (previous.size() > 0) start.head(previous.size()) = previous;
    const RegularizationResult r = tikhonov_solve(p, options, &start);
    ProbeRow row;
    row.n = n;
    row.l1_norm = r.x.lpNorm<1>();
    row.objective = r.objective;
    row.residual = (p.op * r.x - data).norm();
    row.iterations = r.iterations;
    row.converged = r.converged;
    if (!report.rows.empty() && row.objective > report.rows.back().objective) report.objective_nonincreasing = false;
    report.rows.push_back(row);
    previous = r.x;
  }
  const double first = report.rows.front().l1_norm;
  report.norm_growth = first > 0.0 ? report.rows.back().l1_norm / first : 1.0;
  return report;
}

}  // namespace hybridop
