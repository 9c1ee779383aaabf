#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include <Eigen/Dense>

#include "hybridop/mazur.hpp"
#include "hybridop/riesz.hpp"

namespace hybridop {

/// ||A x - y||_2^2 + alpha ||x||_1 over the columns of A.
struct TikhonovProblem {
  Eigen::MatrixXd op;
  Eigen::VectorXd data;
  double alpha = 0.0;
};

struct SolverOptions {
  double tol = 1e-8;
  std::size_t max_iter = 100000;
};

struct RegularizationResult {
  Eigen::VectorXd x;
  double objective = 0.0;
  double subgradient_residual = 0.0;
  std::size_t iterations = 0;
  bool converged = false;
  std::vector<double> trace;  // objective after each iteration
};

double tikhonov_objective(const TikhonovProblem& p, const Eigen::VectorXd& x);

/// Largest per-coordinate distance from 0 to the subdifferential of the
/// objective at x:
///   x_i != 0:  |g_i + alpha sign(x_i)|
///   x_i == 0:  max(0, |g_i| - alpha)
/// with g = 2 A^T (A x - y).
double subgradient_residual(const TikhonovProblem& p, const Eigen::VectorXd& x);

Eigen::VectorXd soft_threshold(const Eigen::VectorXd& v, double level);

/// Accelerated proximal gradient (FISTA) with monotone restart, step
/// 1 / (2 sigma_max^2). Starts from zero unless a warm start is given.
RegularizationResult tikhonov_solve(const TikhonovProblem& p, const SolverOptions& options = {},
                                    const Eigen::VectorXd* warm_start = nullptr);

struct LeastSquaresSection {
  double residual_infimum = 0.0;
  Eigen::VectorXd min_norm_solution;  // one of possibly many minimizers
  std::size_t rank = 0;
};

LeastSquaresSection least_squares_section(const Eigen::MatrixXd& section, const Eigen::VectorXd& y);

struct ParameterRule {
  enum class Kind { APriori, Discrepancy };
  Kind kind = Kind::APriori;
  double c = 1.0;    // alpha = c * delta
  double tau = 1.5;  // ||A x_alpha - y^delta|| ~= tau * delta

  static ParameterRule apriori(double c = 1.0) { return {Kind::APriori, c, 1.5}; }
  static ParameterRule discrepancy(double tau = 1.5) { return {Kind::Discrepancy, 1.0, tau}; }
};

struct StudyRow {
  double delta = 0.0;
  double alpha = 0.0;
  double error_l1 = 0.0;
  double residual = 0.0;  // ||A x - y^delta||_2
  std::size_t iterations = 0;
  bool converged = false;
};

struct NoiseStudy {
  RealSeq truth;
  std::vector<StudyRow> rows;
  /// Fraction of consecutive rows whose error does not increase.
  double trend = 1.0;

  bool strictly_decreasing() const;
};

/// alpha chosen by the rule for the given problem data.
double choose_alpha(const ParameterRule& rule, const Eigen::MatrixXd& op, const Eigen::VectorXd& data, double delta,
                    const SolverOptions& options = {});

/// Seeded Gaussian direction of unit l2 norm; the noise model of the studies.
Eigen::VectorXd noise_direction(std::size_t dim, std::uint64_t seed);

/// Seeded element of U with `atoms` nonzero coefficients of magnitude in [1, 2).
RealSeq sparse_truth(const RestrictedOperator& op, std::size_t atoms, std::uint64_t seed);

/// For each delta: y^delta = B|_U x_true + delta * w with one seeded unit
/// direction w, alpha from the rule, error ||x_alpha - x_true||_1.
NoiseStudy noise_convergence_study(const RestrictedOperator& op, const RealSeq& x_true,
                                   const std::vector<double>& deltas, const ParameterRule& rule, std::uint64_t seed,
                                   const SolverOptions& options = {});

/// Fixed noise level, explicit alpha path (alpha -> 0 at delta = 0 checks
/// exact-data consistency).
NoiseStudy alpha_sweep(const RestrictedOperator& op, const RealSeq& x_true, double delta,
                       const std::vector<double>& alphas, std::uint64_t seed, const SolverOptions& options = {});

struct ProbeRow {
  std::size_t n = 0;
  double l1_norm = 0.0;
  double objective = 0.0;
  double residual = 0.0;
  std::size_t iterations = 0;
  bool converged = false;
};

struct ProbeReport {
  std::vector<ProbeRow> rows;
  bool objective_nonincreasing = true;
  /// l1 norm of the last minimizer over the first; > 1 is the finite
  /// symptom of minimizing sequences escaping to infinity.
  double norm_growth = 1.0;
};

/// Solves the full-section problem for each n in the grid, warm-starting
/// from the previous minimizer. Measures only.
ProbeReport full_space_failure_probe(const MazurOperator& b, const RealSeq& y_delta,
                                     const std::vector<std::size_t>& n_grid, double alpha,
                                     const SolverOptions& options = {});

}  // namespace hybridop
