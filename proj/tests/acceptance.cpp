// Acceptance suite: one PASS/FAIL line per criterion, exit status 1 if any fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "cli.hpp"
#include "hybridop/certify.hpp"
#include "hybridop/regsolve.hpp"
#include "hybridop/riesz.hpp"
#include "oracles.hpp"

using namespace hybridop;
namespace fs = std::filesystem;

namespace {

struct Check {
  bool ok = true;
  std::string detail;

  void require(bool cond, const std::string& what) {
    if (!cond && ok) {
      ok = false;
      detail = what;
    }
  }
};

int failures = 0;

void criterion(int id, const std::string& name, double time_limit_s, const std::function<void(Check&)>& body) {
  Check c;
  const auto start = std::chrono::steady_clock::now();
  try {
    body(c);
  } catch (const std::exception& e) {
    c.require(false, std::string("exception: ") + e.what());
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  if (time_limit_s > 0.0) {
    std::ostringstream os;
    os << "runtime " << secs << " s exceeds " << time_limit_s << " s";
    c.require(secs < time_limit_s, os.str());
  }
  if (!c.ok) ++failures;
  std::printf("%s %2d %s (%.2f s)%s%s\n", c.ok ? "PASS" : "FAIL", id, name.c_str(), secs, c.ok ? "" : ": ",
              c.detail.c_str());
  std::fflush(stdout);
}

RealSeq random_dense(std::size_t n, std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  RealSeq v;
  for (std::size_t i = 1; i <= n; ++i) v.set(i, g(rng));
  return v;
}

RealSeq random_sparse(std::size_t n, std::size_t nnz, std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  std::uniform_int_distribution<std::size_t> idx(1, n);
  RealSeq v;
  for (std::size_t j = 0; j < nnz; ++j) v.set(idx(rng), g(rng));
  return v;
}

std::size_t index_of(const FinSeq& p, std::size_t budget) {
  SphereEnumerator e(EnumerationMode::canonical());
  for (std::size_t k = 1; k <= budget; ++k) {
    if (e.next().direction() == p) return k;
  }
  return 0;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

std::map<std::string, std::string> run_into(const fs::path& config, const fs::path& dir, int& code) {
  fs::remove_all(dir);
  std::ifstream in(config);
  const auto command = nlohmann::json::parse(in)["command"].get<std::string>();
  std::ostringstream out, err;
  code = cli::run(std::vector<std::string>{command, "--config", config.string(), "--out", dir.string()}, out, err);
  std::map<std::string, std::string> files;
  if (fs::exists(dir)) {
    for (const auto& e : fs::directory_iterator(dir)) files[e.path().filename().string()] = slurp(e.path());
  }
  fs::remove_all(dir);
  return files;
}

}  // namespace

int main() {
  criterion(1, "norm/duality suite, n = m = 2000", 5.0, [](Check& c) {
    std::mt19937_64 rng(1);
    int cases = 0;
    for (const auto& mode : {EnumerationMode::canonical(), EnumerationMode::no_singleton(),
                             EnumerationMode::adversarial_prefix(100)}) {
      const MazurOperator b(mode, 2000, 2000);
      for (int trial = 0; trial < 400; ++trial) {
        const bool dense = trial % 4 == 0;
        const RealSeq x = dense ? random_dense(b.cols(), rng) : random_sparse(b.cols(), 1 + trial % 40, rng);
        const RealSeq eta = dense ? random_dense(b.rows(), rng) : random_sparse(b.rows(), 1 + trial % 25, rng);
        const RealSeq bx = b.apply(x);
        const RealSeq bstar = b.apply_adjoint(eta);
        const double x1 = norm(x, NormKind::L1);
        const double eta2 = norm(eta, NormKind::L2);
        c.require(norm(bx, NormKind::L2) <= x1 + 1e-12, "||Bx||_2 > ||x||_1");
        c.require(norm(bstar, NormKind::LInf) <= eta2 + 1e-12, "||B*eta||_inf > ||eta||_2");
        c.require(std::abs(dot(eta, bx) - dot(bstar, x)) <= 1e-10 * (1.0 + x1 * eta2), "duality gap");
        ++cases;
      }
    }
    c.require(cases >= 1000, "fewer than 1000 cases");
  });

  criterion(2, "Riesz selection, no-singleton, L = 20, budget 1e6", 60.0, [](Check& c) {
    const RieszSelection sel = greedy_select(EnumerationMode::no_singleton(), 20, 1000000);
    c.require(sel.levels() == 20, "wrong number of levels");
    for (std::size_t l = 1; l <= sel.levels(); ++l) {
      c.require(sel.defects[l - 1] <= 1.0 / (2.0 * static_cast<double>(l)), "defect above 1/(2l) at l = " + std::to_string(l));
    }
    c.require(sel.lambda_data < 1.0, "lambda_data >= 1");
    c.require(std::abs(lambda_bound_limit() - std::numbers::pi / (2.0 * std::sqrt(6.0))) <= 1e-6, "lambda limit");
    c.require(std::abs(lambda_bound(1000000) - std::numbers::pi / (2.0 * std::sqrt(6.0))) <= 1e-6,
              "lambda_bound(1e6) far from the limit");
    std::size_t rows = sel.levels();
    for (const auto& z : sel.atoms) rows = std::max(rows, z.direction().max_index());
    const Eigen::MatrixXd t = build_T(sel, rows);
    const Eigen::VectorXd s = Eigen::JacobiSVD<Eigen::MatrixXd>(t).singularValues();
    c.require(s.minCoeff() >= 1.0 - sel.lambda_data - 1e-9, "sigma_min below 1 - lambda");
    c.require(s.maxCoeff() <= 1.0 + sel.lambda_data + 1e-9, "sigma_max above 1 + lambda");
  });

  criterion(3, "Tikhonov convergence, L = 10, 3 atoms, alpha = delta", 30.0, [](Check& c) {
    const RieszSelection sel = greedy_select(EnumerationMode::no_singleton(), 10, 1000000);
    const std::size_t cols = *std::max_element(sel.indices.begin(), sel.indices.end());
    const RestrictedOperator op = restrict_to(MazurOperator::covering(EnumerationMode::no_singleton(), cols), sel);
    const RealSeq truth = sparse_truth(op, 3, 1);
    const NoiseStudy s = noise_convergence_study(op, truth, {1e-1, 1e-2, 1e-3, 1e-4}, ParameterRule::apriori(1.0), 1);
    c.require(s.rows.size() == 4, "wrong row count");
    c.require(s.strictly_decreasing(), "errors not strictly decreasing");
    for (const auto& r : s.rows) c.require(r.alpha == r.delta, "alpha != delta");
    c.require(s.rows.back().error_l1 <= 10.0 * 1e-4, "final error above 10 * 1e-4");
  });

  criterion(4, "soft-threshold exactness and grid oracle agreement", 0.0, [](Check& c) {
    std::mt19937_64 rng(2);
    for (int trial = 0; trial < 50; ++trial) {
      const Eigen::Index n = 1 + trial % 7;
      const Eigen::VectorXd y = oracle::gaussian(n, rng);
      const double alpha = 0.05 + 0.1 * (trial % 5);
      const RegularizationResult r = tikhonov_solve({Eigen::MatrixXd::Identity(n, n), y, alpha});
      for (Eigen::Index i = 0; i < n; ++i) {
        const double s = std::copysign(std::max(0.0, std::abs(y(i)) - alpha / 2.0), y(i));
        c.require(std::abs(r.x(i) - s) <= 1e-12, "identity shrinkage off by more than 1e-12");
      }
    }
    std::mt19937_64 rng2(8);
    for (int trial = 0; trial < 60; ++trial) {
      const Eigen::Index cols = 1 + trial % 3;
      const Eigen::Index rows = cols + trial % 3;
      const Eigen::MatrixXd a = oracle::gaussian(rows, cols, rng2);
      const Eigen::VectorXd y = oracle::gaussian(rows, rng2);
      const double alpha = 0.02 + 0.3 * ((trial * 7) % 11) / 10.0;
      const RegularizationResult r = tikhonov_solve({a, y, alpha});
      const oracle::TikhonovOracle o = oracle::tikhonov_grid_polish(a, y, alpha);
      c.require((r.x - o.x).lpNorm<Eigen::Infinity>() <= 1e-6, "grid oracle disagreement, trial " + std::to_string(trial));
    }
  });

  criterion(5, "rank collapse, adversarial-prefix:100", 0.0, [](Check& c) {
    for (std::size_t n : {10u, 50u, 100u}) {
      const MazurOperator b = MazurOperator::covering(EnumerationMode::adversarial_prefix(100), n);
      c.require(numerical_rank(b.finite_section()) == 2, "rank != 2 at n = " + std::to_string(n));
    }
  });

  criterion(6, "minimum-norm certificate", 0.0, [](Check& c) {
    const std::size_t diag = index_of(FinSeq{{1, 1}, {2, 1}}, 100000);
    c.require(diag > 0, "diagonal direction not found");
    const std::size_t e1 = index_of(FinSeq{{1, 1}}, 100);
    const std::size_t e2 = index_of(FinSeq{{2, 1}}, 100);
    const MazurOperator b = MazurOperator::covering(EnumerationMode::canonical(), std::max<std::size_t>(diag, 10000));
    const CertificateOutcome aligned = minnorm_certificate(b, e1, e2, 1, 1, diag);
    c.require(!aligned.feasible(), "aligned pair feasible at the diagonal index");
    if (aligned.feasible()) return;
    c.require(aligned.infeasible_at <= diag, "k* beyond the diagonal index");
    for (std::size_t k = std::max(e1, e2); k < aligned.infeasible_at; k += 7) {
      const CertificateOutcome stage = minnorm_certificate(b, e1, e2, 1, 1, k);
      c.require(stage.feasible(), "feasible stage infeasible at K = " + std::to_string(k));
      c.require(std::abs(stage.eta_pairing - std::sqrt(2.0)) <= 1e-9, "pairing != sqrt 2 at K = " + std::to_string(k));
    }
    const std::size_t minus_e1 = index_of(FinSeq{{1, -1}}, 100);
    for (std::size_t k : {2u, 10u, 100u, 1000u, 10000u}) {
      const CertificateOutcome anti = minnorm_certificate(b, e1, minus_e1, 1, -1, std::max(k, minus_e1));
      c.require(anti.feasible(), "antipodal pair infeasible at K = " + std::to_string(k));
    }
  });

  criterion(7, "qdist oracle equivalence", 0.0, [](Check& c) {
    std::mt19937_64 rng(23);
    for (int trial = 0; trial < 50; ++trial) {
      const Eigen::Index nullity = 1 + trial % 3;
      const Eigen::Index cols = nullity + 1 + trial % 3;
      const Eigen::Index rank = cols - nullity;
      const Eigen::MatrixXd a = oracle::gaussian(rank + trial % 2, rank, rng) * oracle::gaussian(rank, cols, rng);
      const Eigen::MatrixXd z = Eigen::FullPivLU<Eigen::MatrixXd>(a).kernel();
      const Eigen::VectorXd x0 = oracle::gaussian(cols, rng);
      const Eigen::VectorXd x1 = oracle::gaussian(cols, rng);
      const double v = qdist(a, z, a * x0, a * x1);
      const std::string tag = ", trial " + std::to_string(trial);
      c.require(std::abs(v - oracle::l1_distance_vertices(z, x1 - x0)) <= 1e-4, "vertex search disagreement" + tag);
      // A grid point is feasible, so the grid can only overestimate the minimum.
      c.require(oracle::l1_distance_grid(z, x1 - x0) >= v - 1e-9, "grid point beats the LP" + tag);
    }
    Eigen::MatrixXd a(1, 2);
    a << 1, 1;
    Eigen::MatrixXd z(2, 1);
    z << 1, -1;
    Eigen::VectorXd y0(1), y1(1);
    y0 << 0;
    y1 << 1;
    c.require(qdist(a, z, y0, y1) == 1.0, "worked example != 1");
  });

  criterion(8, "factorization identities, 25 pairs x 100 samples", 0.0, [](Check& c) {
    std::mt19937_64 rng(29);
    int deficient = 0;
    for (int trial = 0; trial < 25; ++trial) {
      const Eigen::Index rows = 3 + trial % 5;
      const Eigen::Index cols = 2 + trial % 6;
      const Eigen::Index rank = 1 + trial % std::min(rows, cols);
      if (rank < std::min(rows, cols)) ++deficient;
      const Eigen::MatrixXd a = oracle::gaussian(rows, rank, rng) * oracle::gaussian(rank, cols, rng);
      const Eigen::MatrixXd u = oracle::gaussian(cols, rank, rng);
      const FactorizationReport r = factorization_check(a, u, 100, 1e-9, rng());
      c.require(r.passed && r.samples == 100, "identity residual above 1e-9, trial " + std::to_string(trial));
    }
    c.require(deficient > 0, "no rank-deficient operator in the suite");
  });

  criterion(9, "classifier truth table", 0.0, [](Check& c) {
    const std::map<std::string, Verdict> expected{{"Mazur B", Verdict::IllPosedTypeI},
                                                  {"adjoint B*", Verdict::WellPosed},
                                                  {"composite (B, C)", Verdict::IllPosedTypeI}};
    std::size_t seen = 0;
    for (const auto& e : operator_catalog()) {
      const auto it = expected.find(e.name);
      if (it == expected.end()) continue;
      ++seen;
      c.require(classify(e.flags) == it->second, e.name + " misclassified");
    }
    c.require(seen == expected.size(), "catalog entry missing");
  });

  criterion(10, "determinism over every CLI example config", 0.0, [](Check& c) {
    std::vector<fs::path> configs;
    for (const auto& e : fs::directory_iterator(HYBRIDOP_CONFIG_DIR)) {
      if (e.path().extension() == ".json") configs.push_back(e.path());
    }
    std::sort(configs.begin(), configs.end());
    c.require(!configs.empty(), "no configs found");
    const fs::path tmp = fs::temp_directory_path() / "hybridop_acceptance";
    for (const auto& config : configs) {
      int first_code = -1;
      int second_code = -1;
      const auto first = run_into(config, tmp / "a", first_code);
      const auto second = run_into(config, tmp / "b", second_code);
      const std::string name = config.filename().string();
      c.require(first_code == 0 && second_code == 0, name + " exited nonzero");
      c.require(!first.empty() && first == second, name + " artifacts differ between runs");
    }
    fs::remove_all(tmp);
  });

  return failures == 0 ? 0 : 1;
}
