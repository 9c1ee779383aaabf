#include "cli.hpp"

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <random>
#include <sstream>

#include <CLI11.hpp>
#include <openssl/evp.h>

#include "config.hpp"
#include "hybridop/io.hpp"
#include "hybridop/lp.hpp"

namespace hybridop::cli {

namespace fs = std::filesystem;

namespace {

struct Artifact {
  std::string name;
  std::string bytes;
};

using Artifacts = std::vector<Artifact>;

std::string dump(const Json& j) { return j.dump(2) + "\n"; }

template <class F>
std::string render(F&& write) {
  std::ostringstream os;
  write(os);
  return os.str();
}

Eigen::MatrixXd to_matrix(const std::vector<std::vector<double>>& rows) {
  Eigen::MatrixXd a(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(rows.front().size()));
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) a(i, j) = rows[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
  }
  return a;
}

Eigen::VectorXd to_vector(const std::vector<double>& v) {
  return Eigen::Map<const Eigen::VectorXd>(v.data(), static_cast<Eigen::Index>(v.size()));
}

Json matrix_json(const Eigen::MatrixXd& a) {
  Json rows = Json::array();
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    Json row = Json::array();
    for (Eigen::Index j = 0; j < a.cols(); ++j) row.push_back(a(i, j));
    rows.push_back(row);
  }
  return rows;
}

MazurOperator operator_for(const ExperimentConfig& cfg, std::size_t columns) {
  const std::size_t m = cfg.size("m");
  return m == 0 ? MazurOperator::covering(cfg.mode(), columns) : MazurOperator(cfg.mode(), columns, m);
}

RestrictedOperator restricted_for(const ExperimentConfig& cfg) {
  const RieszSelection sel = greedy_select(cfg.mode(), cfg.size("L"), cfg.size("budget"));
  const std::size_t cols = *std::max_element(sel.indices.begin(), sel.indices.end());
  return restrict_to(MazurOperator::covering(cfg.mode(), cols), sel);
}

std::size_t selection_rows(const RieszSelection& sel) {
  std::size_t rows = sel.levels();
  for (const auto& z : sel.atoms) rows = std::max(rows, z.direction().max_index());
  return rows;
}

Artifacts cmd_enumerate(const ExperimentConfig& cfg) {
  const auto prefix = enumerate_sphere(cfg.mode(), cfg.size("n"));
  if (cfg.text("format") == "csv") {
    return {{"enumeration.csv", render([&](std::ostream& os) { io::write_enumeration_csv(os, prefix); })}};
  }
  return {{"enumeration.json", dump(io::enumeration_json(prefix))}};
}

Artifacts cmd_build(const ExperimentConfig& cfg) {
  const MazurOperator b = operator_for(cfg, cfg.size("n"));
  const Eigen::MatrixXd section = b.finite_section();
  Artifacts out{{"descriptor.json", dump(io::descriptor_json(b))},
                {"section.bin", render([&](std::ostream& os) { io::write_matrix_binary(os, section); })}};
  if (cfg.text("format") == "csv") {
    out.push_back({"section.csv", render([&](std::ostream& os) { io::write_matrix_csv(os, section); })});
  } else {
    out.push_back({"section.json", dump(matrix_json(section))});
  }
  return out;
}

Artifacts cmd_select(const ExperimentConfig& cfg) {
  const RieszSelection sel = greedy_select(cfg.mode(), cfg.size("L"), cfg.size("budget"));
  const Eigen::MatrixXd t = build_T(sel, selection_rows(sel));
  Artifacts out{{"selection.json", dump(io::selection_json(sel))},
                {"t_section.bin", render([&](std::ostream& os) { io::write_matrix_binary(os, t); })}};
  if (cfg.text("format") == "csv") {
    out.push_back({"selection.csv", render([&](std::ostream& os) {
                     os << "level,index,defect\n";
                     for (std::size_t l = 0; l < sel.levels(); ++l) {
                       os << l + 1 << ',' << sel.indices[l] << ',' << io::format_double(sel.defects[l]) << '\n';
                     }
                   })});
  }
  return out;
}

Artifacts cmd_tikhonov(const ExperimentConfig& cfg) {
  const RestrictedOperator op = restricted_for(cfg);
  const RealSeq truth = sparse_truth(op, cfg.size("atoms"), cfg.seed());
  const Eigen::VectorXd x_true = op.coefficients(truth);
  const double delta = cfg.real("delta");
  TikhonovProblem p{op.matrix(), op.matrix() * x_true + delta * noise_direction(op.rows(), cfg.seed()),
                    cfg.real("alpha")};
  const RegularizationResult r = tikhonov_solve(p);
  Json report{{"delta", delta},
              {"alpha", p.alpha},
              {"objective", r.objective},
              {"subgradient_residual", r.subgradient_residual},
              {"iterations", r.iterations},
              {"converged", r.converged},
              {"error_l1", (r.x - x_true).lpNorm<1>()},
              {"residual", (p.op * r.x - p.data).norm()},
              {"truth", io::sequence_json(truth)},
              {"solution", io::sequence_json(op.embed(r.x))}};
  return {{"tikhonov.json", dump(report)}};
}

Artifacts cmd_study(const ExperimentConfig& cfg) {
  const RestrictedOperator op = restricted_for(cfg);
  const RealSeq truth = sparse_truth(op, cfg.size("atoms"), cfg.seed());
  const ParameterRule rule = cfg.text("rule") == "apriori" ? ParameterRule::apriori(cfg.real("c"))
                                                           : ParameterRule::discrepancy(cfg.real("tau"));
  const NoiseStudy study = noise_convergence_study(op, truth, cfg.reals("deltas"), rule, cfg.seed());
  if (cfg.text("format") == "csv") {
    return {{"study.csv", render([&](std::ostream& os) { io::write_study_csv(os, study); })}};
  }
  return {{"study.json", dump(io::study_json(study))}};
}

Artifacts cmd_probe(const ExperimentConfig& cfg) {
  const auto grid = cfg.sizes("n_grid");
  const MazurOperator b = operator_for(cfg, grid.back());
  const std::size_t rows = cfg.size("data_rows");
  if (rows > b.rows()) throw Error(ErrorCode::OutOfFrame, "data rows exceed the row frame of the operator");
  const RealSeq y = to_sparse(noise_direction(rows, cfg.seed()));
  const ProbeReport report = full_space_failure_probe(b, y, grid, cfg.real("alpha"));
  if (cfg.text("format") == "csv") {
    return {{"probe.csv", render([&](std::ostream& os) { io::write_probe_csv(os, report); })}};
  }
  return {{"probe.json", dump(io::probe_json(report))}};
}

Artifacts cmd_certify(const ExperimentConfig& cfg) {
  const auto support = cfg.sizes("support");
  const auto signs = cfg.ints("signs");
  const std::size_t k = cfg.size("n");
  const MazurOperator b = MazurOperator::covering(cfg.mode(), k);
  const CertificateOutcome c = minnorm_certificate(b, support[0], support[1], signs[0], signs[1], k);
  return {{"certificate.json", dump(io::certificate_json(c))}};
}

Artifacts cmd_rank(const ExperimentConfig& cfg) {
  const auto grid = cfg.sizes("n_grid");
  const MazurOperator b = operator_for(cfg, grid.back());
  std::vector<std::size_t> ranks;
  for (std::size_t n : grid) ranks.push_back(numerical_rank(b.finite_section(n)));
  if (cfg.text("format") == "csv") {
    return {{"rank.csv", render([&](std::ostream& os) {
               os << "n,m,rank\n";
               for (std::size_t i = 0; i < grid.size(); ++i) os << grid[i] << ',' << b.rows() << ',' << ranks[i] << '\n';
             })}};
  }
  Json rows = Json::array();
  for (std::size_t i = 0; i < grid.size(); ++i) rows.push_back(Json{{"n", grid[i]}, {"m", b.rows()}, {"rank", ranks[i]}});
  return {{"rank.json", dump(rows)}};
}

Eigen::MatrixXd nullspace_of(const Eigen::MatrixXd& a) {
  const auto r = static_cast<Eigen::Index>(numerical_rank(a));
  Eigen::BDCSVD<Eigen::MatrixXd> svd(a, Eigen::ComputeFullV);
  return svd.matrixV().rightCols(a.cols() - r);
}

Artifacts cmd_qdist(const ExperimentConfig& cfg) {
  const Eigen::MatrixXd a = to_matrix(cfg.matrix("A"));
  const Eigen::MatrixXd z = cfg.is_null("Z") ? nullspace_of(a) : to_matrix(cfg.matrix("Z"));
  const Eigen::VectorXd y = to_vector(cfg.reals("y"));
  const Eigen::VectorXd y_prime = to_vector(cfg.reals("y_prime"));
  const double forward = qdist(a, z, y, y_prime);
  const double backward = qdist(a, z, y_prime, y);
  Artifacts out{{"qdist.json", dump(Json{{"qdist", forward}, {"qdist_reverse", backward}, {"nullity", z.cols()}})}};
  if (cfg.flag("dump_lp")) {
    const Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXd> cod(a);
    const Eigen::VectorXd shift = cod.solve(y_prime) - cod.solve(y);
    out.push_back({"qdist.lp", render([&](std::ostream& os) { write_lp_text(qdist_program(z, shift), os); })});
  }
  return out;
}

Artifacts cmd_classify(const ExperimentConfig& cfg) {
  const auto catalog = operator_catalog();
  if (cfg.text("format") == "csv") {
    return {{"classification.csv", render([&](std::ostream& os) {
               os << "name,closed_range,complemented_nullspace,range_contains_infdim_closed_subspace,"
                     "strictly_singular,compact,verdict,hybrid,expected\n";
               for (const auto& e : catalog) {
                 os << '"' << e.name << "\"," << to_string(e.flags.closed_range.value) << ','
                    << to_string(e.flags.complemented_nullspace.value) << ','
                    << to_string(e.flags.range_contains_infdim_closed_subspace.value) << ','
                    << to_string(e.flags.strictly_singular.value) << ',' << to_string(e.flags.compact.value) << ','
                    << to_string(classify(e.flags)) << ',' << to_string(is_hybrid(e.flags)) << ','
                    << to_string(e.expected) << '\n';
               }
             })}};
  }
  return {{"classification.json", dump(io::classification_json(catalog))}};
}

Eigen::MatrixXd gaussian(Eigen::Index rows, Eigen::Index cols, std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  Eigen::MatrixXd a(rows, cols);
  for (Eigen::Index i = 0; i < rows; ++i) {
    for (Eigen::Index j = 0; j < cols; ++j) a(i, j) = g(rng);
  }
  return a;
}

Artifacts cmd_factor(const ExperimentConfig& cfg) {
  const auto rows = static_cast<Eigen::Index>(cfg.size("rows"));
  const auto cols = static_cast<Eigen::Index>(cfg.size("cols"));
  const auto rank = static_cast<Eigen::Index>(cfg.size("rank"));
  std::mt19937_64 rng(cfg.seed());
  std::vector<FactorizationReport> reports;
  for (std::size_t p = 0; p < cfg.size("pairs"); ++p) {
    const Eigen::MatrixXd a = gaussian(rows, rank, rng) * gaussian(rank, cols, rng);
    const Eigen::MatrixXd u = gaussian(cols, rank, rng);
    reports.push_back(factorization_check(a, u, cfg.size("samples"), cfg.real("tol"), rng()));
  }
  if (cfg.text("format") == "csv") {
    return {{"factor.csv", render([&](std::ostream& os) {
               os << "pair,tilde_inverse_residual,q_pinv_residual,sigma_min_a_tilde,sigma_min_q_on_u,passed\n";
               for (std::size_t i = 0; i < reports.size(); ++i) {
                 const auto& r = reports[i];
                 os << i + 1 << ',' << io::format_double(r.tilde_inverse_residual) << ','
                    << io::format_double(r.q_pinv_residual) << ',' << io::format_double(r.sigma_min_a_tilde) << ','
                    << io::format_double(r.sigma_min_q_on_u) << ',' << (r.passed ? "true" : "false") << '\n';
               }
             })}};
  }
  Json out = Json::array();
  for (const auto& r : reports) out.push_back(io::factorization_json(r));
  return {{"factor.json", dump(out)}};
}

Artifacts dispatch(const ExperimentConfig& cfg) {
  const std::string& c = cfg.command();
  if (c == "enumerate") return cmd_enumerate(cfg);
  if (c == "build") return cmd_build(cfg);
  if (c == "select") return cmd_select(cfg);
  if (c == "tikhonov") return cmd_tikhonov(cfg);
  if (c == "study") return cmd_study(cfg);
  if (c == "probe") return cmd_probe(cfg);
  if (c == "certify") return cmd_certify(cfg);
  if (c == "rank") return cmd_rank(cfg);
  if (c == "qdist") return cmd_qdist(cfg);
  if (c == "classify") return cmd_classify(cfg);
  return cmd_factor(cfg);
}

void write_atomic(const fs::path& target, const std::string& bytes) {
  fs::path tmp = target;
  tmp += ".tmp";
  {
    std::ofstream os(tmp, std::ios::binary | std::ios::trunc);
    os.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
    if (!os) throw std::runtime_error("cannot write " + tmp.string());
  }
  fs::rename(tmp, target);
}

// All artifacts are computed before anything touches the disk; on a write
// failure the files already renamed into place are removed again.
void publish(const fs::path& dir, const ExperimentConfig& cfg, Artifacts artifacts) {
  Json listing = Json::array();
  for (const auto& a : artifacts) {
    listing.push_back(Json{{"file", a.name}, {"bytes", a.bytes.size()}, {"sha256", sha256_hex(a.bytes)}});
  }
  artifacts.push_back({"manifest.json", dump(Json{{"config", cfg.echo()}, {"artifacts", listing}})});
  std::vector<fs::path> written;
  try {
    fs::create_directories(dir);
    for (const auto& a : artifacts) {
      write_atomic(dir / a.name, a.bytes);
      written.push_back(dir / a.name);
    }
  } catch (...) {
    std::error_code ec;
    for (const auto& p : written) fs::remove(p, ec);
    for (const auto& a : artifacts) fs::remove(fs::path(dir / a.name) += ".tmp", ec);
    throw;
  }
}

bool numerical(ErrorCode code) {
  return code == ErrorCode::NumericalFailure || code == ErrorCode::NotFoundWithinBudget ||
         code == ErrorCode::IndeterminateClassification;
}

}  // namespace

std::string sha256_hex(const std::string& bytes) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(bytes.data(), bytes.size(), digest, &len, EVP_sha256(), nullptr) != 1) {
    throw std::runtime_error("SHA-256 failed");
  }
  std::ostringstream os;
  for (unsigned int i = 0; i < len; ++i) os << std::hex << std::setw(2) << std::setfill('0') << static_cast<int>(digest[i]);
  return os.str();
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Finite-section experiments for Mazur-type operators", "hybridop"};
  std::string command;
  std::optional<std::string> config_path;
  std::optional<std::string> out_dir;
  FlagOverrides flags;
  std::string list;
  for (const auto& c : ExperimentConfig::commands()) list += (list.empty() ? "" : ", ") + c;
  app.add_option("command", command, "Subcommand: " + list)->required();
  app.add_option("--config", config_path, "JSON config file");
  app.add_option("--mode", flags.mode, "canonical | no-singleton | adversarial-prefix:N");
  app.add_option("--n", flags.n, "Column budget (prefix length, constraint count)");
  app.add_option("--m", flags.m, "Row truncation (0 covers every column)");
  app.add_option("--L", flags.L, "Selection depth");
  app.add_option("--seed", flags.seed, "Random seed");
  app.add_option("--out", out_dir, std::string("Output directory (default $") + kOutEnv + " or ./out)");
  app.add_option("--format", flags.format, "csv | json");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kExitConfig;
  }

  fs::path dir = "out";
  if (out_dir) {
    dir = *out_dir;
  } else if (const char* env = std::getenv(kOutEnv); env && *env) {
    dir = env;
  }

  try {
    const ExperimentConfig cfg = ExperimentConfig::resolve(command, config_path, flags);
    publish(dir, cfg, dispatch(cfg));
    out << "wrote " << (dir / "manifest.json").string() << "\n";
    return kExitOk;
  } catch (const ConfigError& e) {
    err << e.what() << "\n";
    return kExitConfig;
  } catch (const Error& e) {
    err << (config_path ? *config_path : std::string("<flags>")) << ": " << to_string(e.code()) << ": " << e.what()
        << "\n";
    return numerical(e.code()) ? kExitNumerical : kExitConfig;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitNumerical;
  }
}

}  // namespace hybridop::cli
