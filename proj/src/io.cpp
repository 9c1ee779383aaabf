#include "hybridop/io.hpp"

#include <bit>
#include <cstdint>
#include <cstdio>
#include <istream>
#include <ostream>

namespace hybridop::io {

namespace {

static_assert(std::endian::native == std::endian::little, "binary layout assumes a little-endian host");

void put_u64(std::ostream& os, std::uint64_t v) { os.write(reinterpret_cast<const char*>(&v), sizeof v); }

std::uint64_t get_u64(std::istream& is) {
  std::uint64_t v = 0;
  if (!is.read(reinterpret_cast<char*>(&v), sizeof v)) throw Error(ErrorCode::BadData, "truncated matrix header");
  return v;
}

Json tri_flag(const Flag& f) { return Json{{"value", to_string(f.value)}, {"provenance", f.provenance}}; }

}  // namespace

std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void write_enumeration_csv(std::ostream& os, const std::vector<SphereVector>& prefix) {
  os << "index,coordinate,numerator,denominator\n";
  for (const auto& z : prefix) {
    Rational len2 = 0;
    for (const auto& [i, v] : z.direction()) len2 += v * v;
    // The stored direction p is primitive, so the unit entry is p_i / sqrt(||p||^2).
    for (const auto& [i, v] : z.direction()) os << z.index() << ',' << i << ',' << v.str() << ',' << len2.str() << '\n';
  }
}

Json enumeration_json(const std::vector<SphereVector>& prefix) {
  Json out = Json::array();
  for (const auto& z : prefix) {
    Json dir = Json::array();
    for (const auto& [i, v] : z.direction()) dir.push_back(Json{{"coordinate", i}, {"value", v.str()}});
    Json unit = Json::array();
    for (const auto& [i, v] : z.unit()) unit.push_back(Json{{"coordinate", i}, {"value", v}});
    out.push_back(Json{{"index", z.index()}, {"direction", dir}, {"unit", unit}});
  }
  return out;
}

void write_matrix_binary(std::ostream& os, const Eigen::MatrixXd& a) {
  put_u64(os, static_cast<std::uint64_t>(a.rows()));
  put_u64(os, static_cast<std::uint64_t>(a.cols()));
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      const double v = a(i, j);
      os.write(reinterpret_cast<const char*>(&v), sizeof v);
    }
  }
}

Eigen::MatrixXd read_matrix_binary(std::istream& is) {
  const std::uint64_t m = get_u64(is);
  const std::uint64_t n = get_u64(is);
  Eigen::MatrixXd a(static_cast<Eigen::Index>(m), static_cast<Eigen::Index>(n));
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      double v = 0.0;
      if (!is.read(reinterpret_cast<char*>(&v), sizeof v)) throw Error(ErrorCode::BadData, "truncated matrix body");
      a(i, j) = v;
    }
  }
  return a;
}

void write_matrix_csv(std::ostream& os, const Eigen::MatrixXd& a) {
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      if (j) os << ',';
      os << format_double(a(i, j));
    }
    os << '\n';
  }
}

Json descriptor_json(const MazurOperator& b) {
  return Json{{"mode", to_string(b.mode())},
              {"n", b.cols()},
              {"m", b.rows()},
              {"max_truncation_defect", b.max_truncation_defect()}};
}

Json selection_json(const RieszSelection& sel) {
  return Json{{"mode", to_string(sel.mode)},          {"levels", sel.levels()},
              {"indices", sel.indices},               {"defects", sel.defects},
              {"lambda_bound", sel.lambda_bound},     {"lambda_data", sel.lambda_data},
              {"lambda_limit", lambda_bound_limit()}};
}

Json sequence_json(const RealSeq& v) {
  Json out = Json::array();
  for (const auto& [i, x] : v) out.push_back(Json{{"coordinate", i}, {"value", x}});
  return out;
}

void write_study_csv(std::ostream& os, const NoiseStudy& study) {
  os << "delta,alpha,error_l1,residual,iterations\n";
  for (const auto& r : study.rows) {
    os << format_double(r.delta) << ',' << format_double(r.alpha) << ',' << format_double(r.error_l1) << ','
       << format_double(r.residual) << ',' << r.iterations << '\n';
  }
}

Json study_json(const NoiseStudy& study) {
  Json rows = Json::array();
  for (const auto& r : study.rows) {
    rows.push_back(Json{{"delta", r.delta},
                        {"alpha", r.alpha},
                        {"error_l1", r.error_l1},
                        {"residual", r.residual},
                        {"iterations", r.iterations},
                        {"converged", r.converged}});
  }
  return Json{{"truth", sequence_json(study.truth)},
              {"rows", rows},
              {"trend", study.trend},
              {"strictly_decreasing", study.strictly_decreasing()}};
}

void write_probe_csv(std::ostream& os, const ProbeReport& report) {
  os << "n,l1_norm,objective,residual,iterations\n";
  for (const auto& r : report.rows) {
    os << r.n << ',' << format_double(r.l1_norm) << ',' << format_double(r.objective) << ','
       << format_double(r.residual) << ',' << r.iterations << '\n';
  }
}

Json probe_json(const ProbeReport& report) {
  Json rows = Json::array();
  for (const auto& r : report.rows) {
    rows.push_back(Json{{"n", r.n},
                        {"l1_norm", r.l1_norm},
                        {"objective", r.objective},
                        {"residual", r.residual},
                        {"iterations", r.iterations},
                        {"converged", r.converged}});
  }
  return Json{{"rows", rows},
              {"objective_nonincreasing", report.objective_nonincreasing},
              {"norm_growth", report.norm_growth},
              {"note", "finite-section symptom only"}};
}

Json certificate_json(const CertificateOutcome& c) {
  Json out{{"verdict", c.feasible() ? "feasible" : "infeasible"},
           {"constraints", c.constraints},
           {"margin", c.margin},
           {"proof_constant", c.proof_constant}};
  if (c.feasible()) {
    out["eta"] = sequence_json(c.eta);
    out["eta_pairing"] = c.eta_pairing;
  } else {
    out["infeasible_at"] = c.infeasible_at;
  }
  return out;
}

Json classification_json(const std::vector<CatalogEntry>& catalog) {
  Json out = Json::array();
  for (const auto& e : catalog) {
    out.push_back(Json{{"name", e.name},
                       {"closed_range", tri_flag(e.flags.closed_range)},
                       {"complemented_nullspace", tri_flag(e.flags.complemented_nullspace)},
                       {"range_contains_infdim_closed_subspace",
                        tri_flag(e.flags.range_contains_infdim_closed_subspace)},
                       {"strictly_singular", tri_flag(e.flags.strictly_singular)},
                       {"compact", tri_flag(e.flags.compact)},
                       {"verdict", to_string(classify(e.flags))},
                       {"hybrid", to_string(is_hybrid(e.flags))},
                       {"expected", to_string(e.expected)}});
  }
  return out;
}

Json factorization_json(const FactorizationReport& r) {
  return Json{{"samples", r.samples},
              {"tilde_inverse_residual", r.tilde_inverse_residual},
              {"q_pinv_residual", r.q_pinv_residual},
              {"sigma_min_a_tilde", r.sigma_min_a_tilde},
              {"sigma_min_q_on_u", r.sigma_min_q_on_u},
              {"passed", r.passed}};
}

}  // namespace hybridop::io
