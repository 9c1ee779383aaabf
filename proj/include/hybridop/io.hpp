#pragma once

// Serialization of experiment artifacts. CSV writers emit doubles with
// 17 significant digits so that outputs round-trip and compare bytewise.

#include <iosfwd>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <json.hpp>

#include "hybridop/certify.hpp"
#include "hybridop/mazur.hpp"
#include "hybridop/regsolve.hpp"
#include "hybridop/riesz.hpp"

namespace hybridop::io {

using Json = nlohmann::ordered_json;

std::string format_double(double v);

/// One row per stored coordinate: index, coordinate, numerator, denominator.
void write_enumeration_csv(std::ostream& os, const std::vector<SphereVector>& prefix);
Json enumeration_json(const std::vector<SphereVector>& prefix);

/// Header (uint64 m, uint64 n) then m*n row-major float64, little-endian.
void write_matrix_binary(std::ostream& os, const Eigen::MatrixXd& a);
Eigen::MatrixXd read_matrix_binary(std::istream& is);
void write_matrix_csv(std::ostream& os, const Eigen::MatrixXd& a);

Json descriptor_json(const MazurOperator& b);
Json selection_json(const RieszSelection& sel);
Json sequence_json(const RealSeq& v);

void write_study_csv(std::ostream& os, const NoiseStudy& study);
Json study_json(const NoiseStudy& study);

void write_probe_csv(std::ostream& os, const ProbeReport& report);
Json probe_json(const ProbeReport& report);

Json certificate_json(const CertificateOutcome& c);
Json classification_json(const std::vector<CatalogEntry>& catalog);
Json factorization_json(const FactorizationReport& r);

}  // namespace hybridop::io
