#include "hybridop/seqspace.hpp"

#include <algorithm>
#include <cmath>

namespace hybridop {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::ZeroVector: return "ZeroVector";
    case ErrorCode::NotUnit: return "NotUnit";
    case ErrorCode::OutOfFrame: return "OutOfFrame";
    case ErrorCode::NotFoundWithinBudget: return "NotFoundWithinBudget";
    case ErrorCode::BadParameter: return "BadParameter";
    case ErrorCode::BadData: return "BadData";
    case ErrorCode::BadSupport: return "BadSupport";
    case ErrorCode::NotInRange: return "NotInRange";
    case ErrorCode::BadDimensions: return "BadDimensions";
    case ErrorCode::IndeterminateClassification: return "IndeterminateClassification";
    case ErrorCode::NotAComplement: return "NotAComplement";
    case ErrorCode::NumericalFailure: return "NumericalFailure";
  }
  return "Unknown";
}

double norm(const FinSeq& v, NormKind kind) {
  switch (kind) {
    case NormKind::L1: {
      Rational s = 0;
      for (const auto& [i, x] : v) s += abs(x);
      return s.convert_to<double>();
    }
    case NormKind::L2: {
      Rational s = 0;
      for (const auto& [i, x] : v) s += x * x;
      return std::sqrt(s.convert_to<double>());
    }
    case NormKind::LInf: {
      Rational s = 0;
      for (const auto& [i, x] : v) s = std::max<Rational>(s, abs(x));
      return s.convert_to<double>();
    }
  }
  return 0.0;
}

double norm(const RealSeq& v, NormKind kind) {
  double s = 0.0;
  switch (kind) {
    case NormKind::L1:
      for (const auto& [i, x] : v) s += std::abs(x);
      return s;
    case NormKind::L2:
      for (const auto& [i, x] : v) s += x * x;
      return std::sqrt(s);
    case NormKind::LInf:
      for (const auto& [i, x] : v) s = std::max(s, std::abs(x));
      return s;
  }
  return s;
}

RealSeq to_real(const FinSeq& v) {
  RealSeq out;
  for (const auto& [i, x] : v) out.set(i, x.convert_to<double>());
  return out;
}

double dot(const RealSeq& a, const RealSeq& b) {
  const RealSeq& small = a.nnz() <= b.nnz() ? a : b;
  const RealSeq& large = a.nnz() <= b.nnz() ? b : a;
  double s = 0.0;
  for (const auto& [i, x] : small) s += x * large.get(i);
  return s;
}

RealSeq subtract(const RealSeq& a, const RealSeq& b) {
  RealSeq out = a;
  for (const auto& [i, x] : b) out.set(i, out.get(i) - x);
  return out;
}

FinSeq canonical_primitive(const FinSeq& v) {
  if (v.empty()) throw Error(ErrorCode::ZeroVector, "cannot normalize the zero sequence");
  Integer scale = 1;
  for (const auto& [i, x] : v) {
    scale = boost::multiprecision::lcm(scale, Integer(denominator(x)));
  }
  Integer g = 0;
  for (const auto& [i, x] : v) {
    Integer n = numerator(x) * (scale / denominator(x));
    g = boost::multiprecision::gcd(g, n);
  }
  g = abs(g);
  FinSeq out;
  for (const auto& [i, x] : v) {
    Integer n = numerator(x) * (scale / denominator(x));
    out.set(i, Rational(n / g));
  }
  return out;
}

std::string to_string(const EnumerationMode& mode) {
  switch (mode.kind) {
    case EnumerationMode::Kind::Canonical: return "canonical";
    case EnumerationMode::Kind::NoSingleton: return "no-singleton";
    case EnumerationMode::Kind::AdversarialPrefix: return "adversarial-prefix:" + std::to_string(mode.prefix);
  }
  return "canonical";
}

EnumerationMode parse_mode(const std::string& text) {
  if (text == "canonical") return EnumerationMode::canonical();
  if (text == "no-singleton") return EnumerationMode::no_singleton();
  const std::string prefix = "adversarial-prefix:";
  if (text.rfind(prefix, 0) == 0) {
    const std::string count = text.substr(prefix.size());
    if (!count.empty() && std::all_of(count.begin(), count.end(), [](char c) { return c >= '0' && c <= '9'; })) {
      return EnumerationMode::adversarial_prefix(std::stoull(count));
    }
  }
  throw Error(ErrorCode::BadParameter, "unknown enumeration mode '" + text + "'");
}

}  // namespace hybridop
