#include "hybridop/certify.hpp"

namespace hybridop {

std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::WellPosed: return "well-posed";
    case Verdict::IllPosedTypeI: return "ill-posed type I";
    case Verdict::IllPosedTypeII: return "ill-posed type II";
  }
  return "unknown";
}

std::string to_string(Tri t) {
  switch (t) {
    case Tri::True: return "true";
    case Tri::False: return "false";
    case Tri::Unknown: return "unknown";
  }
  return "unknown";
}

Verdict classify(const ClassificationFlags& flags) {
  const Tri closed = flags.closed_range.value;
  const Tri complemented = flags.complemented_nullspace.value;
  if (closed == Tri::True && complemented == Tri::True) return Verdict::WellPosed;
  // Ill-posedness is settled as soon as one of the two conditions fails.
  if (closed != Tri::False && complemented != Tri::False) {
    throw Error(ErrorCode::IndeterminateClassification, "closed range / complemented null-space undetermined");
  }
  switch (flags.range_contains_infdim_closed_subspace.value) {
    case Tri::True: return Verdict::IllPosedTypeI;
    case Tri::False: return Verdict::IllPosedTypeII;
    case Tri::Unknown: break;
  }
  throw Error(ErrorCode::IndeterminateClassification, "infinite-dimensional closed subspace in the range undetermined");
}

Tri is_hybrid(const ClassificationFlags& flags) {
  const Tri ss = flags.strictly_singular.value;
  const Tri sub = flags.range_contains_infdim_closed_subspace.value;
  if (ss == Tri::False || sub == Tri::False) return Tri::False;
  if (ss == Tri::True && sub == Tri::True) return Tri::True;
  return Tri::Unknown;
}

std::vector<CatalogEntry> operator_catalog() {
  std::vector<CatalogEntry> out;

  CatalogEntry b;
  b.name = "Mazur B";
  b.flags.closed_range = {Tri::True, "surjective from l1 onto l2 (Banach-Mazur construction)"};
  b.flags.complemented_nullspace = {Tri::False, "hybrid-type operators have uncomplemented null-spaces"};
  b.flags.range_contains_infdim_closed_subspace = {Tri::True, "range is all of l2"};
  b.flags.strictly_singular = {Tri::True, "l1 onto a reflexive space (Goldberg-Thorp)"};
  b.flags.compact = {Tri::False, "hybrid-type operators are never compact"};
  b.expected = Verdict::IllPosedTypeI;
  out.push_back(b);

  CatalogEntry adj;
  adj.name = "adjoint B*";
  adj.flags.closed_range = {Tri::True, "closed range theorem: R(B*) = N(B)^perp"};
  adj.flags.complemented_nullspace = {Tri::True, "B* is injective, N(B*) = {0}"};
  adj.flags.range_contains_infdim_closed_subspace = {Tri::True, "R(B*) is closed and infinite-dimensional"};
  adj.flags.strictly_singular = {Tri::False, "isomorphism from l2 onto R(B*)"};
  adj.flags.compact = {Tri::False, "isomorphism onto an infinite-dimensional range"};
  adj.expected = Verdict::WellPosed;
  out.push_back(adj);

  CatalogEntry comp;
  comp.name = "composite (B, C)";
  comp.flags.closed_range = {Tri::False, "R(A) = l2 x R(C) is dense and not closed"};
  comp.flags.complemented_nullspace = {Tri::False, "N(A) = N(B) x {0} is uncomplemented"};
  comp.flags.range_contains_infdim_closed_subspace = {Tri::True, "contains l2 x {0}"};
  comp.flags.strictly_singular = {Tri::True, "both blocks strictly singular"};
  comp.flags.compact = {Tri::False, "hybrid-type"};
  comp.expected = Verdict::IllPosedTypeI;
  out.push_back(comp);

  CatalogEntry k;
  k.name = "compact, infinite-dimensional range";
  k.flags.closed_range = {Tri::False, "compact with infinite-dimensional range"};
  k.flags.complemented_nullspace = {Tri::Unknown, "not needed for the verdict"};
  k.flags.range_contains_infdim_closed_subspace = {Tri::False, "compact operators have no such subspace in the range"};
  k.flags.strictly_singular = {Tri::True, "compact operators are strictly singular"};
  k.flags.compact = {Tri::True, "by assumption"};
  k.expected = Verdict::IllPosedTypeII;
  out.push_back(k);

  return out;
}

}  // namespace hybridop
