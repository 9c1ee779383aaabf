#pragma once

// Finitely supported sequences, their norms, and the dense enumeration of
// the unit sphere of l2 by primitive integer directions.

#include <cstddef>
#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "hybridop/error.hpp"

namespace hybridop {

using Integer = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

/// Sparse sequence indexed by 1-based coordinates. Zero values are never
/// stored, so support() is exactly the set of nonzero coordinates.
template <class T>
class SparseSeq {
 public:
  using Map = std::map<std::size_t, T>;
  using const_iterator = typename Map::const_iterator;

  SparseSeq() = default;
  SparseSeq(std::initializer_list<std::pair<const std::size_t, T>> init) {
    for (const auto& [i, v] : init) set(i, v);
  }

  void set(std::size_t index, const T& value) {
    if (index == 0) throw Error(ErrorCode::OutOfFrame, "coordinate indices are 1-based");
    if (value == T(0)) {
      entries_.erase(index);
    } else {
      entries_[index] = value;
    }
  }

  T get(std::size_t index) const {
    auto it = entries_.find(index);
    return it == entries_.end() ? T(0) : it->second;
  }

  bool empty() const { return entries_.empty(); }
  std::size_t nnz() const { return entries_.size(); }
  std::size_t max_index() const { return entries_.empty() ? 0 : entries_.rbegin()->first; }

  std::vector<std::size_t> support() const {
    std::vector<std::size_t> s;
    s.reserve(entries_.size());
    for (const auto& kv : entries_) s.push_back(kv.first);
    return s;
  }

  const_iterator begin() const { return entries_.begin(); }
  const_iterator end() const { return entries_.end(); }

  friend bool operator==(const SparseSeq& a, const SparseSeq& b) { return a.entries_ == b.entries_; }

 private:
  Map entries_;
};

using FinSeq = SparseSeq<Rational>;
using RealSeq = SparseSeq<double>;

enum class NormKind { L1, L2, LInf };

double norm(const FinSeq& v, NormKind kind);
double norm(const RealSeq& v, NormKind kind);

RealSeq to_real(const FinSeq& v);
double dot(const RealSeq& a, const RealSeq& b);
/// a - b
RealSeq subtract(const RealSeq& a, const RealSeq& b);

/// The unique primitive integer vector (gcd 1) that is a positive multiple
/// of v. Throws ZeroVector on the empty sequence.
FinSeq canonical_primitive(const FinSeq& v);

// ---------------------------------------------------------------------------
// Sphere enumeration

struct EnumerationMode {
  enum class Kind { Canonical, NoSingleton, AdversarialPrefix };
  Kind kind = Kind::Canonical;
  std::size_t prefix = 0;  // only meaningful for AdversarialPrefix

  static EnumerationMode canonical() { return {Kind::Canonical, 0}; }
  static EnumerationMode no_singleton() { return {Kind::NoSingleton, 0}; }
  static EnumerationMode adversarial_prefix(std::size_t n) { return {Kind::AdversarialPrefix, n}; }

  friend bool operator==(const EnumerationMode&, const EnumerationMode&) = default;
};

/// "canonical", "no-singleton", "adversarial-prefix:N"
std::string to_string(const EnumerationMode& mode);
EnumerationMode parse_mode(const std::string& text);

/// One enumerated point of the unit sphere: an exact primitive integer
/// direction plus its normalized floating-point image.
class SphereVector {
 public:
  SphereVector(std::size_t index, FinSeq direction);

  std::size_t index() const { return index_; }
  const FinSeq& direction() const { return direction_; }
  const RealSeq& unit() const { return unit_; }

 private:
  std::size_t index_;
  FinSeq direction_;
  RealSeq unit_;
};

/// Cost per unit of the largest support index in the enumeration order.
inline constexpr std::int64_t kIndexWeight = 2;
/// Extra cost per nonzero entry in the enumeration order. Large enough that
/// nearly-axis-aligned two-atom directions come long before dense ones.
inline constexpr std::int64_t kAtomWeight = 96;

/// Streams the enumeration (zeta^(k)) one vector at a time. The order is a
/// pure function of the mode; see enumeration.cpp for the total order used.
class SphereEnumerator {
 public:
  explicit SphereEnumerator(EnumerationMode mode);
  ~SphereEnumerator();
  SphereEnumerator(SphereEnumerator&&) noexcept;
  SphereEnumerator& operator=(SphereEnumerator&&) noexcept;

  /// The next vector; its index() is one more than the previous call's.
  SphereVector next();
  std::size_t produced() const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

std::vector<SphereVector> enumerate_sphere(EnumerationMode mode, std::size_t count);

struct DensityWitness {
  std::size_t index;
  double defect;
};

/// Smallest k in [first, budget] with ||target - zeta^(k)||_2 <= eps, or
/// nullopt when the window is exhausted. Passing first = budget + 1 of an
/// earlier call resumes the search.
std::optional<DensityWitness> density_witness(const RealSeq& target, double eps, EnumerationMode mode,
                                              std::size_t budget, std::size_t first = 1);

}  // namespace hybridop
