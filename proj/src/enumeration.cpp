#include <algorithm>
#include <cmath>
#include <deque>
#include <numeric>
#include <set>

#include "hybridop/seqspace.hpp"

// Total order on primitive integer directions v:
//
//   cost(v) = kIndexWeight * n + sum_i |v_i| + kAtomWeight * s
//
// with n the largest support index and s the support size; ties are broken
// by n, then sum |v_i|, then lexicographically on the dense tuple
// (v_1, ..., v_n) under the coordinate key 0 < 1 < -1 < 2 < -2 < ...
// Every cost level is finite, so each rational direction receives a finite
// index, and the sequence is dense in the sphere of every coordinate
// subspace.

namespace hybridop {

namespace {

using IntVec = std::vector<std::pair<std::size_t, std::int64_t>>;

std::int64_t coordinate_key(std::int64_t v) {
  if (v == 0) return 0;
  return v > 0 ? 2 * v - 1 : -2 * v;
}

// All compositions of total into exactly parts positive integers.
void compositions(std::int64_t total, std::size_t parts, std::vector<std::int64_t>& cur,
                  std::vector<std::vector<std::int64_t>>& out) {
  if (parts == 1) {
    cur.push_back(total);
    out.push_back(cur);
    cur.pop_back();
    return;
  }
  for (std::int64_t first = 1; first <= total - static_cast<std::int64_t>(parts) + 1; ++first) {
    cur.push_back(first);
    compositions(total - first, parts - 1, cur, out);
    cur.pop_back();
  }
}

void combinations(std::size_t pool, std::size_t pick, std::size_t start, std::vector<std::size_t>& cur,
                  std::vector<std::vector<std::size_t>>& out) {
  if (cur.size() == pick) {
    out.push_back(cur);
    return;
  }
  for (std::size_t i = start; i <= pool; ++i) {
    cur.push_back(i);
    combinations(pool, pick, i + 1, cur, out);
    cur.pop_back();
  }
}

// Every primitive vector with largest index n, s nonzeros and l1 mass S,
// sorted by the coordinate key.
std::vector<IntVec> bucket(std::size_t n, std::size_t s, std::int64_t mass) {
  std::vector<std::vector<std::size_t>> positions;
  std::vector<std::size_t> pcur;
  combinations(n - 1, s - 1, 1, pcur, positions);
  std::vector<std::vector<std::int64_t>> mags;
  std::vector<std::int64_t> mcur;
  compositions(mass, s, mcur, mags);

  std::vector<std::pair<std::vector<std::int64_t>, IntVec>> keyed;
  for (const auto& pos : positions) {
    std::vector<std::size_t> idx = pos;
    idx.push_back(n);
    for (const auto& mag : mags) {
      std::int64_t g = 0;
      for (auto m : mag) g = std::gcd(g, m);
      if (g != 1) continue;
      for (std::uint64_t signs = 0; signs < (std::uint64_t{1} << s); ++signs) {
        IntVec v;
        std::vector<std::int64_t> key(n, 0);
        for (std::size_t j = 0; j < s; ++j) {
          std::int64_t value = (signs >> j) & 1 ? -mag[j] : mag[j];
          v.emplace_back(idx[j], value);
          key[idx[j] - 1] = coordinate_key(value);
        }
        keyed.emplace_back(std::move(key), std::move(v));
      }
    }
  }
  std::sort(keyed.begin(), keyed.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
  std::vector<IntVec> out;
  out.reserve(keyed.size());
  for (auto& kv : keyed) out.push_back(std::move(kv.second));
  return out;
}

// Walks the cost levels in order, optionally restricted to a maximal
// support index and a minimal support size.
class OrderedStream {
 public:
  OrderedStream(std::size_t max_index, std::size_t min_support)
      : max_index_(max_index), min_support_(min_support) {}

  IntVec next() {
    while (buffer_.empty()) refill();
    IntVec v = std::move(buffer_.front());
    buffer_.pop_front();
    return v;
  }

 private:
  void refill() {
    // Advance (cost, n, s) to the next nonempty bucket. For fixed cost and n
    // the mass S = cost - c*n - W*s grows as s shrinks, so s runs downward.
    while (true) {
      if (s_ == 0) {
        ++n_;
        if (n_ > max_n_for_cost()) {
          ++cost_;
          n_ = 1;
        }
        s_ = max_s();
        continue;
      }
      std::size_t s = s_--;
      if (s < min_support_) continue;
      std::int64_t mass = cost_ - kIndexWeight * static_cast<std::int64_t>(n_) - kAtomWeight * static_cast<std::int64_t>(s);
      if (mass < static_cast<std::int64_t>(s)) continue;
      for (auto& v : bucket(n_, s, mass)) buffer_.push_back(std::move(v));
      if (!buffer_.empty()) return;
    }
  }

  std::size_t max_n_for_cost() const {
    std::int64_t bound = (cost_ - 1 - kAtomWeight) / kIndexWeight;
    if (bound < 1) return 0;
    std::size_t n = static_cast<std::size_t>(bound);
    return max_index_ == 0 ? n : std::min(n, max_index_);
  }

  std::size_t max_s() const {
    std::int64_t room = cost_ - kIndexWeight * static_cast<std::int64_t>(n_);
    if (room <= 0) return 0;
    std::size_t s = static_cast<std::size_t>(room / (kAtomWeight + 1));
    return std::min(s, n_);
  }

  std::size_t max_index_;
  std::size_t min_support_;
  std::int64_t cost_ = 0;
  std::size_t n_ = 0;
  std::size_t s_ = 0;
  std::deque<IntVec> buffer_;
};

FinSeq to_finseq(const IntVec& v) {
  FinSeq out;
  for (const auto& [i, x] : v) out.set(i, Rational(x));
  return out;
}

}  // namespace

SphereVector::SphereVector(std::size_t index, FinSeq direction)
    : index_(index), direction_(canonical_primitive(direction)) {
  double len = norm(direction_, NormKind::L2);
  for (const auto& [i, x] : direction_) unit_.set(i, x.convert_to<double>() / len);
}

struct SphereEnumerator::Impl {
  explicit Impl(EnumerationMode m)
      : mode(m),
        main(0, m.kind == EnumerationMode::Kind::NoSingleton ? 2 : 1),
        planar(2, 1) {}

  IntVec next_raw() {
    if (mode.kind == EnumerationMode::Kind::AdversarialPrefix) {
      if (planar_taken < mode.prefix) {
        IntVec v = planar.next();
        ++planar_taken;
        emitted.insert(v);
        return v;
      }
      while (true) {
        IntVec v = main.next();
        if (!emitted.count(v)) return v;
      }
    }
    return main.next();
  }

  EnumerationMode mode;
  OrderedStream main;
  OrderedStream planar;
  std::size_t planar_taken = 0;
  std::set<IntVec> emitted;
  std::size_t produced = 0;
};

SphereEnumerator::SphereEnumerator(EnumerationMode mode) : impl_(std::make_unique<Impl>(mode)) {}
SphereEnumerator::~SphereEnumerator() = default;
SphereEnumerator::SphereEnumerator(SphereEnumerator&&) noexcept = default;
SphereEnumerator& SphereEnumerator::operator=(SphereEnumerator&&) noexcept = default;

SphereVector SphereEnumerator::next() {
  IntVec v = impl_->next_raw();
  return SphereVector(++impl_->produced, to_finseq(v));
}

std::size_t SphereEnumerator::produced() const { return impl_->produced; }

std::vector<SphereVector> enumerate_sphere(EnumerationMode mode, std::size_t count) {
  if (count == 0) throw Error(ErrorCode::BadParameter, "enumeration length must be at least 1");
  SphereEnumerator e(mode);
  std::vector<SphereVector> out;
  out.reserve(count);
  for (std::size_t k = 0; k < count; ++k) out.push_back(e.next());
  return out;
}

std::optional<DensityWitness> density_witness(const RealSeq& target, double eps, EnumerationMode mode,
                                              std::size_t budget, std::size_t first) {
  if (std::abs(norm(target, NormKind::L2) - 1.0) > 1e-9) {
    throw Error(ErrorCode::NotUnit, "density target must have unit l2 norm");
  }
  if (!(eps > 0.0)) throw Error(ErrorCode::BadParameter, "eps must be positive");
  SphereEnumerator e(mode);
  for (std::size_t k = 1; k <= budget; ++k) {
    SphereVector z = e.next();
    if (k < first) continue;
    double d = norm(subtract(target, z.unit()), NormKind::L2);
    if (d <= eps) return DensityWitness{k, d};
  }
  return std::nullopt;
}

}  // namespace hybridop
