#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "hybridop/certify.hpp"
#include "oracles.hpp"

using namespace hybridop;

namespace {

template <class F>
ErrorCode code_of(F&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  return ErrorCode::NumericalFailure;
}

// Index of the direction p in the canonical enumeration, by scanning.
std::size_t index_of(const FinSeq& p, std::size_t budget) {
  SphereEnumerator e(EnumerationMode::canonical());
  for (std::size_t k = 1; k <= budget; ++k) {
    if (e.next().direction() == p) return k;
  }
  return 0;
}

}  // namespace

TEST(Certificate, AlignedPairBecomesInfeasibleAtTheDiagonal) {
  const std::size_t diag = index_of(FinSeq{{1, 1}, {2, 1}}, 10000);
  ASSERT_GT(diag, 3u);
  const MazurOperator b = MazurOperator::covering(EnumerationMode::canonical(), 400);
  const CertificateOutcome c = minnorm_certificate(b, 1, 3, 1, 1, 400);
  ASSERT_FALSE(c.feasible());
  EXPECT_LE(c.infeasible_at, diag);
  // Below K' every feasible eta pairs with the normalized combination at 2 / ||z_1 + z_3||.
  const CertificateOutcome before = minnorm_certificate(b, 1, 3, 1, 1, c.infeasible_at - 1);
  ASSERT_TRUE(before.feasible());
  EXPECT_NEAR(before.eta_pairing, std::sqrt(2.0), 1e-9);
  EXPECT_NEAR(before.proof_constant, std::sqrt(2.0), 1e-15);
}

TEST(Certificate, MonotoneInK) {
  const MazurOperator b = MazurOperator::covering(EnumerationMode::canonical(), 300);
  const CertificateOutcome c = minnorm_certificate(b, 1, 3, 1, 1, 300);
  ASSERT_FALSE(c.feasible());
  for (std::size_t k = c.infeasible_at; k <= 300; k += 17) {
    EXPECT_FALSE(minnorm_certificate(b, 1, 3, 1, 1, k).feasible()) << k;
  }
  for (std::size_t k = 3; k < c.infeasible_at; k += 11) {
    EXPECT_TRUE(minnorm_certificate(b, 1, 3, 1, 1, k).feasible()) << k;
  }
}

TEST(Certificate, AntipodalPairStaysFeasible) {
  const MazurOperator b = MazurOperator::covering(EnumerationMode::canonical(), 2000);
  for (std::size_t k : {2u, 10u, 500u, 2000u}) {
    const CertificateOutcome c = minnorm_certificate(b, 1, 2, 1, -1, k);
    ASSERT_TRUE(c.feasible()) << k;
    EXPECT_LE(c.margin, 1e-9);
    EXPECT_NEAR(c.eta_pairing, c.proof_constant, 1e-9);
  }
}

TEST(Certificate, ProofConstantIdentityForRandomPairs) {
  // For any feasible eta, <eta, eta~> = 2 / ||s_m z_m + s_n z_n||.
  const MazurOperator b = MazurOperator::covering(EnumerationMode::no_singleton(), 60);
  std::mt19937_64 rng(19);
  std::uniform_int_distribution<std::size_t> idx(1, 60);
  int checked = 0;
  for (int trial = 0; trial < 200; ++trial) {
    std::size_t m = idx(rng);
    std::size_t n = idx(rng);
    if (m == n) continue;
    const int sm = (rng() & 1) ? 1 : -1;
    const int sn = (rng() & 1) ? 1 : -1;
    const CertificateOutcome c = minnorm_certificate(b, m, n, sm, sn, std::max(m, n));
    if (!c.feasible()) continue;
    ++checked;
    EXPECT_NEAR(c.eta_pairing, c.proof_constant, 1e-9) << m << "," << n;
  }
  EXPECT_GT(checked, 10);
}

TEST(Certificate, Validation) {
  const MazurOperator b = MazurOperator::covering(EnumerationMode::canonical(), 10);
  EXPECT_EQ(code_of([&] { minnorm_certificate(b, 2, 2, 1, 1, 5); }), ErrorCode::BadSupport);
  EXPECT_EQ(code_of([&] { minnorm_certificate(b, 0, 2, 1, 1, 5); }), ErrorCode::BadSupport);
  EXPECT_EQ(code_of([&] { minnorm_certificate(b, 1, 6, 1, 1, 5); }), ErrorCode::BadSupport);
  EXPECT_EQ(code_of([&] { minnorm_certificate(b, 1, 2, 2, 1, 5); }), ErrorCode::BadParameter);
  EXPECT_EQ(code_of([&] { minnorm_certificate(b, 1, 2, 1, 1, 11); }), ErrorCode::OutOfFrame);
}

TEST(MinnormTrivial, AlignedData) {
  // y = 3 (1, 1, 0) / ... is parallel to (1,1): the one-atom solution at its index.
  const FinSeq y{{1, 3}, {2, 3}};
  const auto a = minnorm_trivial(y, EnumerationMode::canonical(), 1000);
  ASSERT_TRUE(a);
  EXPECT_EQ(a->index, index_of(FinSeq{{1, 1}, {2, 1}}, 1000));
  EXPECT_NEAR(a->value, 3.0 * std::sqrt(2.0), 1e-12);
  const auto zero = minnorm_trivial(FinSeq{}, EnumerationMode::canonical(), 10);
  ASSERT_TRUE(zero);
  EXPECT_TRUE(zero->solution.empty());
  EXPECT_FALSE(minnorm_trivial(FinSeq{{5, 1}, {7, 2}}, EnumerationMode::canonical(), 100));
}

TEST(Qdist, WorkedExample) {
  Eigen::MatrixXd a(1, 2);
  a << 1, 1;
  Eigen::MatrixXd z(2, 1);
  z << 1, -1;
  Eigen::VectorXd y0(1), y1(1);
  y0 << 0;
  y1 << 1;
  EXPECT_EQ(qdist(a, z, y0, y1), 1.0);
}

TEST(Qdist, InjectiveOperatorIsTheL1Distance) {
  const Eigen::MatrixXd a = Eigen::MatrixXd::Identity(3, 3);
  Eigen::VectorXd y0(3), y1(3);
  y0 << 1, 2, 3;
  y1 << 0, 2, 5;
  EXPECT_NEAR(qdist(a, Eigen::MatrixXd(3, 0), y0, y1), 3.0, 1e-12);
}

TEST(Qdist, BruteForceOraclesAndSymmetry) {
  std::mt19937_64 rng(23);
  for (int trial = 0; trial < 50; ++trial) {
    const Eigen::Index nullity = 1 + trial % 3;
    const Eigen::Index cols = nullity + 1 + trial % 3;
    const Eigen::Index rank = cols - nullity;
    const Eigen::MatrixXd a = oracle::gaussian(rank + trial % 2, rank, rng) * oracle::gaussian(rank, cols, rng);
    Eigen::FullPivLU<Eigen::MatrixXd> lu(a);
    const Eigen::MatrixXd z = lu.kernel();
    ASSERT_EQ(z.cols(), nullity);
    const Eigen::VectorXd x0 = oracle::gaussian(cols, rng);
    const Eigen::VectorXd x1 = oracle::gaussian(cols, rng);
    const double v = qdist(a, z, a * x0, a * x1);
    EXPECT_NEAR(v, oracle::l1_distance_vertices(z, x1 - x0), 1e-4) << "trial " << trial;
    EXPECT_GE(oracle::l1_distance_grid(z, x1 - x0), v - 1e-9) << "trial " << trial;
    EXPECT_NEAR(v, qdist(a, z, a * x1, a * x0), 1e-9) << "trial " << trial;
  }
}

TEST(Qdist, Validation) {
  Eigen::MatrixXd a(1, 2);
  a << 1, 1;
  Eigen::MatrixXd z(2, 1);
  z << 1, -1;
  Eigen::VectorXd y(1);
  y << 1;
  EXPECT_EQ(code_of([&] { qdist(a, Eigen::MatrixXd(2, 1).setOnes(), y, y); }), ErrorCode::BadParameter);
  EXPECT_EQ(code_of([&] { qdist(a, Eigen::MatrixXd(2, 0), y, y); }), ErrorCode::BadParameter);
  EXPECT_EQ(code_of([&] { qdist(a, z, Eigen::VectorXd::Ones(2), y); }), ErrorCode::BadDimensions);
  Eigen::MatrixXd a2(2, 2);
  a2 << 1, 1, 1, 1;
  Eigen::VectorXd off(2);
  off << 1, 0;
  EXPECT_EQ(code_of([&] { qdist(a2, z, off, off); }), ErrorCode::NotInRange);
}
