#include <gtest/gtest.h>

#include <random>
#include <set>

#include "fixtures.hpp"
#include "jtheta/lattice_enum.hpp"

using namespace jtheta;

namespace {

std::int64_t detail_mod(std::int64_t a, std::int64_t n) { return ((a % n) + n) % n; }

std::vector<IntVector> as_vectors(const PointSet& ps) {
  std::vector<IntVector> out;
  for (std::size_t i = 0; i < ps.size(); ++i) out.emplace_back(ps[i].begin(), ps[i].end());
  return out;
}

}  // namespace

TEST(EnumeratePoints, SmallExamples) {
  const auto q2 = validate_form(IntMatrix::identity(2, 2));
  const auto pts = as_vectors(enumerate_points(q2, 1));
  const std::vector<IntVector> want{{-1, 0}, {0, -1}, {0, 0}, {0, 1}, {1, 0}};
  EXPECT_EQ(pts, want);

  const auto q4 = fx::form_2i4();
  const auto zero = as_vectors(enumerate_points(q4, 0));
  ASSERT_EQ(zero.size(), 1u);
  EXPECT_EQ(zero[0], IntVector(4, 0));

  const auto ps = enumerate_points(q4, 1);
  std::size_t shell = 0;
  for (std::size_t i = 0; i < ps.size(); ++i) shell += ps.norm(i) == 1;
  EXPECT_EQ(shell, 8u);
}

TEST(EnumeratePoints, NormsAreExact) {
  const auto q = fx::form_a2();
  const auto ps = enumerate_points(q, 12);
  for (std::size_t i = 0; i < ps.size(); ++i) {
    EXPECT_EQ(ps.norm(i), q.quad(ps[i]));
    EXPECT_LE(ps.norm(i), 12);
  }
}

TEST(EnumeratePoints, MatchesBoxScanOnRandomForms) {
  std::mt19937_64 rng(2024);
  std::uniform_int_distribution<int> rad(0, 10);
  for (int trial = 0; trial < 50; ++trial) {
    const auto a = oracle::random_even_form(rng, trial % 2 == 0 ? 2 : 4);
    const auto q = validate_form(fx::from_oracle(a));
    const std::int64_t r = rad(rng);
    EXPECT_EQ(as_vectors(enumerate_points(q, r)), oracle::box_scan(a, r)) << "trial " << trial;
  }
}

TEST(EnumeratePoints, SymmetricAndMonotone) {
  std::mt19937_64 rng(99);
  for (int trial = 0; trial < 10; ++trial) {
    const auto q = validate_form(fx::from_oracle(oracle::random_even_form(rng, 4)));
    const auto small = enumerate_points(q, 4);
    const auto large = enumerate_points(q, 9);
    for (std::size_t i = 0; i < small.size(); ++i) {
      IntVector neg(small[i].begin(), small[i].end());
      for (auto& x : neg) x = -x;
      EXPECT_TRUE(small.contains(neg));
      EXPECT_TRUE(large.contains(small[i]));
    }
  }
}

TEST(EnumeratePoints, RationalRadiusIsFloored) {
  const auto q = fx::form_2i4();
  EXPECT_EQ(as_vectors(enumerate_points(q, Rational(5, 2))), as_vectors(enumerate_points(q, 2)));
}

TEST(EnumeratePoints, CapAndDomain) {
  const auto q = fx::form_2i4();
  EXPECT_JT_ERROR(enumerate_points(q, 50, EnumerationLimits{100}), kRadiusTooLarge);
  EXPECT_THROW(enumerate_points(q, -1), Error);
}

TEST(EnumerateCongruence, ZeroResidueIsScaledLattice) {
  const auto q = fx::form_2i4();
  const IntVector p(4, 0);
  for (std::int64_t r : {0, 1, 2, 3}) {
    const auto cong = as_vectors(enumerate_congruence(q, p, 4, Rational(r)));
    auto base = as_vectors(enumerate_points(q, r));
    for (auto& m : base)
      for (auto& x : m) x *= 4;
    EXPECT_EQ(cong, base);
  }
  // Below the smallest nonzero value of Q(m)/N^2.
  const auto tiny = as_vectors(enumerate_congruence(q, p, 4, Rational(1, 17)));
  ASSERT_EQ(tiny.size(), 1u);
  EXPECT_EQ(tiny[0], IntVector(4, 0));
}

TEST(EnumerateCongruence, FilterConsistency) {
  const auto q = fx::form_2i4();
  for (const IntVector& p : {IntVector{2, 0, 0, 0}, IntVector{2, 2, 0, 2}, IntVector{0, 0, 0, 0}}) {
    for (const Rational r : {Rational(1, 4), Rational(1), Rational(3, 2)}) {
      const auto cong = as_vectors(enumerate_congruence(q, p, 4, r));
      const auto all = enumerate_points(q, r * 16);
      std::vector<IntVector> want;
      for (std::size_t i = 0; i < all.size(); ++i) {
        bool in = true;
        for (std::size_t j = 0; j < 4; ++j) in = in && detail_mod(all[i][j] - p[j], 4) == 0;
        if (in) want.emplace_back(all[i].begin(), all[i].end());
      }
      EXPECT_EQ(cong, want);
    }
  }
}

TEST(EnumerateCongruence, A2Level3) {
  const auto q = fx::form_a2();
  // A p = (2+1, 1+2) = (3, 3) ≡ 0 mod 3.
  const IntVector p{1, 1};
  EXPECT_TRUE(is_admissible_residue(q, p, 3));
  const auto cong = enumerate_congruence(q, p, 3, Rational(2));
  for (std::size_t i = 0; i < cong.size(); ++i) {
    EXPECT_EQ(detail_mod(cong[i][0] - 1, 3), 0);
    EXPECT_EQ(detail_mod(cong[i][1] - 1, 3), 0);
    EXPECT_LE(cong.norm(i), 18);
  }
  EXPECT_FALSE(cong.empty());
}

TEST(EnumerateCongruence, InadmissibleResidue) {
  const auto q = fx::form_2i4();
  EXPECT_FALSE(is_admissible_residue(q, IntVector{1, 0, 0, 0}, 4));
  EXPECT_JT_ERROR(enumerate_congruence(q, IntVector{1, 0, 0, 0}, 4, Rational(1)),
                  kInadmissibleResidue);
}
