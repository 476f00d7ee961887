#include "stsk/constellation.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <complex>
#include <numbers>

namespace stsk {
namespace {

constexpr double kTol = 1e-12;

double mean_energy(const Constellation& c) {
  double e = 0.0;
  for (const auto& p : c.points) e += std::norm(p);
  return e / c.order;
}

TEST(Psk, KnownSmallSets) {
  const auto bpsk = make_psk(2);
  ASSERT_EQ(bpsk.points.size(), 2u);
  EXPECT_NEAR(std::abs(bpsk.points[0] - cx(1, 0)), 0.0, kTol);
  EXPECT_NEAR(std::abs(bpsk.points[1] - cx(-1, 0)), 0.0, kTol);

  const auto qpsk = make_psk(4);
  ASSERT_EQ(qpsk.points.size(), 4u);
  EXPECT_NEAR(std::abs(qpsk.points[0] - cx(1, 0)), 0.0, kTol);
  EXPECT_NEAR(std::abs(qpsk.points[1] - cx(0, 1)), 0.0, kTol);
  EXPECT_NEAR(std::abs(qpsk.points[2] - cx(-1, 0)), 0.0, kTol);
  EXPECT_NEAR(std::abs(qpsk.points[3] - cx(0, -1)), 0.0, kTol);
}

TEST(Psk, DegenerateSinglePointSet) {
  const auto s = make_psk(1);
  ASSERT_EQ(s.points.size(), 1u);
  EXPECT_NEAR(std::abs(s.points[0] - cx(1, 0)), 0.0, kTol);
}

TEST(Psk, UnitModulusAndIncreasingPhase) {
  const auto s = make_psk(8);
  for (const auto& p : s.points) EXPECT_NEAR(std::abs(p), 1.0, kTol);
  for (int k = 0; k < 8; ++k) {
    const cx want = std::polar(1.0, 2.0 * std::numbers::pi * k / 8);
    EXPECT_NEAR(std::abs(s.points[k] - want), 0.0, kTol) << "index " << k;
  }
}

TEST(Psk, RejectsNonPowerOfTwo) {
  EXPECT_THROW(make_psk(3), ConfigError);
  EXPECT_THROW(make_psk(0), ConfigError);
  EXPECT_THROW(make_psk(-4), ConfigError);
  EXPECT_THROW(make_psk(6), ConfigError);
}

TEST(Psk, SymmetryIsWholeRotationGroup) {
  const auto s = make_psk(4);
  EXPECT_EQ(s.sym.s_sym.size(), 4u);
  ASSERT_EQ(s.sym.s_prime.size(), 1u);
  EXPECT_NEAR(std::abs(s.sym.s_prime[0] - cx(1, 0)), 0.0, kTol);
  EXPECT_NEAR(std::abs(s.generator - cx(0, 1)), 0.0, kTol);
}

TEST(SquareQam, SixteenPointLayout) {
  const auto s = make_square_qam(16);
  ASSERT_EQ(s.points.size(), 16u);
  EXPECT_NEAR(mean_energy(s), 1.0, kTol);
  const double scale = 1.0 / std::sqrt(10.0);
  // Reading order: first point is the top-left corner of the grid.
  EXPECT_NEAR(std::abs(s.points[0] - cx(-3 * scale, 3 * scale)), 0.0, kTol);
  EXPECT_NEAR(std::abs(s.points[3] - cx(3 * scale, 3 * scale)), 0.0, kTol);
  EXPECT_NEAR(std::abs(s.points[15] - cx(3 * scale, -3 * scale)), 0.0, kTol);
  EXPECT_NEAR(std::abs(s.generator - cx(0, 1)), 0.0, kTol);
}

TEST(SquareQam, QuarterSymmetryDecomposition) {
  const auto s = make_square_qam(16);
  ASSERT_EQ(s.sym.s_sym.size(), 4u);
  EXPECT_EQ(s.sym.s_prime.size(), 4u);  // L/4 first-quadrant points
  for (const auto& p : s.sym.s_prime) {
    EXPECT_GT(p.real(), 0.0);
    EXPECT_GT(p.imag(), 0.0);
  }
}

TEST(SquareQam, FourPointCaseHasSingletonQuotient) {
  const auto s = make_square_qam(4);
  EXPECT_EQ(s.sym.s_prime.size(), 1u);
  EXPECT_NEAR(mean_energy(s), 1.0, kTol);
}

TEST(SquareQam, RejectsNonPowerOfFour) {
  EXPECT_THROW(make_square_qam(8), ConfigError);
  EXPECT_THROW(make_square_qam(2), ConfigError);
  EXPECT_THROW(make_square_qam(32), ConfigError);
}

TEST(StarQam, SixteenPointStructure) {
  const auto s = make_star_qam(16, 2.0);
  ASSERT_EQ(s.points.size(), 16u);
  EXPECT_NEAR(mean_energy(s), 1.0, kTol);
  EXPECT_EQ(s.sym.s_sym.size(), 8u);       // 2^(a+1) phases for a = 2
  EXPECT_EQ(s.sym.quadrant_set.size(), 2u);  // 2^(a-1) rings
  const double r0 = std::abs(s.sym.quadrant_set[0]);
  const double r1 = std::abs(s.sym.quadrant_set[1]);
  EXPECT_NEAR(r1 / r0, 2.0, kTol);
  // Each ring holds 8 equally spaced phases at the ring radius.
  for (int k = 0; k < 8; ++k) EXPECT_NEAR(std::abs(s.points[k]), r0, kTol);
  for (int k = 8; k < 16; ++k) EXPECT_NEAR(std::abs(s.points[k]), r1, kTol);
}

TEST(StarQam, FourPointCaseIsSingleRing) {
  const auto s = make_star_qam(4);
  EXPECT_EQ(s.sym.quadrant_set.size(), 1u);
  EXPECT_EQ(s.sym.s_sym.size(), 4u);
  EXPECT_NEAR(mean_energy(s), 1.0, kTol);
}

TEST(StarQam, RejectsBadArguments) {
  EXPECT_THROW(make_star_qam(8), ConfigError);
  EXPECT_THROW(make_star_qam(16, 1.0), ConfigError);
  EXPECT_THROW(make_star_qam(16, 0.5), ConfigError);
}

TEST(SymmetryDecompose, ReturnsStoredStructure) {
  const auto s = make_square_qam(16);
  const auto& d = symmetry_decompose(s);
  EXPECT_EQ(d.s_sym.size(), s.sym.s_sym.size());
  EXPECT_EQ(d.s_prime.size(), s.sym.s_prime.size());
}

TEST(ParseConstellation, AcceptsCanonicalSpecs) {
  EXPECT_EQ(parse_constellation("psk:4").order, 4);
  EXPECT_EQ(parse_constellation("sqam:16").kind, ConstellationKind::kSquareQam);
  const auto star = parse_constellation("star:16:3.5");
  EXPECT_EQ(star.kind, ConstellationKind::kStarQam);
  EXPECT_NEAR(star.star_ring_ratio, 3.5, kTol);
}

TEST(ParseConstellation, RoundTripsOwnSpecString) {
  for (const char* spec : {"psk:2", "psk:8", "sqam:16", "star:16:2.000000"}) {
    const auto c = parse_constellation(spec);
    const auto again = parse_constellation(constellation_spec(c));
    EXPECT_EQ(again.kind, c.kind);
    EXPECT_EQ(again.order, c.order);
  }
}

TEST(ParseConstellation, RejectsMalformedSpecs) {
  EXPECT_THROW(parse_constellation("foo:4"), ConfigError);
  EXPECT_THROW(parse_constellation("psk:x"), ConfigError);
  EXPECT_THROW(parse_constellation("psk:3"), ConfigError);
  EXPECT_THROW(parse_constellation("psk"), ConfigError);
  EXPECT_THROW(parse_constellation(""), ConfigError);
  EXPECT_THROW(parse_constellation("star:16:abc"), ConfigError);
}

}  // namespace
}  // namespace stsk
