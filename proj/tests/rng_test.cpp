#include "stsk/rng.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <complex>
#include <set>
#include <vector>

namespace stsk {
namespace {

using Block = std::array<uint32_t, 4>;

TEST(Philox, KnownAnswerZeroInput) {
  const Block out = Philox4x32::block({0u, 0u}, {0u, 0u, 0u, 0u});
  const Block want{0x6627e8d5u, 0xe169c58du, 0xbc57ac4cu, 0x9b00dbd8u};
  EXPECT_EQ(out, want);
}

TEST(Philox, KnownAnswerAllOnes) {
  const Block out = Philox4x32::block({0xffffffffu, 0xffffffffu},
                                      {0xffffffffu, 0xffffffffu, 0xffffffffu, 0xffffffffu});
  const Block want{0x408f276du, 0x41c83b0eu, 0xa20bc7c6u, 0x6d5451fdu};
  EXPECT_EQ(out, want);
}

TEST(Philox, KnownAnswerPiDigits) {
  const Block out = Philox4x32::block({0xa4093822u, 0x299f31d0u},
                                      {0x243f6a88u, 0x85a308d3u, 0x13198a2eu, 0x03707344u});
  const Block want{0xd16cfe09u, 0x94fdccebu, 0x5001e420u, 0x24126ea1u};
  EXPECT_EQ(out, want);
}

TEST(RandomStream, SameCoordinatesReplayIdentically) {
  RandomStream a(42, StreamDomain::kChannel, 7, 9);
  RandomStream b(42, StreamDomain::kChannel, 7, 9);
  for (int i = 0; i < 100; ++i) EXPECT_EQ(a.next_u64(), b.next_u64());
}

TEST(RandomStream, DistinctCoordinatesDiverge) {
  RandomStream base(42, StreamDomain::kChannel, 7, 9);
  RandomStream other_seed(43, StreamDomain::kChannel, 7, 9);
  RandomStream other_domain(42, StreamDomain::kNoise, 7, 9);
  RandomStream other_a(42, StreamDomain::kChannel, 8, 9);
  RandomStream other_b(42, StreamDomain::kChannel, 7, 10);
  const uint64_t head = base.next_u64();
  EXPECT_NE(head, other_seed.next_u64());
  EXPECT_NE(head, other_domain.next_u64());
  EXPECT_NE(head, other_a.next_u64());
  EXPECT_NE(head, other_b.next_u64());
}

TEST(RandomStream, UnitIntervalRanges) {
  RandomStream rs(1, StreamDomain::kGeneral);
  for (int i = 0; i < 100000; ++i) {
    const double u = rs.next_unit();
    EXPECT_GT(u, 0.0);
    EXPECT_LE(u, 1.0);
    const double h = rs.next_half_open();
    EXPECT_GE(h, 0.0);
    EXPECT_LT(h, 1.0);
  }
}

TEST(RandomStream, NextBelowIsUnbiasedAcrossSmallRange) {
  RandomStream rs(7, StreamDomain::kGeneral);
  const uint64_t n = 6;
  std::vector<long> counts(n, 0);
  const long draws = 600000;
  for (long i = 0; i < draws; ++i) ++counts[rs.next_below(n)];
  for (uint64_t v = 0; v < n; ++v) {
    const double freq = static_cast<double>(counts[v]) / draws;
    EXPECT_NEAR(freq, 1.0 / n, 0.005) << "value " << v;
  }
}

TEST(RandomStream, NextBelowStaysInRange) {
  RandomStream rs(11, StreamDomain::kGeneral);
  for (int i = 0; i < 10000; ++i) {
    EXPECT_LT(rs.next_below(3), 3u);
    EXPECT_EQ(rs.next_below(1), 0u);
  }
}

TEST(RandomStream, ComplexGaussianMoments) {
  RandomStream rs(5, StreamDomain::kGeneral);
  const int n = 200000;
  double sum_re = 0, sum_im = 0, sum_abs2 = 0, sum_re2 = 0, sum_im2 = 0;
  for (int i = 0; i < n; ++i) {
    const cx z = rs.next_cgauss();
    sum_re += z.real();
    sum_im += z.imag();
    sum_abs2 += std::norm(z);
    sum_re2 += z.real() * z.real();
    sum_im2 += z.imag() * z.imag();
  }
  EXPECT_NEAR(sum_re / n, 0.0, 0.01);
  EXPECT_NEAR(sum_im / n, 0.0, 0.01);
  EXPECT_NEAR(sum_abs2 / n, 1.0, 0.01);   // unit total variance
  EXPECT_NEAR(sum_re2 / n, 0.5, 0.01);    // split evenly between parts
  EXPECT_NEAR(sum_im2 / n, 0.5, 0.01);
}

TEST(RandomStream, ScaledVarianceMatches) {
  RandomStream rs(6, StreamDomain::kGeneral);
  const int n = 200000;
  const double variance = 0.25;
  double sum_abs2 = 0;
  for (int i = 0; i < n; ++i) sum_abs2 += std::norm(rs.next_cgauss(variance));
  EXPECT_NEAR(sum_abs2 / n, variance, 0.01);
}

TEST(RandomCGaussMatrix, FillsColumnMajorDeterministically) {
  RandomStream a(9, StreamDomain::kGeneral);
  RandomStream b(9, StreamDomain::kGeneral);
  const CMat m = random_cgauss_matrix(3, 2, a);
  // Same stream drawn manually must reproduce the matrix column by column.
  for (int c = 0; c < 2; ++c)
    for (int r = 0; r < 3; ++r) EXPECT_EQ(m(r, c), b.next_cgauss());
}

TEST(RandomCGaussMatrix, EntryVarianceNearOne) {
  RandomStream rs(10, StreamDomain::kGeneral);
  const int reps = 2000;
  double sum_abs2 = 0;
  for (int i = 0; i < reps; ++i) sum_abs2 += frob2(random_cgauss_matrix(5, 5, rs));
  EXPECT_NEAR(sum_abs2 / (reps * 25.0), 1.0, 0.02);
}

TEST(Mix64, IsInjectiveOnSample) {
  std::set<uint64_t> seen;
  for (uint64_t i = 0; i < 10000; ++i) seen.insert(mix64(i));
  EXPECT_EQ(seen.size(), 10000u);
}

}  // namespace
}  // namespace stsk
