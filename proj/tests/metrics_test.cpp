#include "stsk/metrics.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <complex>
#include <limits>
#include <numbers>
#include <vector>

#include "stsk/rng.hpp"

namespace stsk {
namespace {

StskCodebook example_one_codebook() {
  return expand(make_psk(4), fec_dm_set(make_psk(4), {cx{0, -1}, cx{0, 0}}, 1));
}

StskCodebook example_two_codebook() {
  CdaParams p;
  p.t_m = std::polar(1.0, std::numbers::pi / 2);
  p.delta = std::polar(1.0, 3.0 * std::numbers::pi / 8);
  return expand(make_psk(2), cda_dm_set(make_psk(2), p));
}

// Independent determinant path: cofactor expansion instead of LU.
cx det_by_cofactors(const CMat& a) {
  const int n = static_cast<int>(a.rows());
  if (n == 1) return a(0, 0);
  cx det{0, 0};
  double sign = 1.0;
  for (int c = 0; c < n; ++c) {
    CMat minor(n - 1, n - 1);
    for (int r = 1; r < n; ++r) {
      int mc = 0;
      for (int cc = 0; cc < n; ++cc)
        if (cc != c) minor(r - 1, mc++) = a(r, cc);
    }
    det += sign * a(0, c) * det_by_cofactors(minor);
    sign = -sign;
  }
  return det;
}

double coding_gain_oracle(const StskCodebook& cb) {
  double best = std::numeric_limits<double>::infinity();
  for (int i = 0; i < cb.size(); ++i)
    for (int j = i + 1; j < cb.size(); ++j) {
      const cx d = det_by_cofactors(cb.codewords[i].x - cb.codewords[j].x);
      best = std::min(best, std::abs(d) * std::abs(d));
    }
  return best;
}

TEST(CodingGain, MatchesCofactorOracle) {
  for (const auto& cb : {example_one_codebook(), example_two_codebook(),
                         expand(make_psk(2), fixture_appendix_a())}) {
    const double got = coding_gain(cb);
    const double want = coding_gain_oracle(cb);
    EXPECT_NEAR(got, want, 1e-12 * std::max(1.0, want));
  }
}

TEST(CodingGain, KnownValues) {
  EXPECT_NEAR(coding_gain(example_one_codebook()), 1.0, 1e-9);
  EXPECT_NEAR(coding_gain(example_two_codebook()), 1.0, 1e-9);
  EXPECT_NEAR(coding_gain(expand(make_psk(2), fixture_appendix_a())), 0.0455, 5e-3);
}

TEST(CodingGain, InvariantUnderUnitaryRotation) {
  auto cb = example_one_codebook();
  const double before = coding_gain(cb);
  CMat u(2, 2);  // a rotation: unitary by construction
  const double th = 0.7;
  u << cx{std::cos(th), 0}, cx{-std::sin(th), 0}, cx{std::sin(th), 0},
      cx{std::cos(th), 0};
  for (auto& w : cb.codewords) w.x = u * w.x;
  EXPECT_NEAR(coding_gain(cb), before, 1e-9);
}

StskCodebook handmade(std::vector<CMat> words) {
  StskCodebook cb;
  cb.constellation = make_psk(1);
  cb.dms.m = static_cast<int>(words.front().rows());
  cb.dms.t = static_cast<int>(words.front().cols());
  cb.dms.q = static_cast<int>(words.size());
  for (size_t i = 0; i < words.size(); ++i)
    cb.codewords.push_back({0, static_cast<int>(i), words[i]});
  return cb;
}

TEST(CodingGain, SingularDifferencePairGivesZero) {
  CMat a = CMat::Identity(2, 2);
  CMat b = a;
  b(0, 0) += 1.0;  // difference is rank one
  const auto cb = handmade({a, b});
  EXPECT_NEAR(coding_gain(cb), 0.0, 1e-12);
  EXPECT_EQ(diversity_order(cb), 1);
}

TEST(CodingGain, RejectsDegenerateCodebooks) {
  const auto cb = handmade({CMat::Identity(2, 2)});
  EXPECT_THROW(coding_gain(cb), ConfigError);
  EXPECT_THROW(diversity_order(cb), ConfigError);
}

TEST(DiversityOrder, FullRankExamples) {
  EXPECT_EQ(diversity_order(example_one_codebook()), 2);
  EXPECT_EQ(diversity_order(example_two_codebook()), 2);
  // A scaled pair differs by an invertible matrix.
  const CMat x = companion_matrix({cx{0, -1}, cx{0, 0}});
  EXPECT_EQ(diversity_order(handmade({x, 2.0 * x})), 2);
}

TEST(DiversityOrder, ZeroForRepeatedWord) {
  const CMat x = CMat::Identity(2, 2);
  EXPECT_EQ(diversity_order(handmade({x, x})), 0);
}

TEST(Rates, ClosedFormValues) {
  EXPECT_DOUBLE_EQ(rate_stsk(4, 4, 2), 2.0);
  EXPECT_DOUBLE_EQ(rate_stsk(8, 2, 2), 2.0);
  EXPECT_DOUBLE_EQ(rate_stsk(1, 1, 2), 0.0);
  EXPECT_DOUBLE_EQ(rate_ldc(2, 1, 4, 2), 2.0);
  EXPECT_DOUBLE_EQ(rate_ldc(4, 4, 16, 2), 2.0);
  EXPECT_DOUBLE_EQ(rate_cda(2, 1, 1, 2, 2), 2.0);
  EXPECT_DOUBLE_EQ(rate_cda(2, 2, 1, 4, 2), 3.0);
  EXPECT_THROW(rate_stsk(0, 1, 1), ConfigError);
  EXPECT_THROW(rate_ldc(2, 3, 4, 2), ConfigError);
  EXPECT_THROW(rate_cda(2, 3, 1, 2, 2), ConfigError);
}

TEST(EnumerateConfigs, RateTwoTimeTwo) {
  const auto opts = enumerate_configs(2.0, 2);
  ASSERT_EQ(opts.size(), 5u);
  const int want_q[] = {1, 2, 4, 8, 16};
  for (size_t i = 0; i < opts.size(); ++i) {
    EXPECT_EQ(opts[i].q, want_q[i]);
    EXPECT_EQ(opts[i].l, 16 / want_q[i]);
    EXPECT_DOUBLE_EQ(rate_stsk(opts[i].q, opts[i].l, 2), 2.0);
  }
}

TEST(EnumerateConfigs, EdgeRates) {
  EXPECT_EQ(enumerate_configs(1.0, 2).size(), 3u);
  EXPECT_EQ(enumerate_configs(1.5, 2).size(), 4u);
  const auto zero = enumerate_configs(0.0, 2);
  ASSERT_EQ(zero.size(), 1u);
  EXPECT_EQ(zero[0].q, 1);
  EXPECT_EQ(zero[0].l, 1);
  EXPECT_THROW(enumerate_configs(0.3, 2), ConfigError);
  EXPECT_THROW(enumerate_configs(1.0, 0), ConfigError);
}

TEST(DcmcCapacity, SingleCodewordCarriesNoInformation) {
  std::vector<CMat> one{CMat::Identity(2, 2)};
  auto set = detail::make_dm_set(std::move(one), DmFamily::kCo, "", 1e-9);
  const auto cb = expand(make_psk(1), std::move(set));
  EXPECT_DOUBLE_EQ(dcmc_capacity(cb, 10.0, 2, 64, 5), 0.0);
}

TEST(DcmcCapacity, MonotoneInSnrWithSeparatedIntervals) {
  const auto cb = example_one_codebook();
  const auto lo = dcmc_capacity_ci(cb, -5.0, 2, 4000, 11);
  const auto mid = dcmc_capacity_ci(cb, 5.0, 2, 4000, 11);
  const auto hi = dcmc_capacity_ci(cb, 15.0, 2, 4000, 11);
  EXPECT_LT(lo.ci_high, mid.ci_low);
  EXPECT_LT(mid.ci_high, hi.ci_low);
}

TEST(DcmcCapacity, RespectsFeasibleBand) {
  const auto cb = example_one_codebook();
  const double cap = std::log2(16.0) / 2.0;
  for (double snr : {-20.0, 0.0, 20.0, 40.0}) {
    const double c = dcmc_capacity(cb, snr, 2, 500, 3);
    EXPECT_GE(c, 0.0);
    EXPECT_LE(c, cap);
  }
}

TEST(DcmcCapacity, SaturatesAtMaxRate) {
  const auto cb = example_one_codebook();
  EXPECT_NEAR(dcmc_capacity(cb, 30.0, 2, 4000, 17), 2.0, 0.05);
}

TEST(DcmcCapacity, SampleStreamsIndexedNotSequential) {
  // Element k of the batch equals an isolated evaluation of sample k, so
  // any partition of the batch across threads reproduces the same numbers.
  const auto cb = example_two_codebook();
  const auto batch = detail::dcmc_capacity_samples(cb, 8.0, 2, 32, 123);
  for (int k = 0; k < 32; ++k)
    EXPECT_DOUBLE_EQ(batch[k], dcmc_capacity_sample(cb, 8.0, 2, 123, k));
}

TEST(DcmcCapacity, DeterministicAcrossRuns) {
  const auto cb = example_one_codebook();
  const auto a = dcmc_capacity_ci(cb, 12.0, 2, 256, 77);
  const auto b = dcmc_capacity_ci(cb, 12.0, 2, 256, 77);
  EXPECT_DOUBLE_EQ(a.capacity_bpcu, b.capacity_bpcu);
  EXPECT_DOUBLE_EQ(a.ci_low, b.ci_low);
  EXPECT_DOUBLE_EQ(a.ci_high, b.ci_high);
  const auto c = dcmc_capacity_ci(cb, 12.0, 2, 256, 78);
  EXPECT_NE(a.capacity_bpcu, c.capacity_bpcu);
}

}  // namespace
}  // namespace stsk
