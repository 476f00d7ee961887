#pragma once

#include "stsk/codebook.hpp"
#include "stsk/common.hpp"
#include "stsk/rng.hpp"

#include <Eigen/Dense>
#include <Eigen/LU>
#include <Eigen/SVD>

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

namespace stsk {

struct CodeMetrics {
  double coding_gain = 0.0;
  int diversity_order = 0;
  double rate_bpcu = 0.0;
};

// Worst-case pairwise determinant distance of the codeword set: the minimum
// over distinct codeword pairs of |det(D D^H)| with D = X - X'. Reported
// without any dimension-normalizing root so that printed values square the
// minimum |det D|; a singular difference pair drives the result to zero.
inline double coding_gain(const StskCodebook& cb) {
  const int n = cb.size();
  if (n < 2) throw ConfigError("coding_gain needs at least 2 codewords");
  double best = std::numeric_limits<double>::infinity();
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      const CMat d = cb.codewords[i].x - cb.codewords[j].x;
      const CMat gram = d * d.adjoint();
      const double det = std::abs(Eigen::PartialPivLU<CMat>(gram).determinant());
      best = std::min(best, det);
    }
  return best;
}

// Minimum rank of any codeword difference; ranks come from singular values
// thresholded at max(M, T) * machine-eps * sigma_max.
inline int diversity_order(const StskCodebook& cb) {
  const int n = cb.size();
  if (n < 2) throw ConfigError("diversity_order needs at least 2 codewords");
  int best = std::min(cb.dms.m, cb.dms.t);
  for (int i = 0; i < n && best > 0; ++i)
    for (int j = i + 1; j < n; ++j) {
      const CMat d = cb.codewords[i].x - cb.codewords[j].x;
      Eigen::JacobiSVD<CMat> svd(d);
      const auto& sv = svd.singularValues();
      const double tol = std::max(d.rows(), d.cols()) *
                         std::numeric_limits<double>::epsilon() * sv(0);
      int rank = 0;
      for (int k = 0; k < sv.size(); ++k)
        if (sv(k) > tol) ++rank;
      best = std::min(best, rank);
      if (best == 0) break;
    }
  return best;
}

inline double rate_stsk(int q, int l, int t) {
  if (q < 1 || l < 1 || t < 1) throw ConfigError("rate_stsk needs positive arguments");
  return std::log2(double(q) * l) / t;
}

inline double rate_ldc(int v, int r, int l, int t) {
  if (v < 1 || r < 1 || r > v || l < 1 || t < 1)
    throw ConfigError("rate_ldc arguments out of range");
  return (v - r + 1) * std::log2(double(l)) / t;
}

inline double rate_cda(int m, int sub_m, int sub_r, int l, int t) {
  if (m < 1 || sub_m < 1 || sub_m > m || sub_r < 1 || sub_r > m || l < 1 || t < 1)
    throw ConfigError("rate_cda arguments out of range");
  return (m * m - sub_m * sub_r + 1) * std::log2(double(l)) / t;
}

struct ConfigOption {
  int q = 1;
  int l = 1;
};

// All (Q, L) = (2^k, 2^(RT-k)) splits of RT bits per block; R*T must be a
// nonnegative integer, and the list has R*T + 1 entries.
inline std::vector<ConfigOption> enumerate_configs(double rate, int t) {
  if (t < 1) throw ConfigError("enumerate_configs needs T >= 1");
  const double bits = rate * t;
  const long rt = std::llround(bits);
  if (rt < 0 || std::abs(bits - rt) > 1e-9)
    throw ConfigError("enumerate_configs: R*T must be a nonnegative integer");
  std::vector<ConfigOption> out;
  for (long k = 0; k <= rt; ++k)
    out.push_back({static_cast<int>(1L << k), static_cast<int>(1L << (rt - k))});
  return out;
}

// One mutual-information sample for an equiprobable codeword ensemble over
// N0 = 1 noise. The sample owns stream (seed, capacity domain, sample index),
// so results are independent of evaluation order and thread count, and two
// codebooks of equal size evaluated with the same seed see identical
// channel/noise/selection draws (paired comparison). Max-log stabilization
// keeps the log-sum-exp finite at high SNR.
inline double dcmc_capacity_sample(const StskCodebook& cb, double snr_db, int n_rx,
                                   uint64_t seed, uint64_t sample_idx) {
  if (n_rx < 1) throw ConfigError("capacity estimation needs N >= 1");
  const int m = cb.dms.m, t = cb.dms.t, size = cb.size();
  const double rho = db_to_linear(snr_db);
  const double amp = std::sqrt(rho / m);

  RandomStream rs(seed, StreamDomain::kCapacity, sample_idx);
  const CMat h = random_cgauss_matrix(n_rx, m, rs);
  const int pick = static_cast<int>(rs.next_below(static_cast<uint64_t>(size)));
  const CMat noise = random_cgauss_matrix(n_rx, t, rs);
  const CMat hx = amp * (h * cb.codewords[pick].x);

  double max_e = -std::numeric_limits<double>::infinity();
  std::vector<double> exponents(size);
  const double noise2 = frob2(noise);
  for (int j = 0; j < size; ++j) {
    const CMat resid = hx - amp * (h * cb.codewords[j].x) + noise;
    exponents[j] = -(frob2(resid) - noise2);  // N0 = 1
    max_e = std::max(max_e, exponents[j]);
  }
  double acc = 0.0;
  for (double e : exponents) acc += std::exp(e - max_e);
  const double log2_sum = (max_e + std::log(acc)) / std::numbers::ln2;
  return (std::log2(double(size)) - log2_sum) / t;
}

namespace detail {

inline std::vector<double> dcmc_capacity_samples(const StskCodebook& cb, double snr_db,
                                                 int n_rx, int samples, uint64_t seed) {
  if (samples < 1) throw ConfigError("capacity estimation needs samples >= 1");
  std::vector<double> out(samples);
  for (int s = 0; s < samples; ++s)
    out[s] = dcmc_capacity_sample(cb, snr_db, n_rx, seed, static_cast<uint64_t>(s));
  return out;
}

}  // namespace detail

struct CapacityEstimate {
  double capacity_bpcu = 0.0;
  double ci_low = 0.0;
  double ci_high = 0.0;
  int samples = 0;
};

// Monte-Carlo DCMC capacity with a normal-approximation 95% interval. The
// point estimate is clamped to the feasible band [0, log2(Q*L)/T]; the
// interval endpoints are reported unclamped for honest paired comparisons.
inline CapacityEstimate dcmc_capacity_ci(const StskCodebook& cb, double snr_db, int n_rx,
                                         int samples, uint64_t seed) {
  const auto vals = detail::dcmc_capacity_samples(cb, snr_db, n_rx, samples, seed);
  double mean = 0.0;
  for (double v : vals) mean += v;
  mean /= vals.size();
  double var = 0.0;
  for (double v : vals) var += (v - mean) * (v - mean);
  var = vals.size() > 1 ? var / (vals.size() - 1) : 0.0;
  const double half = 1.959963984540054 * std::sqrt(var / vals.size());
  const double cap = std::log2(double(cb.size())) / cb.dms.t;
  CapacityEstimate e;
  e.capacity_bpcu = std::clamp(mean, 0.0, cap);
  e.ci_low = mean - half;
  e.ci_high = mean + half;
  e.samples = samples;
  return e;
}

inline double dcmc_capacity(const StskCodebook& cb, double snr_db, int n_rx, int samples,
                            uint64_t seed) {
  return dcmc_capacity_ci(cb, snr_db, n_rx, samples, seed).capacity_bpcu;
}

}  // namespace stsk
