#pragma once

#include "stsk/codebook.hpp"
#include "stsk/common.hpp"
#include "stsk/dispersion.hpp"
#include "stsk/metrics.hpp"
#include "stsk/rng.hpp"

#include <cmath>
#include <string>
#include <vector>

namespace stsk {

// Random search for capacity-optimized dispersion matrices: draw `candidates`
// sets of Q i.i.d. complex Gaussian M x T matrices, rescale each matrix to
// trace(A^H A) = T, estimate the mutual information of each set at the
// reference SNR, and keep the argmax (lowest index on ties).
//
// Every candidate's MI estimate reuses the same sample-indexed streams, so
// the comparison is paired: channel, noise, and codeword selections are
// common to all candidates and the argmax is driven by the sets themselves.
inline DispersionMatrixSet co_dm_search(int m, int t, int q, const Constellation& s,
                                        int candidates, int mi_samples, uint64_t seed,
                                        double ref_snr_db = 10.0, int n_rx = 2) {
  if (m != t) throw ConfigError("co_dm_search requires M = T");
  if (q < 1 || candidates < 1 || mi_samples < 1)
    throw ConfigError("co_dm_search needs positive Q, candidates, and samples");

  DispersionMatrixSet best;
  double best_mi = -std::numeric_limits<double>::infinity();
  for (int c = 0; c < candidates; ++c) {
    RandomStream rs(seed, StreamDomain::kCoCandidate, static_cast<uint64_t>(c));
    std::vector<CMat> matrices(q);
    for (int i = 0; i < q; ++i) {
      CMat a = random_cgauss_matrix(m, t, rs);
      matrices[i] = a * std::sqrt(double(t) / frob2(a));
    }
    auto set = detail::make_dm_set(std::move(matrices), DmFamily::kCo,
                                   "random search candidate " + std::to_string(c), 1e-9);
    const auto cb = expand(s, std::move(set));
    double mi = 0.0;
    for (double v : detail::dcmc_capacity_samples(cb, ref_snr_db, n_rx, mi_samples, seed))
      mi += v;
    mi /= mi_samples;
    if (mi > best_mi) {
      best_mi = mi;
      best = cb.dms;
    }
  }
  best.params = "random search over " + std::to_string(candidates) + " candidates, " +
                std::to_string(mi_samples) + " MI samples at " +
                std::to_string(ref_snr_db) + " dB";
  return best;
}

}  // namespace stsk
