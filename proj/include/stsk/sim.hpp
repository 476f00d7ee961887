#pragma once

#include "stsk/channel.hpp"
#include "stsk/codebook.hpp"
#include "stsk/common.hpp"
#include "stsk/config.hpp"
#include "stsk/detect.hpp"
#include "stsk/metrics.hpp"
#include "stsk/rng.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <functional>
#include <ostream>
#include <string>
#include <thread>
#include <vector>

#ifndef STSK_GIT_REV
#define STSK_GIT_REV "unknown"
#endif

namespace stsk {

// Run fn(begin, end) over [0, total) split into contiguous chunks, one per
// worker. Callers must make fn's writes disjoint per index so that results
// do not depend on the split; reductions happen after the join.
inline void parallel_for(long total, int threads, const std::function<void(long, long)>& fn) {
  if (total <= 0) return;
  const int workers = static_cast<int>(std::max<long>(1, std::min<long>(threads, total)));
  if (workers == 1) {
    fn(0, total);
    return;
  }
  std::vector<std::thread> pool;
  const long chunk = (total + workers - 1) / workers;
  for (int w = 0; w < workers; ++w) {
    const long begin = w * chunk, end = std::min(total, begin + chunk);
    if (begin >= end) break;
    pool.emplace_back([&fn, begin, end] { fn(begin, end); });
  }
  for (auto& th : pool) th.join();
}

struct Interval {
  double low = 0.0;
  double high = 1.0;
};

// Wilson score interval for a binomial proportion at 95% confidence.
inline Interval wilson_ci(long errors, long trials) {
  if (trials <= 0) return {0.0, 1.0};
  constexpr double z = 1.959963984540054;
  const double n = static_cast<double>(trials);
  const double p_hat = static_cast<double>(errors) / n;
  const double denom = 1.0 + z * z / n;
  const double center = (p_hat + z * z / (2.0 * n)) / denom;
  const double half = z * std::sqrt(p_hat * (1.0 - p_hat) / n + z * z / (4.0 * n * n)) / denom;
  // The boundary cases are exact (center == half there); avoid sqrt noise.
  const double low = errors <= 0 ? 0.0 : std::max(0.0, center - half);
  const double high = errors >= trials ? 1.0 : std::min(1.0, center + half);
  return {low, high};
}

struct SerPoint {
  double snr_db = 0.0;
  double ser = 0.0;
  long trials = 0;
  long errors = 0;
  double ci_low = 0.0;
  double ci_high = 1.0;
};

namespace detail {

// One perfect/perturbed-CSIR detection trial. Streams are keyed purely by
// (seed, purpose, SNR-point index, trial index): two campaigns run with the
// same seed see identical channels, noise, and codeword selections, so a
// codebook comparison is paired trial-for-trial.
inline int run_block_trial(const StskCodebook& cb, const SimConfig& cfg, double rho,
                           uint64_t point, uint64_t trial) {
  const int l = cb.num_symbols();
  RandomStream pick_rs(cfg.master_seed, StreamDomain::kData, point, trial);
  const auto idx = pick_rs.next_below(static_cast<uint64_t>(cb.size()));
  const int p = static_cast<int>(idx) / l, q = static_cast<int>(idx) % l;

  RandomStream ch_rs(cfg.master_seed, StreamDomain::kChannel, point, trial);
  RandomStream noise_rs(cfg.master_seed, StreamDomain::kNoise, point, trial);
  const ChannelBlock block{random_cgauss_matrix(cfg.n, cfg.m, ch_rs), 1.0, rho};
  const Observation obs = transmit(block, cb.at(p, q), noise_rs);

  CMat h_rx = block.h;
  if (cfg.csir_sigma > 0.0) {
    RandomStream csir_rs(cfg.master_seed, StreamDomain::kCsirError, point, trial);
    h_rx = perturb_csir(block.h, cfg.csir_sigma, csir_rs);
  }

  Decision d;
  switch (cfg.detector.kind) {
    case DetectorKind::kMl:
      d = ml_detect(obs.y, h_rx, cb, rho);
      break;
    case DetectorKind::kSsml:
      d = single_stream_ml(obs.y_bar, kron_identity(cfg.t, h_rx), cb.chi,
                           cb.constellation, rho);
      break;
    case DetectorKind::kMf:
      d = mf_detect(obs.y_bar, kron_identity(cfg.t, h_rx), cb.chi, cb.constellation, rho,
                    cfg.detector.mf_shortlist);
      break;
    case DetectorKind::kSemiblind:
      throw ConfigError("semiblind detection runs per frame, not per block");
  }
  return (d.p == p && d.q == q) ? 0 : 1;
}

inline constexpr int kFrameTraining = 2;
inline constexpr int kFrameData = 100;

// One semi-blind frame: the channel stays fixed over 2 identity training
// blocks plus 100 data blocks; detection errors are counted over the data.
inline int run_semiblind_frame(const StskCodebook& cb, const SimConfig& cfg, double rho,
                               uint64_t point, uint64_t frame) {
  RandomStream ch_rs(cfg.master_seed, StreamDomain::kChannel, point, frame);
  RandomStream noise_rs(cfg.master_seed, StreamDomain::kNoise, point, frame);
  RandomStream pick_rs(cfg.master_seed, StreamDomain::kData, point, frame);
  const ChannelBlock block{random_cgauss_matrix(cfg.n, cfg.m, ch_rs), 1.0, rho};

  std::vector<CMat> y_train, x_train, y_data;
  for (int i = 0; i < kFrameTraining; ++i) {
    const CMat pilot = CMat::Identity(cfg.m, cfg.t);
    y_train.push_back(transmit(block, pilot, noise_rs).y);
    x_train.push_back(pilot);
  }
  std::vector<int> sent(kFrameData);
  const int l = cb.num_symbols();
  for (int i = 0; i < kFrameData; ++i) {
    sent[i] = static_cast<int>(pick_rs.next_below(static_cast<uint64_t>(cb.size())));
    y_data.push_back(transmit(block, cb.at(sent[i] / l, sent[i] % l), noise_rs).y);
  }

  const FrameResult res = iterative_semiblind(y_train, x_train, y_data, cb, rho,
                                              cfg.detector.semiblind_iters);
  int errors = 0;
  for (int i = 0; i < kFrameData; ++i)
    if (res.decisions[i].p != sent[i] / l || res.decisions[i].q != sent[i] % l) ++errors;
  return errors;
}

}  // namespace detail

// Simulate one SNR point until min_errors errors or max_trials trials. With
// the default min_errors = 100, an SER of 10^-t is measured from roughly
// 100*10^t >= 10^(t+1) transmitted blocks. Trials advance in fixed-size
// batches whose per-trial results land in disjoint slots, so the outcome is
// byte-identical for every thread count.
inline SerPoint run_ser_point(const StskCodebook& cb, const SimConfig& cfg, double snr_db,
                              uint64_t point_idx, int threads = 1) {
  const double rho = db_to_linear(snr_db);
  const bool framed = cfg.detector.kind == DetectorKind::kSemiblind;
  const long trials_per_unit = framed ? detail::kFrameData : 1;
  const long batch_units = framed ? 16 : 1024;

  SerPoint out;
  out.snr_db = snr_db;
  std::vector<int> slot(batch_units);
  long unit_base = 0;
  while (out.errors < cfg.min_errors && out.trials < cfg.max_trials) {
    const long room = (cfg.max_trials - out.trials + trials_per_unit - 1) / trials_per_unit;
    const long units = std::min(batch_units, room);
    parallel_for(units, threads, [&](long begin, long end) {
      for (long u = begin; u < end; ++u)
        slot[u] = framed ? detail::run_semiblind_frame(cb, cfg, rho, point_idx,
                                                       static_cast<uint64_t>(unit_base + u))
                         : detail::run_block_trial(cb, cfg, rho, point_idx,
                                                   static_cast<uint64_t>(unit_base + u));
    });
    for (long u = 0; u < units; ++u) out.errors += slot[u];
    out.trials += units * trials_per_unit;
    unit_base += units;
  }
  out.trials = std::min(out.trials, cfg.max_trials);
  out.ser = out.trials > 0 ? static_cast<double>(out.errors) / out.trials : 0.0;
  const Interval ci = wilson_ci(out.errors, out.trials);
  out.ci_low = ci.low;
  out.ci_high = ci.high;
  return out;
}

inline std::vector<SerPoint> run_ser_campaign(const SimConfig& cfg, int threads = 1) {
  const StskCodebook cb = build_codebook(cfg);
  std::vector<SerPoint> points;
  for (size_t i = 0; i < cfg.snr_grid_db.size(); ++i)
    points.push_back(run_ser_point(cb, cfg, cfg.snr_grid_db[i], i, threads));
  return points;
}

struct CapacityPoint {
  double snr_db = 0.0;
  CapacityEstimate estimate;
};

// Capacity sweep: per-sample contributions land in an index-addressed array
// and are reduced sequentially, keeping the output independent of threads.
inline std::vector<CapacityPoint> run_capacity_campaign(const SimConfig& cfg,
                                                        int threads = 1) {
  const StskCodebook cb = build_codebook(cfg);
  std::vector<CapacityPoint> points;
  for (double snr : cfg.snr_grid_db) {
    std::vector<double> vals(cfg.capacity_samples);
    parallel_for(cfg.capacity_samples, threads, [&](long begin, long end) {
      for (long s = begin; s < end; ++s)
        vals[s] = dcmc_capacity_sample(cb, snr, cfg.n, cfg.master_seed,
                                       static_cast<uint64_t>(s));
    });
    double mean = 0.0;
    for (double v : vals) mean += v;
    mean /= vals.size();
    double var = 0.0;
    for (double v : vals) var += (v - mean) * (v - mean);
    var = vals.size() > 1 ? var / (vals.size() - 1) : 0.0;
    const double half = 1.959963984540054 * std::sqrt(var / vals.size());
    CapacityPoint pt;
    pt.snr_db = snr;
    pt.estimate.capacity_bpcu =
        std::clamp(mean, 0.0, std::log2(double(cb.size())) / cb.dms.t);
    pt.estimate.ci_low = mean - half;
    pt.estimate.ci_high = mean + half;
    pt.estimate.samples = cfg.capacity_samples;
    points.push_back(pt);
  }
  return points;
}

struct GainRow {
  std::string label;
  int q = 0;
  int l = 0;
  double coding_gain = -1.0;  // negative = undefined ("n/a")
  int diversity = 0;
  double rate = 0.0;
  std::string error;
};

// Coding-gain/diversity table over a list of configurations. Failures in one
// row are recorded there and do not abort the rest.
inline std::vector<GainRow> run_gain_table(const std::vector<SimConfig>& configs) {
  std::vector<GainRow> rows;
  for (const auto& cfg : configs) {
    GainRow row;
    row.label = cfg.dm;
    try {
      const StskCodebook cb = build_codebook(cfg);
      row.q = cb.num_dms();
      row.l = cb.num_symbols();
      row.rate = rate_stsk(row.q, row.l, cb.dms.t);
      if (cb.size() >= 2) {
        row.coding_gain = coding_gain(cb);
        row.diversity = diversity_order(cb);
      } else {
        // A single codeword has no pairwise gain; report the rank of the
        // lone matrix as its diversity.
        Eigen::JacobiSVD<CMat> svd(cb.codewords.front().x);
        const auto& sv = svd.singularValues();
        const double tol = std::max(cb.dms.m, cb.dms.t) *
                           std::numeric_limits<double>::epsilon() * sv(0);
        for (int k = 0; k < sv.size(); ++k)
          if (sv(k) > tol) ++row.diversity;
      }
    } catch (const std::exception& e) {
      row.error = e.what();
    }
    rows.push_back(row);
  }
  return rows;
}

struct VerifyReport {
  bool pass = true;
  std::vector<std::string> lines;      // human-readable
  std::vector<std::string> csv_lines;  // "check,domain_size,image_size,collisions,pass"

  void add(const std::string& check, size_t domain, size_t image, size_t collisions,
           bool ok, const std::string& note = "") {
    pass = pass && ok;
    lines.push_back(std::string(ok ? "PASS " : "FAIL ") + check +
                    (note.empty() ? "" : " (" + note + ")"));
    csv_lines.push_back(check + "," + std::to_string(domain) + "," + std::to_string(image) +
                        "," + std::to_string(collisions) + "," + (ok ? "1" : "0"));
  }
};

// Structural verification of the configured construction: power constraint,
// codeword cardinality/distinctness, product-map bijection, full diversity,
// and the vectorized-model equivalence chi * k = vec(s * A).
inline VerifyReport run_verify(const SimConfig& cfg) {
  VerifyReport report;
  StskCodebook cb;
  try {
    cb = build_codebook(cfg);
  } catch (const std::exception& e) {
    report.add("construction", 0, 0, 1, false, e.what());
    return report;
  }
  const auto& set = cb.dms;

  size_t power_bad = 0;
  const double power_tol = set.family == DmFamily::kFixture ? 5e-3 : 1e-9;
  for (const auto& a : set.matrices)
    if (std::abs(frob2(a) - set.t) > power_tol) ++power_bad;
  report.add("power_constraint", set.matrices.size(), set.matrices.size() - power_bad,
             power_bad, power_bad == 0);

  const size_t expect = static_cast<size_t>(set.q) * cb.num_symbols();
  report.add("codeword_cardinality", expect, cb.codewords.size(), 0,
             cb.codewords.size() == expect);

  std::vector<CMat> targets;
  for (const auto& w : cb.codewords) targets.push_back(w.x);
  const auto decomp = verify_decomposition(cb.constellation.points, set.matrices, targets);
  report.add("product_map_bijection", decomp.domain_size, decomp.image_size,
             decomp.collisions, decomp.is_bijection);

  const int div = cb.size() >= 2 ? diversity_order(cb) : 0;
  report.add("full_diversity", cb.size(), static_cast<size_t>(div), 0,
             cb.size() >= 2 && div == std::min(set.m, set.t),
             "order " + std::to_string(div));

  size_t mismatches = 0;
  for (const auto& w : cb.codewords) {
    const CVec lhs = cb.chi * k_vector(w.p, cb.constellation.points[w.q], set.q);
    if ((lhs - vec(w.x)).cwiseAbs().maxCoeff() > 1e-12) ++mismatches;
  }
  report.add("vectorized_equivalence", cb.codewords.size(), cb.codewords.size() - mismatches,
             mismatches, mismatches == 0);
  return report;
}

// ---- CSV emission ----------------------------------------------------------

inline void write_csv_provenance(std::ostream& os, const SimConfig& cfg) {
  char hash[32];
  std::snprintf(hash, sizeof(hash), "%016llx",
                static_cast<unsigned long long>(config_fingerprint(cfg)));
  os << "# config_hash=" << hash << "\n# master_seed=" << cfg.master_seed
     << "\n# git_rev=" << STSK_GIT_REV << "\n";
}

inline std::string format_real(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.10g", v);
  return buf;
}

inline void write_ser_csv(std::ostream& os, const SimConfig& cfg,
                          const std::vector<SerPoint>& points) {
  write_csv_provenance(os, cfg);
  os << "snr_db,ser,trials,errors,ci_low,ci_high\n";
  for (const auto& p : points)
    os << format_real(p.snr_db) << ',' << format_real(p.ser) << ',' << p.trials << ','
       << p.errors << ',' << format_real(p.ci_low) << ',' << format_real(p.ci_high) << '\n';
}

inline void write_capacity_csv(std::ostream& os, const SimConfig& cfg,
                               const std::vector<CapacityPoint>& points) {
  write_csv_provenance(os, cfg);
  os << "snr_db,capacity_bpcu,ci_low,ci_high,samples\n";
  for (const auto& p : points)
    os << format_real(p.snr_db) << ',' << format_real(p.estimate.capacity_bpcu) << ','
       << format_real(p.estimate.ci_low) << ',' << format_real(p.estimate.ci_high) << ','
       << p.estimate.samples << '\n';
}

inline void write_gain_csv(std::ostream& os, const std::vector<GainRow>& rows) {
  os << "family,q,l,rate_bpcu,coding_gain,diversity,error\n";
  for (const auto& r : rows) {
    // DM specs may contain commas (e.g. subset=2,1); quote the field.
    os << '"' << r.label << "\"," << r.q << ',' << r.l << ',' << format_real(r.rate) << ',';
    if (r.coding_gain < 0.0 || !r.error.empty())
      os << "n/a";
    else
      os << format_real(r.coding_gain);
    os << ',' << r.diversity << ",\"" << r.error << "\"\n";
  }
}

}  // namespace stsk
