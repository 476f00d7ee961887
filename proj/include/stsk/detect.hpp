#pragma once

#include "stsk/channel.hpp"
#include "stsk/codebook.hpp"
#include "stsk/common.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <utility>
#include <vector>

namespace stsk {

struct Decision {
  int p = 0;       // dispersion-matrix index
  int q = 0;       // symbol index
  double metric = 0.0;
};

// Exhaustive maximum-likelihood reference: argmin over all (p, q) of
// ||Y - sqrt(rho/M) H s_q A_p||_F^2. Ties break to the smallest (p, q),
// which the p-major codeword order delivers with a strict comparison.
inline Decision ml_detect(const CMat& y, const CMat& h, const StskCodebook& cb, double rho) {
  if (cb.size() == 0) throw ConfigError("ml_detect: empty codebook");
  if (h.cols() != cb.dms.m || y.cols() != cb.dms.t || y.rows() != h.rows())
    throw ConfigError("ml_detect: dimension mismatch");
  const double amp = std::sqrt(rho / cb.dms.m);
  Decision best{0, 0, std::numeric_limits<double>::infinity()};
  for (const auto& w : cb.codewords) {
    const double metric = frob2(CMat(y - amp * (h * w.x)));
    if (metric < best.metric) best = {w.p, w.q, metric};
  }
  return best;
}

// Single-stream ML over the vectorized model: per DM index p the effective
// column is h_p = sqrt(rho/M) H_bar chi_p and the codeword metric reduces to
// the scalar form ||y_bar||^2 - 2 Re(conj(s) h_p^H y_bar) + |s|^2 ||h_p||^2,
// evaluated for every s in S. Decision-identical to ml_detect, including
// tie-breaks: p ascending outer, q ascending inner, strict improvement only.
inline Decision single_stream_ml(const CVec& y_bar, const CMat& h_bar, const CMat& chi,
                                 const Constellation& s, double rho) {
  const int q_total = static_cast<int>(chi.cols());
  if (q_total == 0 || s.order == 0) throw ConfigError("single_stream_ml: empty codebook");
  if (h_bar.cols() != chi.rows() || y_bar.size() != h_bar.rows())
    throw ConfigError("single_stream_ml: dimension mismatch");
  // chi has M*T rows with M = T throughout, so M = sqrt(rows).
  const int m = static_cast<int>(std::lround(std::sqrt(double(chi.rows()))));
  const double amp = std::sqrt(rho / m);
  const double y2 = y_bar.squaredNorm();
  Decision best{0, 0, std::numeric_limits<double>::infinity()};
  for (int p = 0; p < q_total; ++p) {
    const CVec h_p = amp * (h_bar * chi.col(p));
    const cx corr = h_p.dot(y_bar);  // h_p^H y_bar
    const double h2 = h_p.squaredNorm();
    for (int q = 0; q < s.order; ++q) {
      const cx sym = s.points[q];
      const double metric = y2 - 2.0 * std::real(std::conj(sym) * corr) +
                            std::norm(sym) * h2;
      if (metric < best.metric) best = {p, q, metric};
    }
  }
  return best;
}

// Matched-filter near-ML detection: rank DM indices by the normalized
// statistic z_p = |h_p^H y_bar| / ||h_p||, keep the best shortlist_size of
// them, then run the exact scalar ML metric restricted to shortlist x S.
// shortlist_size = Q degenerates to full ML; the default of 1 is the pure
// matched-filter index pick.
inline Decision mf_detect(const CVec& y_bar, const CMat& h_bar, const CMat& chi,
                          const Constellation& s, double rho, int shortlist_size = 1) {
  const int q_total = static_cast<int>(chi.cols());
  if (q_total == 0 || s.order == 0) throw ConfigError("mf_detect: empty codebook");
  if (shortlist_size < 1 || shortlist_size > q_total)
    throw ConfigError("mf_detect: shortlist size must lie in [1, Q]");
  const int m = static_cast<int>(std::lround(std::sqrt(double(chi.rows()))));
  const double amp = std::sqrt(rho / m);

  std::vector<CVec> h_cols(q_total);
  std::vector<std::pair<double, int>> ranking(q_total);
  for (int p = 0; p < q_total; ++p) {
    h_cols[p] = amp * (h_bar * chi.col(p));
    const double norm = h_cols[p].norm();
    const double z = norm > 0.0 ? std::abs(h_cols[p].dot(y_bar)) / norm : 0.0;
    ranking[p] = {-z, p};  // descending statistic, ascending index on ties
  }
  std::sort(ranking.begin(), ranking.end());
  std::vector<int> shortlist(shortlist_size);
  for (int i = 0; i < shortlist_size; ++i) shortlist[i] = ranking[i].second;
  std::sort(shortlist.begin(), shortlist.end());  // restore (p, q) tie order

  const double y2 = y_bar.squaredNorm();
  Decision best{shortlist.front(), 0, std::numeric_limits<double>::infinity()};
  for (int p : shortlist) {
    const cx corr = h_cols[p].dot(y_bar);
    const double h2 = h_cols[p].squaredNorm();
    for (int q = 0; q < s.order; ++q) {
      const cx sym = s.points[q];
      const double metric = y2 - 2.0 * std::real(std::conj(sym) * corr) +
                            std::norm(sym) * h2;
      if (metric < best.metric) best = {p, q, metric};
    }
  }
  return best;
}

struct FrameResult {
  std::vector<Decision> decisions;
  CMat channel_estimate;
  int iterations_run = 0;
};

// Semi-blind reception of one frame: least-squares channel estimation from
// the training blocks, ML detection of every data block, then `iters`
// rounds of re-estimation where detected blocks join the training set as
// equally weighted pilots before re-detection. The channel is assumed
// constant across the whole frame.
inline FrameResult iterative_semiblind(const std::vector<CMat>& y_train,
                                       const std::vector<CMat>& x_train,
                                       const std::vector<CMat>& y_data,
                                       const StskCodebook& cb, double rho, int iters) {
  if (iters < 0) throw ConfigError("iterative_semiblind: iters must be >= 0");
  FrameResult result;
  result.channel_estimate = ls_estimate(y_train, x_train, rho);
  result.decisions.resize(y_data.size());

  for (int round = 0; round <= iters; ++round) {
    for (size_t i = 0; i < y_data.size(); ++i)
      result.decisions[i] = ml_detect(y_data[i], result.channel_estimate, cb, rho);
    result.iterations_run = round;
    if (round == iters) break;
    std::vector<CMat> y_all = y_train, x_all = x_train;
    for (size_t i = 0; i < y_data.size(); ++i) {
      y_all.push_back(y_data[i]);
      x_all.push_back(cb.at(result.decisions[i].p, result.decisions[i].q));
    }
    result.channel_estimate = ls_estimate(y_all, x_all, rho);
  }
  return result;
}

}  // namespace stsk
