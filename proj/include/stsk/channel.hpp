#pragma once

#include "stsk/common.hpp"
#include "stsk/rng.hpp"

#include <cmath>
#include <vector>

namespace stsk {

// One block-fading realization: H is N x M with i.i.d. CN(0,1) entries, held
// constant over the T slots of a block. N0 is fixed at 1 in this codebase,
// so the per-receive-antenna SNR is swept through rho alone.
struct ChannelBlock {
  CMat h;
  double n0 = 1.0;
  double rho = 1.0;
};

// A received block in both layouts the receivers consume: the N x T matrix
// and its vectorized equivalent y_bar = vec(Y), with H_bar = I_T (x) H.
struct Observation {
  CMat y;
  CVec y_bar;
  CMat h_bar;
};

inline ChannelBlock sample_channel(int n_rx, int m_tx, RandomStream& rs, double rho = 1.0) {
  if (n_rx < 1 || m_tx < 1) throw ConfigError("channel dimensions must be positive");
  return ChannelBlock{random_cgauss_matrix(n_rx, m_tx, rs), 1.0, rho};
}

// Y = sqrt(rho/M) * H * X + N, with N i.i.d. CN(0, N0).
inline Observation transmit(const ChannelBlock& block, const CMat& x, RandomStream& rs) {
  if (x.rows() != block.h.cols())
    throw ConfigError("transmit: X row count must match channel column count");
  const double amp = std::sqrt(block.rho / block.h.cols());
  Observation obs;
  obs.y = amp * (block.h * x) + random_cgauss_matrix(block.h.rows(), x.cols(), rs, block.n0);
  obs.y_bar = vec(obs.y);
  obs.h_bar = kron_identity(static_cast<int>(x.cols()), block.h);
  return obs;
}

// Receiver-side channel knowledge with estimation error of variance sigma:
// H_hat = H + E, E i.i.d. CN(0, sigma).
inline CMat perturb_csir(const CMat& h, double sigma, RandomStream& rs) {
  if (sigma < 0.0) throw ConfigError("perturb_csir needs sigma >= 0");
  if (sigma == 0.0) return h;
  return h + random_cgauss_matrix(static_cast<int>(h.rows()), static_cast<int>(h.cols()),
                                  rs, sigma);
}

// Least-squares channel estimate from known transmit blocks:
//   H_hat = Y_stack X_stack^H (X_stack X_stack^H)^{-1} / sqrt(rho/M),
// where the stacks place blocks side by side. The sqrt(rho/M) transmit gain
// is folded out so the estimate targets H itself. Throws when the stacked
// training is rank-deficient (fewer than M independent columns).
inline CMat ls_estimate(const std::vector<CMat>& y_train, const std::vector<CMat>& x_train,
                        double rho) {
  if (y_train.empty() || y_train.size() != x_train.size())
    throw ConfigError("ls_estimate needs matched, nonempty training lists");
  const int n_rx = static_cast<int>(y_train.front().rows());
  const int m_tx = static_cast<int>(x_train.front().rows());
  long cols = 0;
  for (const auto& x : x_train) cols += x.cols();
  CMat y_stack(n_rx, cols), x_stack(m_tx, cols);
  long at = 0;
  for (size_t i = 0; i < x_train.size(); ++i) {
    if (y_train[i].rows() != n_rx || x_train[i].rows() != m_tx ||
        y_train[i].cols() != x_train[i].cols())
      throw ConfigError("ls_estimate: inconsistent training block dimensions");
    y_stack.middleCols(at, x_train[i].cols()) = y_train[i];
    x_stack.middleCols(at, x_train[i].cols()) = x_train[i];
    at += x_train[i].cols();
  }
  const CMat gram = x_stack * x_stack.adjoint();
  Eigen::FullPivLU<CMat> lu(gram);
  if (!lu.isInvertible())
    throw InvariantViolation("ls_estimate: training stack is rank-deficient");
  const double amp = std::sqrt(rho / m_tx);
  return (y_stack * x_stack.adjoint() * lu.inverse()) / amp;
}

}  // namespace stsk
