#pragma once

#include "stsk/common.hpp"
#include "stsk/constellation.hpp"
#include "stsk/dispersion.hpp"

#include <string>
#include <unordered_map>
#include <unordered_set>
#include <utility>
#include <vector>

namespace stsk {

// One codeword together with the (symbol, matrix) pair that produced it.
struct Codeword {
  int q = 0;  // constellation index
  int p = 0;  // dispersion-matrix index
  CMat x;     // s_q * A_p
};

// A signal set crossed with a dispersion-matrix set: the codeword list C,
// plus the stacking matrix chi whose column p is vec(A_p). Codewords are
// stored p-major (all symbols of A_0 first), matching detector trial order.
struct StskCodebook {
  Constellation constellation;
  DispersionMatrixSet dms;
  std::vector<Codeword> codewords;
  CMat chi;  // (M*T) x Q

  int num_dms() const { return dms.q; }
  int num_symbols() const { return constellation.order; }
  int size() const { return static_cast<int>(codewords.size()); }
  const CMat& at(int p, int q) const {
    return codewords[static_cast<size_t>(p) * constellation.order + q].x;
  }
};

// Single-active-entry input vector equivalent to choosing (A_p, s): zeros
// except value s at position p.
inline CVec k_vector(int p, cx s, int q_total) {
  if (p < 0 || p >= q_total) throw ConfigError("k_vector index out of range");
  CVec k = CVec::Zero(q_total);
  k(p) = s;
  return k;
}

// Expand S x D into the full codeword set; the product map must be
// one-to-one or the DM set cannot carry log2(Q*L) bits per block.
inline StskCodebook expand(const Constellation& s, DispersionMatrixSet d) {
  const long total = static_cast<long>(s.order) * d.q;
  if (total > (1L << 16))
    throw ConfigError("codebook too large to store explicitly (L*Q > 65536)");
  StskCodebook cb;
  cb.constellation = s;
  cb.dms = std::move(d);
  cb.codewords.reserve(total);
  std::unordered_set<std::string> keys;
  for (int p = 0; p < cb.dms.q; ++p)
    for (int q = 0; q < s.order; ++q) {
      Codeword w{q, p, s.points[q] * cb.dms.matrices[p]};
      if (!keys.insert(canonical_key(w.x, 1e-12)).second)
        throw DuplicateCodeword("constellation x DM product map is not one-to-one at (p=" +
                                std::to_string(p) + ", q=" + std::to_string(q) + ")");
      cb.codewords.push_back(std::move(w));
    }
  cb.chi.resize(cb.dms.m * cb.dms.t, cb.dms.q);
  for (int p = 0; p < cb.dms.q; ++p) cb.chi.col(p) = vec(cb.dms.matrices[p]);
  return cb;
}

// Result of an exhaustive product-map check: does s*E cover C exactly once?
struct DecompositionReport {
  bool is_bijection = false;
  size_t domain_size = 0;
  size_t image_size = 0;
  size_t collisions = 0;

  std::string csv_line(const std::string& check) const {
    return check + "," + std::to_string(domain_size) + "," + std::to_string(image_size) +
           "," + std::to_string(collisions) + "," + (is_bijection ? "1" : "0");
  }
};

// Exhaustively forms all products s*E_j, and tests that they land inside
// c_target, hit no element twice, and account for every element of it.
// Set membership uses entry grids of 1e-10 to absorb floating-point noise.
inline DecompositionReport verify_decomposition(const std::vector<cx>& s_factor,
                                                const std::vector<CMat>& e,
                                                const std::vector<CMat>& c_target) {
  DecompositionReport r;
  r.domain_size = s_factor.size() * e.size();
  std::unordered_set<std::string> target;
  for (const auto& x : c_target) target.insert(canonical_key(x, 1e-10));
  std::unordered_map<std::string, int> hits;
  size_t inside = 0;
  for (const auto& s : s_factor)
    for (const auto& m : e) {
      const std::string key = canonical_key(CMat(s * m), 1e-10);
      if (!target.count(key)) continue;
      ++inside;
      if (++hits[key] > 1) ++r.collisions;
    }
  r.image_size = hits.size();
  r.is_bijection = r.collisions == 0 && inside == r.domain_size &&
                   r.image_size == c_target.size() && r.domain_size == c_target.size();
  return r;
}

inline DecompositionReport verify_decomposition(const std::vector<cx>& s_factor,
                                                const DispersionMatrixSet& e,
                                                const StskCodebook& code) {
  std::vector<CMat> target;
  target.reserve(code.codewords.size());
  for (const auto& w : code.codewords) target.push_back(w.x);
  return verify_decomposition(s_factor, e.matrices, target);
}

// Reduced search set for QAM signaling: fold the rotational symmetry group
// of S out of the code, leaving E = { f_l*M_l + sum_{i != l} f'_i*M_i } with
// the pivot coefficient restricted to the quotient set S'. The detector then
// searches |S_sym| * |E| = |C| points in two stages.
inline std::pair<std::vector<cx>, std::vector<CMat>> qam_decompose(
    const Constellation& s, const std::vector<CMat>& basis, int pivot_l) {
  if (s.kind == ConstellationKind::kPsk)
    throw ConfigError("qam_decompose needs a square- or star-QAM constellation");
  const int v = static_cast<int>(basis.size());
  if (v < 1) throw ConfigError("qam_decompose needs at least one basis matrix");
  if (pivot_l < 0 || pivot_l >= v) throw ConfigError("qam_decompose pivot out of range");

  const auto& sym = s.sym;
  std::vector<int> free_idx;
  for (int i = 0; i < v; ++i)
    if (i != pivot_l) free_idx.push_back(i);

  std::vector<CMat> e;
  std::unordered_set<std::string> seen;
  for (const cx& f_l : sym.s_prime) {
    detail::for_each_tuple(static_cast<int>(free_idx.size()), s.order,
                           [&](const std::vector<int>& digits) {
                             CMat m = f_l * basis[pivot_l];
                             for (size_t d = 0; d < free_idx.size(); ++d)
                               m += s.points[digits[d]] * basis[free_idx[d]];
                             if (seen.insert(canonical_key(m, 1e-10)).second)
                               e.push_back(std::move(m));
                           });
  }
  const size_t expect = (static_cast<size_t>(s.order) / sym.s_sym.size()) *
                        static_cast<size_t>(std::llround(std::pow(double(s.order), v - 1)));
  if (e.size() != expect)
    throw InvariantViolation("qam_decompose produced " + std::to_string(e.size()) +
                             " matrices, expected " + std::to_string(expect));
  return {sym.s_sym, std::move(e)};
}

}  // namespace stsk
