#pragma once

#include "stsk/common.hpp"
#include "stsk/constellation.hpp"

#include <cmath>
#include <numbers>
#include <set>
#include <string>
#include <unordered_set>
#include <utility>
#include <vector>

namespace stsk {

enum class DmFamily { kFec, kCda, kCo, kFixture };

inline const char* to_string(DmFamily f) {
  switch (f) {
    case DmFamily::kFec: return "FEC";
    case DmFamily::kCda: return "CDA";
    case DmFamily::kCo: return "CO";
    case DmFamily::kFixture: return "Fixture";
  }
  return "?";
}

inline DmFamily dm_family_from_string(const std::string& s) {
  if (s == "FEC") return DmFamily::kFec;
  if (s == "CDA") return DmFamily::kCda;
  if (s == "CO") return DmFamily::kCo;
  if (s == "Fixture") return DmFamily::kFixture;
  throw ConfigError("unknown dispersion-matrix family '" + s + "'");
}

// A set of Q complex M x T dispersion matrices. M = T throughout; every
// matrix satisfies trace(A^H A) = T (unit average transmit power per block)
// and the matrices are pairwise distinct.
struct DispersionMatrixSet {
  std::vector<CMat> matrices;
  int m = 0;
  int t = 0;
  int q = 0;
  DmFamily family = DmFamily::kCo;
  std::string params;  // human-readable construction record
};

namespace detail {

// Central validator: dimensions, the power constraint, and pairwise
// distinctness (entrywise tolerance ~1e-12 via grid keys).
inline DispersionMatrixSet make_dm_set(std::vector<CMat> matrices, DmFamily family,
                                       std::string params, double power_tol) {
  if (matrices.empty()) throw InvariantViolation("empty dispersion-matrix set");
  DispersionMatrixSet set;
  set.m = static_cast<int>(matrices.front().rows());
  set.t = static_cast<int>(matrices.front().cols());
  if (set.m != set.t)
    throw InvariantViolation("dispersion matrices must be square (M = T)");
  std::unordered_set<std::string> keys;
  for (const auto& a : matrices) {
    if (a.rows() != set.m || a.cols() != set.t)
      throw InvariantViolation("inconsistent matrix dimensions in DM set");
    const double power = frob2(a);  // trace(A^H A)
    if (std::abs(power - set.t) > power_tol)
      throw PowerConstraintViolation(
          "dispersion matrix power " + std::to_string(power) + " deviates from " +
          std::to_string(set.t) + " beyond tolerance " + std::to_string(power_tol));
    if (!keys.insert(canonical_key(a, 1e-12)).second)
      throw InvariantViolation("duplicate matrix in dispersion set");
  }
  set.q = static_cast<int>(matrices.size());
  set.matrices = std::move(matrices);
  set.family = family;
  set.params = std::move(params);
  return set;
}

inline void require_psk(const Constellation& s, const char* what) {
  if (s.kind != ConstellationKind::kPsk)
    throw ConfigError(std::string(what) + " requires a PSK constellation, got " +
                      constellation_spec(s));
}

// Odometer over `digits` positions, each cycling [0, radix); the last
// position advances fastest. Calls fn once per combination.
template <typename Fn>
void for_each_tuple(int digits, int radix, Fn&& fn) {
  std::vector<int> idx(digits, 0);
  for (;;) {
    fn(idx);
    int pos = digits - 1;
    while (pos >= 0 && ++idx[pos] == radix) idx[pos--] = 0;
    if (pos < 0) break;
  }
}

}  // namespace detail

// Companion matrix of the monic polynomial x^M + a_{M-1} x^{M-1} + ... + a_0
// with coefficients passed as (a_0, ..., a_{M-1}): subdiagonal of ones, last
// column (-a_0, ..., -a_{M-1})^T, zeros elsewhere.
inline CMat companion_matrix(const std::vector<cx>& poly_coeffs) {
  const int m = static_cast<int>(poly_coeffs.size());
  if (m < 1) throw ConfigError("companion matrix needs a polynomial of degree >= 1");
  CMat c = CMat::Zero(m, m);
  for (int i = 0; i + 1 < m; ++i) c(i + 1, i) = 1.0;
  for (int i = 0; i < m; ++i) c(i, m - 1) = -poly_coeffs[i];
  return c;
}

// Dispersion matrices from the powers of a companion matrix, over a PSK
// signal set S of order L. Two modes:
//  - subset_r = 0 ("full"): { B^l + sum_{i != l} f_i B^i | f_i in S },
//    pivot coefficient l in [0, M-1] (default 1), Q = L^(M-1);
//  - subset_r = r in [1, M-1]: coefficients 0..r-1 all fixed to 1,
//    the rest free, Q = L^(M-r). (r = 1 coincides with pivot l = 0.)
// Every matrix is scaled by 1/sqrt(M); the power constraint is then checked
// rather than assumed, which catches non-PSK misuse.
inline DispersionMatrixSet fec_dm_set(const Constellation& s,
                                      const std::vector<cx>& poly_coeffs,
                                      int pivot_l = 1, int subset_r = 0) {
  detail::require_psk(s, "fec_dm_set");
  const int m = static_cast<int>(poly_coeffs.size());
  if (m < 2) throw ConfigError("fec_dm_set needs a polynomial of degree >= 2");
  if (subset_r == 0 && (pivot_l < 0 || pivot_l >= m))
    throw ConfigError("fec pivot must lie in [0, M-1]");
  if (subset_r < 0 || subset_r > m - 1)
    throw ConfigError("fec subset r must lie in [1, M-1] (0 = full)");

  std::vector<CMat> basis(m);  // basis[i] = companion^i
  basis[0] = CMat::Identity(m, m);
  const CMat comp = companion_matrix(poly_coeffs);
  for (int i = 1; i < m; ++i) basis[i] = basis[i - 1] * comp;

  CMat fixed_part = CMat::Zero(m, m);
  std::vector<int> free_idx;
  if (subset_r == 0) {
    fixed_part = basis[pivot_l];
    for (int i = 0; i < m; ++i)
      if (i != pivot_l) free_idx.push_back(i);
  } else {
    for (int i = 0; i < subset_r; ++i) fixed_part += basis[i];
    for (int i = subset_r; i < m; ++i) free_idx.push_back(i);
  }

  const double scale = 1.0 / std::sqrt(static_cast<double>(m));
  std::vector<CMat> matrices;
  detail::for_each_tuple(static_cast<int>(free_idx.size()), s.order,
                         [&](const std::vector<int>& digits) {
                           CMat a = fixed_part;
                           for (size_t d = 0; d < free_idx.size(); ++d)
                             a += s.points[digits[d]] * basis[free_idx[d]];
                           matrices.push_back(scale * a);
                         });
  const auto expect = static_cast<size_t>(
      std::llround(std::pow(double(s.order), double(free_idx.size()))));
  if (matrices.size() != expect)
    throw InvariantViolation("fec_dm_set produced an unexpected matrix count");

  std::string params = "poly_degree=" + std::to_string(m) + " L=" + std::to_string(s.order);
  params += subset_r == 0 ? " pivot=" + std::to_string(pivot_l)
                          : " subset_r=" + std::to_string(subset_r);
  return detail::make_dm_set(std::move(matrices), DmFamily::kFec, std::move(params), 1e-9);
}

// Parameters of the cyclic-algebra construction. t_m and delta must sit on
// the unit circle (information losslessness); eps optionally rotates both by
// exp(j*eps) to push them off any low-order algebraic relation with the
// signal set without materially changing the resulting gains.
struct CdaParams {
  int m = 2;
  cx t_m{0.0, 1.0};
  cx delta{1.0, 0.0};
  // 1-based pivot positions l_1..l_M; pivot k fixes coefficient f_{0,k-1} to
  // 1. The pivots all act on the shared diagonal symbol row f_{0,.}, so a
  // non-uniform vector fixes the union of its positions and Q shrinks
  // accordingly. Empty means all-ones (the default construction).
  std::vector<int> pivots;
  // Subset selection: fix f_{j,i} = 1 for all j < subset_m, i < subset_r.
  // Zero means "pivot mode" above. (1,1) coincides with the full set.
  int subset_m = 0;
  int subset_r = 0;
  double eps = 0.0;
};

// One cyclic-algebra code matrix for a fully specified symbol grid f (M x M,
// entries from the signal set): entry (u, k) carries the polynomial of
// symbol row (u - k) mod M evaluated at (omega^k * t_M), with delta
// multiplying entries strictly above the diagonal.
inline CMat cda_codeword(const CdaParams& p, const CMat& f) {
  const int m = p.m;
  if (f.rows() != m || f.cols() != m)
    throw ConfigError("cda_codeword symbol grid must be M x M");
  const cx t_eff = p.t_m * std::polar(1.0, p.eps);
  const cx delta_eff = p.delta * std::polar(1.0, p.eps);
  const cx omega = std::polar(1.0, 2.0 * std::numbers::pi / m);
  CMat x(m, m);
  for (int u = 0; u < m; ++u)
    for (int k = 0; k < m; ++k) {
      const int j = ((u - k) % m + m) % m;
      cx point = 1.0, sum = 0.0;
      const cx base = std::pow(omega, k) * t_eff;
      for (int i = 0; i < m; ++i) {
        sum += f(j, i) * point;
        point *= base;
      }
      x(u, k) = (u < k ? delta_eff : cx{1.0, 0.0}) * sum;
    }
  return x;
}

// Dispersion matrices from a cyclic-algebra code over PSK signal set S:
// enumerate all symbol grids with the pivot/subset coefficients fixed to 1,
// evaluate cda_codeword, scale by 1/M. Q = L^(M^2 - #fixed).
inline DispersionMatrixSet cda_dm_set(const Constellation& s, CdaParams p) {
  detail::require_psk(s, "cda_dm_set");
  if (p.m < 2) throw ConfigError("cda_dm_set needs M >= 2");
  if (std::abs(std::abs(p.t_m) - 1.0) > 1e-12 || std::abs(std::abs(p.delta) - 1.0) > 1e-12)
    throw ConfigError("cda parameters t_M and delta must have unit modulus");

  std::set<std::pair<int, int>> fixed;
  if (p.subset_m != 0 || p.subset_r != 0) {
    if (p.subset_m < 1 || p.subset_m > p.m || p.subset_r < 1 || p.subset_r > p.m - 1)
      throw ConfigError("cda subset (m, r) out of range: need 1 <= m <= M, 1 <= r <= M-1");
    for (int j = 0; j < p.subset_m; ++j)
      for (int i = 0; i < p.subset_r; ++i) fixed.emplace(j, i);
  } else {
    std::vector<int> pivots = p.pivots.empty() ? std::vector<int>(p.m, 1) : p.pivots;
    if (static_cast<int>(pivots.size()) != p.m)
      throw ConfigError("cda pivot vector must have M entries");
    for (int l : pivots) {
      if (l < 1 || l > p.m) throw ConfigError("cda pivots are 1-based in [1, M]");
      fixed.emplace(0, l - 1);
    }
  }

  std::vector<std::pair<int, int>> free_pos;
  for (int j = 0; j < p.m; ++j)
    for (int i = 0; i < p.m; ++i)
      if (!fixed.count({j, i})) free_pos.emplace_back(j, i);

  const double scale = 1.0 / p.m;
  std::vector<CMat> matrices;
  CMat grid = CMat::Ones(p.m, p.m);
  detail::for_each_tuple(static_cast<int>(free_pos.size()), s.order,
                         [&](const std::vector<int>& digits) {
                           for (size_t d = 0; d < free_pos.size(); ++d)
                             grid(free_pos[d].first, free_pos[d].second) =
                                 s.points[digits[d]];
                           matrices.push_back(scale * cda_codeword(p, grid));
                         });
  const auto expect = static_cast<size_t>(
      std::llround(std::pow(double(s.order), double(free_pos.size()))));
  if (matrices.size() != expect)
    throw InvariantViolation("cda_dm_set produced an unexpected matrix count");

  std::string params = "M=" + std::to_string(p.m) + " L=" + std::to_string(s.order) +
                       " fixed=" + std::to_string(fixed.size());
  if (p.subset_m != 0)
    params += " subset=(" + std::to_string(p.subset_m) + "," + std::to_string(p.subset_r) + ")";
  return detail::make_dm_set(std::move(matrices), DmFamily::kCda, std::move(params), 1e-9);
}

// The eight 2x2 capacity-optimized matrices bundled as a golden fixture
// (printed to four decimals, hence the loose power tolerance).
inline DispersionMatrixSet fixture_appendix_a() {
  using row = std::array<cx, 2>;
  static const std::array<std::array<row, 2>, 8> data{{
      {{{cx{-0.2609, -0.1663}, cx{0.4274, 1.2471}},
        {cx{-0.3356, -0.1604}, cx{0.0127, 0.1667}}}},
      {{{cx{-0.8256, 0.5391}, cx{0.1502, 0.0534}},
        {cx{-0.0718, -0.4744}, cx{0.3378, -0.8112}}}},
      {{{cx{-0.4371, -0.3679}, cx{-0.5509, -0.3024}},
        {cx{-0.8711, 0.1085}, cx{-0.4850, -0.5224}}}},
      {{{cx{-0.1173, -0.8969}, cx{0.1467, 0.2945}},
        {cx{-0.2049, 0.4875}, cx{0.8546, 0.2524}}}},
      {{{cx{-0.0852, -0.1935}, cx{0.6287, 0.0950}},
        {cx{0.9992, -0.3717}, cx{-0.5449, -0.3428}}}},
      {{{cx{-0.2352, 1.0560}, cx{-0.6267, -0.1166}},
        {cx{0.1142, 0.4872}, cx{-0.4154, 0.0112}}}},
      {{{cx{-0.1408, 0.0534}, cx{-0.4832, 0.8613}},
        {cx{0.6937, 0.6212}, cx{0.1325, -0.3425}}}},
      {{{cx{-0.4118, 0.0950}, cx{0.6746, -0.0363}},
        {cx{-0.5485, 0.3372}, cx{-0.9707, 0.0908}}}},
  }};
  std::vector<CMat> matrices;
  for (const auto& entry : data) {
    CMat a(2, 2);
    a(0, 0) = entry[0][0];
    a(0, 1) = entry[0][1];
    a(1, 0) = entry[1][0];
    a(1, 1) = entry[1][1];
    matrices.push_back(a);
  }
  return detail::make_dm_set(std::move(matrices), DmFamily::kFixture,
                             "bundled 2x2 Q=8 capacity-optimized set", 5e-3);
}

}  // namespace stsk
