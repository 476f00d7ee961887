#pragma once

#include "stsk/common.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>
#include <unordered_set>
#include <vector>

namespace stsk {

enum class ConstellationKind { kPsk, kSquareQam, kStarQam };

inline const char* to_string(ConstellationKind k) {
  switch (k) {
    case ConstellationKind::kPsk: return "psk";
    case ConstellationKind::kSquareQam: return "sqam";
    case ConstellationKind::kStarQam: return "star";
  }
  return "?";
}

// Multiplicative symmetry structure of a signal set: every point factors
// uniquely as (element of s_sym) * (element of s_prime). For PSK the whole
// set is the rotation group; for square QAM s_sym = {1, j, -1, -j} and
// s_prime the first-quadrant points; for star QAM s_sym holds the phase
// rotations and s_prime the ring radii.
struct SymmetryDecomposition {
  std::vector<cx> s_sym;
  std::vector<cx> s_prime;
  // S_{L/4} for square QAM, the ring radii for star QAM, {1} for PSK.
  std::vector<cx> quadrant_set;
};

struct Constellation {
  ConstellationKind kind;
  int order = 0;  // L
  std::vector<cx> points;
  cx generator;  // g, the elementary rotation of s_sym
  SymmetryDecomposition sym;
  double star_ring_ratio = 0.0;  // only meaningful for kStarQam
};

namespace detail {

inline bool is_power_of_two(long v) { return v >= 1 && (v & (v - 1)) == 0; }

inline bool is_power_of_four(long v) {
  return is_power_of_two(v) && (v & 0x5555555555555555ll) != 0 && v >= 4;
}

// Exhaustive check that (s_sym, s_prime) -> product is a bijection onto the
// point set; guards every constructor.
inline void check_unique_factorization(const Constellation& c) {
  if (c.sym.s_sym.size() * c.sym.s_prime.size() != c.points.size())
    throw InvariantViolation("symmetry decomposition cardinality mismatch");
  std::unordered_set<std::string> target;
  for (const auto& p : c.points) target.insert(canonical_key(CMat::Constant(1, 1, p)));
  std::unordered_set<std::string> seen;
  for (const auto& s : c.sym.s_sym)
    for (const auto& v : c.sym.s_prime) {
      const auto key = canonical_key(CMat::Constant(1, 1, s * v));
      if (!target.count(key))
        throw InvariantViolation("symmetry product escapes the constellation");
      if (!seen.insert(key).second)
        throw InvariantViolation("symmetry factorization is not unique");
    }
}

}  // namespace detail

// L-ary PSK, points exp(j*2*pi*k/L) in increasing phase order. L must be a
// power of two; L = 1 is the degenerate single-point set {1} used by
// index-modulation-only configurations.
inline Constellation make_psk(int order) {
  if (!detail::is_power_of_two(order))
    throw ConfigError("psk order must be a power of two, got " + std::to_string(order));
  Constellation c;
  c.kind = ConstellationKind::kPsk;
  c.order = order;
  c.generator = std::polar(1.0, 2.0 * std::numbers::pi / order);
  c.points.reserve(order);
  for (int k = 0; k < order; ++k)
    c.points.push_back(std::polar(1.0, 2.0 * std::numbers::pi * k / order));
  c.sym.s_sym = c.points;
  c.sym.s_prime = {cx{1.0, 0.0}};
  c.sym.quadrant_set = {cx{1.0, 0.0}};
  detail::check_unique_factorization(c);
  return c;
}

// Square L-QAM (L = 4^a), odd-integer grid scaled to unit average energy.
// Points are listed in reading order: top grid row first (largest imaginary
// part), real part increasing within a row.
inline Constellation make_square_qam(int order) {
  if (!detail::is_power_of_four(order))
    throw ConfigError("square qam order must be a power of four >= 4, got " +
                      std::to_string(order));
  const int side = static_cast<int>(std::lround(std::sqrt(double(order))));
  const double scale = 1.0 / std::sqrt(2.0 * (order - 1) / 3.0);
  Constellation c;
  c.kind = ConstellationKind::kSquareQam;
  c.order = order;
  c.generator = cx{0.0, 1.0};
  for (int row = 0; row < side; ++row) {
    const double im = (side - 1 - 2 * row) * scale;
    for (int col = 0; col < side; ++col) {
      const double re = (2 * col - (side - 1)) * scale;
      c.points.push_back({re, im});
    }
  }
  c.sym.s_sym = {cx{1, 0}, cx{0, 1}, cx{-1, 0}, cx{0, -1}};
  for (const auto& p : c.points)
    if (p.real() > 0 && p.imag() > 0) c.sym.quadrant_set.push_back(p);
  c.sym.s_prime = c.sym.quadrant_set;
  detail::check_unique_factorization(c);
  return c;
}

// Star L-QAM (L = 4^a): 2^(a-1) concentric rings of 2^(a+1) equally spaced
// phases, ring radii in geometric progression (ratio > 1), scaled to unit
// average energy. Points are listed ring-major (innermost ring first),
// phase increasing within a ring.
inline Constellation make_star_qam(int order, double ring_ratio = 2.0) {
  if (!detail::is_power_of_four(order))
    throw ConfigError("star qam order must be a power of four >= 4, got " +
                      std::to_string(order));
  if (!(ring_ratio > 1.0))
    throw ConfigError("star qam ring ratio must exceed 1");
  int a = 0;
  for (long v = order; v > 1; v >>= 2) ++a;
  const int rings = 1 << (a - 1);
  const int phases = 1 << (a + 1);
  double energy = 0.0;
  for (int k = 0; k < rings; ++k) energy += std::pow(ring_ratio, 2 * k);
  const double base = std::sqrt(static_cast<double>(rings) / energy);
  Constellation c;
  c.kind = ConstellationKind::kStarQam;
  c.order = order;
  c.star_ring_ratio = ring_ratio;
  c.generator = std::polar(1.0, 2.0 * std::numbers::pi / phases);
  for (int k = 0; k < rings; ++k) {
    const double radius = base * std::pow(ring_ratio, k);
    c.sym.quadrant_set.push_back(cx{radius, 0.0});
    for (int q = 0; q < phases; ++q)
      c.points.push_back(std::polar(radius, 2.0 * std::numbers::pi * q / phases));
  }
  for (int q = 0; q < phases; ++q)
    c.sym.s_sym.push_back(std::polar(1.0, 2.0 * std::numbers::pi * q / phases));
  c.sym.s_prime = c.sym.quadrant_set;
  detail::check_unique_factorization(c);
  return c;
}

inline const SymmetryDecomposition& symmetry_decompose(const Constellation& c) {
  return c.sym;
}

// Config-file syntax: "psk:L", "sqam:L", "star:L:ratio" (ratio optional).
inline Constellation parse_constellation(const std::string& spec) {
  std::vector<std::string> parts;
  size_t start = 0;
  while (start <= spec.size()) {
    const size_t colon = spec.find(':', start);
    parts.push_back(spec.substr(start, colon == std::string::npos ? colon : colon - start));
    if (colon == std::string::npos) break;
    start = colon + 1;
  }
  auto parse_int = [&spec](const std::string& s) {
    try {
      size_t used = 0;
      const int v = std::stoi(s, &used);
      if (used != s.size()) throw std::invalid_argument(s);
      return v;
    } catch (const std::exception&) {
      throw ConfigError("bad integer '" + s + "' in constellation spec '" + spec + "'");
    }
  };
  if (parts.size() == 2 && parts[0] == "psk") return make_psk(parse_int(parts[1]));
  if (parts.size() == 2 && parts[0] == "sqam") return make_square_qam(parse_int(parts[1]));
  if ((parts.size() == 2 || parts.size() == 3) && parts[0] == "star") {
    double ratio = 2.0;
    if (parts.size() == 3) {
      try {
        size_t used = 0;
        ratio = std::stod(parts[2], &used);
        if (used != parts[2].size()) throw std::invalid_argument(parts[2]);
      } catch (const std::exception&) {
        throw ConfigError("bad ring ratio in constellation spec '" + spec + "'");
      }
    }
    return make_star_qam(parse_int(parts[1]), ratio);
  }
  throw ConfigError("unrecognized constellation spec '" + spec +
                    "' (expected psk:L, sqam:L, or star:L:ratio)");
}

inline std::string constellation_spec(const Constellation& c) {
  std::string s = std::string(to_string(c.kind)) + ":" + std::to_string(c.order);
  if (c.kind == ConstellationKind::kStarQam)
    s += ":" + std::to_string(c.star_ring_ratio);
  return s;
}

}  // namespace stsk
