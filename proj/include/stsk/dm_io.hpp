#pragma once

#include "stsk/common.hpp"
#include "stsk/dispersion.hpp"

#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

namespace stsk {

// Complex literal "re+imj" (e.g. "1.5-0.25j", "-3e-05+1j"). 17 significant
// digits guarantee doubles survive a text round-trip bit-exactly.
inline std::string format_complex(cx z) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", z.real());
  std::string out = buf;
  std::snprintf(buf, sizeof(buf), "%+.17g", z.imag());
  out += buf;
  out += 'j';
  return out;
}

inline cx parse_complex(const std::string& text) {
  const std::string err = "bad complex literal '" + text + "' (want re+imj)";
  if (text.size() < 2 || text.back() != 'j') throw ConfigError(err);
  const std::string body = text.substr(0, text.size() - 1);
  // Split at the sign of the imaginary part: the last +/- that neither
  // starts the string nor follows an exponent marker.
  size_t split = std::string::npos;
  for (size_t i = body.size(); i-- > 1;) {
    if ((body[i] == '+' || body[i] == '-') && body[i - 1] != 'e' && body[i - 1] != 'E') {
      split = i;
      break;
    }
  }
  if (split == std::string::npos) throw ConfigError(err);
  try {
    size_t used = 0;
    const double re = std::stod(body.substr(0, split), &used);
    if (used != split) throw ConfigError(err);
    const std::string imag_text = body.substr(split);
    const double im = std::stod(imag_text, &used);
    if (used != imag_text.size()) throw ConfigError(err);
    return {re, im};
  } catch (const ConfigError&) {
    throw;
  } catch (const std::exception&) {
    throw ConfigError(err);
  }
}

// Plain-text matrix file: header "Q M T family", then Q blocks of M rows of
// T space-separated complex entries. Values round-trip bit-exactly.
inline void write_dm_set(std::ostream& os, const DispersionMatrixSet& set) {
  os << set.q << ' ' << set.m << ' ' << set.t << ' ' << to_string(set.family) << '\n';
  for (const auto& a : set.matrices)
    for (int r = 0; r < set.m; ++r) {
      for (int c = 0; c < set.t; ++c) os << (c ? " " : "") << format_complex(a(r, c));
      os << '\n';
    }
}

inline DispersionMatrixSet read_dm_set(std::istream& is) {
  int q = 0, m = 0, t = 0;
  std::string family;
  if (!(is >> q >> m >> t >> family))
    throw ConfigError("dm file: bad header (want 'Q M T family')");
  if (q < 1 || m < 1 || t < 1) throw ConfigError("dm file: nonpositive dimensions");
  std::vector<CMat> matrices(q, CMat(m, t));
  std::string token;
  for (int i = 0; i < q; ++i)
    for (int r = 0; r < m; ++r)
      for (int c = 0; c < t; ++c) {
        if (!(is >> token))
          throw ConfigError("dm file: truncated at matrix " + std::to_string(i));
        matrices[i](r, c) = parse_complex(token);
      }
  // Exported fixtures are printed at full precision, but third-party files
  // may carry rounded entries; accept the fixture tolerance here.
  return detail::make_dm_set(std::move(matrices), dm_family_from_string(family),
                             "loaded from file", 5e-3);
}

inline std::string dm_set_to_string(const DispersionMatrixSet& set) {
  std::ostringstream os;
  write_dm_set(os, set);
  return os.str();
}

inline DispersionMatrixSet dm_set_from_string(const std::string& text) {
  std::istringstream is(text);
  return read_dm_set(is);
}

}  // namespace stsk
