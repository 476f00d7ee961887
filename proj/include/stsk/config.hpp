#pragma once

#include "stsk/co_search.hpp"
#include "stsk/codebook.hpp"
#include "stsk/common.hpp"
#include "stsk/constellation.hpp"
#include "stsk/dispersion.hpp"
#include "stsk/dm_io.hpp"

#include <cstdint>
#include <fstream>
#include <map>
#include <numbers>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

namespace stsk {

enum class DetectorKind { kMl, kSsml, kMf, kSemiblind };

struct DetectorSpec {
  DetectorKind kind = DetectorKind::kMl;
  int mf_shortlist = 1;     // for kMf
  int semiblind_iters = 3;  // for kSemiblind

  std::string to_string() const {
    switch (kind) {
      case DetectorKind::kMl: return "ml";
      case DetectorKind::kSsml: return "ssml";
      case DetectorKind::kMf: return "mf:" + std::to_string(mf_shortlist);
      case DetectorKind::kSemiblind: return "semiblind:" + std::to_string(semiblind_iters);
    }
    return "?";
  }
};

// Detector grammar: "ml" | "ssml" | "mf:k" | "semiblind:iters".
inline DetectorSpec parse_detector(const std::string& text) {
  DetectorSpec d;
  const size_t colon = text.find(':');
  const std::string head = text.substr(0, colon);
  const std::string arg = colon == std::string::npos ? "" : text.substr(colon + 1);
  auto want_int = [&](const std::string& s, const char* what) {
    try {
      size_t used = 0;
      const int v = std::stoi(s, &used);
      if (used != s.size()) throw std::invalid_argument(s);
      return v;
    } catch (const std::exception&) {
      throw ConfigError(std::string("detector: bad ") + what + " in '" + text + "'");
    }
  };
  if (head == "ml" && arg.empty()) {
    d.kind = DetectorKind::kMl;
  } else if (head == "ssml" && arg.empty()) {
    d.kind = DetectorKind::kSsml;
  } else if (head == "mf") {
    d.kind = DetectorKind::kMf;
    if (!arg.empty()) d.mf_shortlist = want_int(arg, "shortlist size");
  } else if (head == "semiblind") {
    d.kind = DetectorKind::kSemiblind;
    if (!arg.empty()) d.semiblind_iters = want_int(arg, "iteration count");
  } else {
    throw ConfigError("unknown detector '" + text + "' (want ml|ssml|mf:k|semiblind:iters)");
  }
  return d;
}

// Simulation campaign description. Parsed from a line-oriented "key = value"
// file; every field can be overridden from the command line.
struct SimConfig {
  int m = 2;
  int n = 2;
  int t = 2;
  int q = 0;  // 0 = take Q from the resolved DM set
  std::string constellation = "psk:2";
  std::string dm = "fixture";
  DetectorSpec detector;
  std::vector<double> snr_grid_db;
  long max_trials = 10'000'000;
  int min_errors = 100;
  int capacity_samples = 20'000;
  double csir_sigma = 0.0;
  uint64_t master_seed = 1;

  std::string canonical_text() const {
    std::ostringstream os;
    os << "m=" << m << "\nn=" << n << "\nt=" << t << "\nq=" << q
       << "\nconstellation=" << constellation << "\ndm=" << dm
       << "\ndetector=" << detector.to_string() << "\nsnr_grid_db=";
    for (size_t i = 0; i < snr_grid_db.size(); ++i) {
      char buf[32];
      std::snprintf(buf, sizeof(buf), "%.17g", snr_grid_db[i]);
      os << (i ? "," : "") << buf;
    }
    os << "\nmax_trials=" << max_trials << "\nmin_errors=" << min_errors
       << "\ncapacity_samples=" << capacity_samples;
    char sigma[32];
    std::snprintf(sigma, sizeof(sigma), "%.17g", csir_sigma);
    os << "\ncsir_sigma=" << sigma << "\nmaster_seed=" << master_seed << "\n";
    return os.str();
  }
};

namespace detail {

inline std::string trim(const std::string& s) {
  const auto from = s.find_first_not_of(" \t\r\n");
  if (from == std::string::npos) return "";
  const auto to = s.find_last_not_of(" \t\r\n");
  return s.substr(from, to - from + 1);
}

inline std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream is(s);
  while (std::getline(is, cur, sep)) out.push_back(trim(cur));
  if (!s.empty() && s.back() == sep) out.push_back("");
  return out;
}

inline double parse_real(const std::string& s, const std::string& what) {
  try {
    size_t used = 0;
    const double v = std::stod(s, &used);
    if (used != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw ConfigError(what + ": bad real '" + s + "'");
  }
}

inline long parse_int(const std::string& s, const std::string& what) {
  try {
    size_t used = 0;
    const long v = std::stol(s, &used);
    if (used != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw ConfigError(what + ": bad integer '" + s + "'");
  }
}

inline uint64_t parse_u64(const std::string& s, const std::string& what) {
  try {
    size_t used = 0;
    const uint64_t v = std::stoull(s, &used);
    if (used != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw ConfigError(what + ": bad unsigned integer '" + s + "'");
  }
}

// Complex value in a dm spec: either the literal "re+imj" form or the
// angular shorthand "expjpi:X" meaning exp(j*pi*X).
inline cx parse_complex_or_angle(const std::string& s) {
  if (s.rfind("expjpi:", 0) == 0)
    return std::polar(1.0, std::numbers::pi * parse_real(s.substr(7), "expjpi"));
  return parse_complex(s);
}

inline std::vector<double> parse_real_list(const std::string& s, const std::string& what) {
  std::vector<double> out;
  if (trim(s).empty()) return out;
  for (const auto& item : split(s, ',')) out.push_back(parse_real(item, what));
  return out;
}

}  // namespace detail

// Dispersion-matrix spec grammar, semicolon-separated:
//   "fec[; poly=c0,c1,...][; pivot=l][; r=k][; construction=psk:L]"
//   "cda[; m=M][; t=<cx|expjpi:X>][; delta=<cx|expjpi:X>][; pivots=l1,...,lM]
//        [; subset=m,r][; eps=E][; construction=psk:L]"
//   "co[; q=Q][; candidates=C][; samples=S][; snr=DB][; seed=U64]"
//   "fixture"
//   "file; path=PATH"
// The construction key lets FEC/CDA matrices be built over a different PSK
// order than the signaling constellation (the DM-set recipes need PSK input
// even when transmission uses QAM).
struct DmSpec {
  std::string family;
  std::map<std::string, std::string> kv;
};

inline DmSpec parse_dm_spec(const std::string& text) {
  auto parts = detail::split(text, ';');
  if (parts.empty() || parts.front().empty()) throw ConfigError("empty dm spec");
  DmSpec spec;
  spec.family = parts.front();
  for (size_t i = 1; i < parts.size(); ++i) {
    if (parts[i].empty()) continue;
    const auto eq = parts[i].find('=');
    if (eq == std::string::npos)
      throw ConfigError("dm spec: expected key=value, got '" + parts[i] + "'");
    spec.kv[detail::trim(parts[i].substr(0, eq))] = detail::trim(parts[i].substr(eq + 1));
  }
  return spec;
}

// Resolve a dm spec into an actual matrix set. `signaling` is the modulation
// constellation from the config; construction=psk:L overrides the alphabet
// the FEC/CDA recipes enumerate over. CO search parameters that are absent
// fall back to (q_hint, defaults, master seed).
inline DispersionMatrixSet build_dm_set(const DmSpec& spec, const Constellation& signaling,
                                        int m, int t, int q_hint, uint64_t master_seed) {
  auto get = [&](const char* key) -> std::optional<std::string> {
    const auto it = spec.kv.find(key);
    if (it == spec.kv.end()) return std::nullopt;
    return it->second;
  };
  Constellation build_set = signaling;
  if (const auto c = get("construction")) build_set = parse_constellation(*c);

  if (spec.family == "fixture") {
    return fixture_appendix_a();
  }
  if (spec.family == "file") {
    const auto path = get("path");
    if (!path) throw ConfigError("dm spec: file family needs path=");
    std::ifstream in(*path);
    if (!in) throw ConfigError("dm spec: cannot open '" + *path + "'");
    return read_dm_set(in);
  }
  if (spec.family == "fec") {
    std::vector<cx> poly;
    if (const auto p = get("poly")) {
      for (const auto& item : detail::split(*p, ','))
        poly.push_back(detail::parse_complex_or_angle(item));
    } else if (m == 2) {
      poly = {cx{0.0, -1.0}, cx{0.0, 0.0}};  // x^2 - j, the stock degree-2 choice
    } else {
      throw ConfigError("dm spec: fec needs poly= for M != 2");
    }
    if (static_cast<int>(poly.size()) != m)
      throw ConfigError("dm spec: fec poly degree must equal M");
    const int pivot = get("pivot") ? static_cast<int>(detail::parse_int(*get("pivot"), "fec pivot")) : 1;
    const int r = get("r") ? static_cast<int>(detail::parse_int(*get("r"), "fec r")) : 0;
    return fec_dm_set(build_set, poly, pivot, r);
  }
  if (spec.family == "cda") {
    CdaParams p;
    p.m = get("m") ? static_cast<int>(detail::parse_int(*get("m"), "cda m")) : m;
    p.t_m = get("t") ? detail::parse_complex_or_angle(*get("t")) : cx{0.0, 1.0};
    p.delta = get("delta") ? detail::parse_complex_or_angle(*get("delta"))
                           : std::polar(1.0, 3.0 * std::numbers::pi / 8.0);
    if (const auto piv = get("pivots")) {
      for (const auto& item : detail::split(*piv, ','))
        p.pivots.push_back(static_cast<int>(detail::parse_int(item, "cda pivots")));
    }
    if (const auto sub = get("subset")) {
      const auto mr = detail::split(*sub, ',');
      if (mr.size() != 2) throw ConfigError("dm spec: cda subset wants m,r");
      p.subset_m = static_cast<int>(detail::parse_int(mr[0], "cda subset m"));
      p.subset_r = static_cast<int>(detail::parse_int(mr[1], "cda subset r"));
    }
    if (const auto e = get("eps")) p.eps = detail::parse_real(*e, "cda eps");
    return cda_dm_set(build_set, p);
  }
  if (spec.family == "co") {
    const int q = get("q") ? static_cast<int>(detail::parse_int(*get("q"), "co q")) : q_hint;
    if (q < 1) throw ConfigError("dm spec: co needs q= (or scheme q)");
    const int candidates =
        get("candidates") ? static_cast<int>(detail::parse_int(*get("candidates"), "co candidates")) : 1000;
    const int samples =
        get("samples") ? static_cast<int>(detail::parse_int(*get("samples"), "co samples")) : 10'000;
    const double snr = get("snr") ? detail::parse_real(*get("snr"), "co snr") : 10.0;
    const uint64_t seed = get("seed") ? detail::parse_u64(*get("seed"), "co seed") : master_seed;
    return co_dm_search(m, t, q, signaling, candidates, samples, seed, snr);
  }
  throw ConfigError("unknown dm family '" + spec.family +
                    "' (want fec|cda|co|fixture|file)");
}

// Parse one "key = value" assignment into the config. `where` prefixes error
// messages ("file.cfg line 3", "--flag", ...).
inline void apply_config_entry(SimConfig& cfg, const std::string& key,
                               const std::string& value, const std::string& where) {
  auto ctx = [&](const std::string& msg) { return ConfigError(where + ": " + msg); };
  try {
    if (key == "m") cfg.m = static_cast<int>(detail::parse_int(value, key));
    else if (key == "n") cfg.n = static_cast<int>(detail::parse_int(value, key));
    else if (key == "t") cfg.t = static_cast<int>(detail::parse_int(value, key));
    else if (key == "q") cfg.q = static_cast<int>(detail::parse_int(value, key));
    else if (key == "constellation") { parse_constellation(value); cfg.constellation = value; }
    else if (key == "dm") { parse_dm_spec(value); cfg.dm = value; }
    else if (key == "detector") cfg.detector = parse_detector(value);
    else if (key == "snr_grid_db") cfg.snr_grid_db = detail::parse_real_list(value, key);
    else if (key == "max_trials") cfg.max_trials = detail::parse_int(value, key);
    else if (key == "min_errors") cfg.min_errors = static_cast<int>(detail::parse_int(value, key));
    else if (key == "capacity_samples") cfg.capacity_samples = static_cast<int>(detail::parse_int(value, key));
    else if (key == "csir_sigma") cfg.csir_sigma = detail::parse_real(value, key);
    else if (key == "master_seed") cfg.master_seed = detail::parse_u64(value, key);
    else throw ConfigError("unknown key '" + key + "'");
  } catch (const ConfigError& e) {
    throw ctx(e.what());
  }
}

inline SimConfig parse_config_text(const std::string& text, const std::string& source) {
  SimConfig cfg;
  std::istringstream is(text);
  std::string line;
  int lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    const std::string t = detail::trim(line);
    if (t.empty() || t[0] == '#') continue;
    const auto eq = t.find('=');
    const std::string where = source + " line " + std::to_string(lineno);
    if (eq == std::string::npos)
      throw ConfigError(where + ": expected 'key = value', got '" + t + "'");
    apply_config_entry(cfg, detail::trim(t.substr(0, eq)), detail::trim(t.substr(eq + 1)),
                       where);
  }
  return cfg;
}

inline SimConfig load_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config_text(buf.str(), path);
}

// Validate cross-field invariants and expand the config into a codebook.
inline StskCodebook build_codebook(const SimConfig& cfg) {
  if (cfg.m != cfg.t)
    throw ConfigError("config requires M = T (got m=" + std::to_string(cfg.m) +
                      ", t=" + std::to_string(cfg.t) + ")");
  if (cfg.n < 1) throw ConfigError("config needs n >= 1");
  const Constellation s = parse_constellation(cfg.constellation);
  auto set = build_dm_set(parse_dm_spec(cfg.dm), s, cfg.m, cfg.t, cfg.q, cfg.master_seed);
  if (set.m != cfg.m || set.t != cfg.t)
    throw ConfigError("dm set dimensions disagree with scheme (m=" + std::to_string(set.m) +
                      ", t=" + std::to_string(set.t) + ")");
  if (cfg.q != 0 && set.q != cfg.q)
    throw ConfigError("dm set has Q=" + std::to_string(set.q) + " but config says Q=" +
                      std::to_string(cfg.q));
  return expand(s, std::move(set));
}

// FNV-1a over the canonical text; stamped into CSV provenance comments.
inline uint64_t config_fingerprint(const SimConfig& cfg) {
  uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : cfg.canonical_text()) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

}  // namespace stsk
