#pragma once

#include "stsk/common.hpp"

#include <array>
#include <cstdint>
#include <numbers>

namespace stsk {

// Philox 4x32, 10 rounds: a counter-based generator. Each 128-bit counter
// block maps independently to 128 output bits under a 64-bit key, so any
// number of logical streams can be derived cheaply and drawn from in any
// order — the property the simulation harness relies on for reproducible
// trial-level parallelism.
struct Philox4x32 {
  static constexpr uint32_t kMul0 = 0xD2511F53u;
  static constexpr uint32_t kMul1 = 0xCD9E8D57u;
  static constexpr uint32_t kKeyBump0 = 0x9E3779B9u;
  static constexpr uint32_t kKeyBump1 = 0xBB67AE85u;

  static std::array<uint32_t, 4> block(std::array<uint32_t, 2> key,
                                       std::array<uint32_t, 4> ctr) {
    for (int round = 0; round < 10; ++round) {
      const uint64_t p0 = static_cast<uint64_t>(ctr[0]) * kMul0;
      const uint64_t p1 = static_cast<uint64_t>(ctr[2]) * kMul1;
      const uint32_t hi0 = static_cast<uint32_t>(p0 >> 32);
      const uint32_t lo0 = static_cast<uint32_t>(p0);
      const uint32_t hi1 = static_cast<uint32_t>(p1 >> 32);
      const uint32_t lo1 = static_cast<uint32_t>(p1);
      ctr = {hi1 ^ ctr[1] ^ key[0], lo1, hi0 ^ ctr[3] ^ key[1], lo0};
      key[0] += kKeyBump0;
      key[1] += kKeyBump1;
    }
    return ctr;
  }
};

// 64-bit finalizer (splitmix64); bijective, used to spread stream ids.
inline uint64_t mix64(uint64_t x) {
  x += 0x9E3779B97F4A7C15ull;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
  return x ^ (x >> 31);
}

// Namespaces for independent random streams. Every consumer of randomness
// names its purpose plus up to two coordinates (e.g. SNR-point index and
// trial index); equal (seed, domain, a, b) always replays the same draws.
enum class StreamDomain : uint64_t {
  kChannel = 1,
  kNoise = 2,
  kData = 3,
  kCsirError = 4,
  kCoCandidate = 5,
  kCapacity = 6,
  kFuzz = 7,
  kGeneral = 8,
};

class RandomStream {
 public:
  RandomStream(uint64_t seed, StreamDomain domain, uint64_t a = 0, uint64_t b = 0)
      : key_{static_cast<uint32_t>(seed), static_cast<uint32_t>(seed >> 32)},
        stream_(mix64(static_cast<uint64_t>(domain) ^ mix64(a ^ mix64(b)))) {}

  uint32_t next_u32() {
    if (pos_ == 4) refill();
    return buf_[pos_++];
  }

  uint64_t next_u64() {
    const uint64_t lo = next_u32();
    const uint64_t hi = next_u32();
    return (hi << 32) | lo;
  }

  // Uniform on (0, 1]; never returns 0, so it is safe under log().
  double next_unit() {
    return (static_cast<double>(next_u64() >> 11) + 1.0) * 0x1p-53;
  }

  // Uniform on [0, 1).
  double next_half_open() {
    return static_cast<double>(next_u64() >> 11) * 0x1p-53;
  }

  // Unbiased uniform integer in [0, n).
  uint64_t next_below(uint64_t n) {
    const uint64_t threshold = n == 0 ? 0 : (0 - n) % n;  // 2^64 mod n
    for (;;) {
      const uint64_t r = next_u64();
      if (r >= threshold) return r % n;
    }
  }

  // Circularly-symmetric complex Gaussian with E|z|^2 = 1
  // (real and imaginary parts each N(0, 1/2)).
  cx next_cgauss() {
    const double radius = std::sqrt(-std::log(next_unit()));
    const double angle = 2.0 * std::numbers::pi * next_half_open();
    return {radius * std::cos(angle), radius * std::sin(angle)};
  }

  // Complex Gaussian with E|z|^2 = variance.
  cx next_cgauss(double variance) { return std::sqrt(variance) * next_cgauss(); }

 private:
  void refill() {
    buf_ = Philox4x32::block(key_, {static_cast<uint32_t>(counter_),
                                    static_cast<uint32_t>(counter_ >> 32),
                                    static_cast<uint32_t>(stream_),
                                    static_cast<uint32_t>(stream_ >> 32)});
    ++counter_;
    pos_ = 0;
  }

  std::array<uint32_t, 2> key_;
  uint64_t stream_ = 0;
  uint64_t counter_ = 0;
  std::array<uint32_t, 4> buf_{};
  int pos_ = 4;
};

// Fill helpers with a fixed, documented entry order (column-major).
inline CMat random_cgauss_matrix(int rows, int cols, RandomStream& rs,
                                 double variance = 1.0) {
  CMat m(rows, cols);
  for (int c = 0; c < cols; ++c)
    for (int r = 0; r < rows; ++r) m(r, c) = rs.next_cgauss(variance);
  return m;
}

}  // namespace stsk
