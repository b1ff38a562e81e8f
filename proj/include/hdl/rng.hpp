#pragma once

#include <array>
#include <cmath>
#include <cstdint>

namespace hdl {

/// Counter-based PRNG (Philox4x32-10). A (seed, stream) pair fully determines
/// the sequence, so parallel trials can draw from disjoint streams and still
/// reproduce bit-identically regardless of scheduling. All samplers below use
/// explicit algorithms (no std::*_distribution) so output does not depend on
/// the standard library implementation.
class Philox {
 public:
  explicit Philox(std::uint64_t seed, std::uint64_t stream = 0)
      : key_{static_cast<std::uint32_t>(seed),
             static_cast<std::uint32_t>(seed >> 32)},
        stream_(stream) {}

  std::uint64_t next_u64() {
    if (buf_pos_ >= 2) {
      refill();
    }
    return buf_[buf_pos_++];
  }

  /// Uniform on [0, 1) with 53 random bits.
  double uniform01() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  }

  /// Uniform on (0, 1], safe as a log() argument.
  double uniform01_pos() {
    return static_cast<double>((next_u64() >> 11) + 1) * 0x1.0p-53;
  }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

  /// Standard normal via Box-Muller; consumes exactly two counter words.
  double normal() {
    const double u1 = uniform01_pos();
    const double u2 = uniform01();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * kPi * u2);
  }

  double normal(double mean, double sd) { return mean + sd * normal(); }

  /// Unit-variance Laplace via inverse CDF.
  double laplace() {
    const double u = static_cast<double>((next_u64() >> 12) + 1) * 0x1.0p-52;
    const double v = u - 0.5;  // strictly inside (-0.5, 0.5]
    const double b = 1.0 / std::sqrt(2.0);
    if (v < 0.0) {
      return b * std::log(1.0 + 2.0 * v);
    }
    return -b * std::log(1.0 - 2.0 * v + 0x1.0p-53);
  }

  bool coin() { return (next_u64() & 1u) != 0; }

  /// Uniform integer in [0, bound). bound must be >= 1.
  int uniform_index(int bound) {
    const int idx = static_cast<int>(uniform01() * static_cast<double>(bound));
    return idx >= bound ? bound - 1 : idx;
  }

  /// One raw Philox4x32-10 block; exposed for test vectors.
  static std::array<std::uint32_t, 4> block(
      const std::array<std::uint32_t, 4>& counter,
      const std::array<std::uint32_t, 2>& key) {
    std::array<std::uint32_t, 4> ctr = counter;
    std::array<std::uint32_t, 2> k = key;
    for (int round = 0; round < 10; ++round) {
      const std::uint64_t p0 = std::uint64_t{0xD2511F53u} * ctr[0];
      const std::uint64_t p1 = std::uint64_t{0xCD9E8D57u} * ctr[2];
      ctr = {static_cast<std::uint32_t>(p1 >> 32) ^ ctr[1] ^ k[0],
             static_cast<std::uint32_t>(p1),
             static_cast<std::uint32_t>(p0 >> 32) ^ ctr[3] ^ k[1],
             static_cast<std::uint32_t>(p0)};
      k[0] += 0x9E3779B9u;
      k[1] += 0xBB67AE85u;
    }
    return ctr;
  }

 private:
  static constexpr double kPi = 3.14159265358979323846;

  void refill() {
    const std::array<std::uint32_t, 4> counter = {
        static_cast<std::uint32_t>(pos_), static_cast<std::uint32_t>(pos_ >> 32),
        static_cast<std::uint32_t>(stream_),
        static_cast<std::uint32_t>(stream_ >> 32)};
    const auto out = block(counter, key_);
    buf_[0] = (std::uint64_t{out[1]} << 32) | out[0];
    buf_[1] = (std::uint64_t{out[3]} << 32) | out[2];
    buf_pos_ = 0;
    ++pos_;
  }

  std::array<std::uint32_t, 2> key_;
  std::uint64_t stream_ = 0;
  std::uint64_t pos_ = 0;
  std::array<std::uint64_t, 2> buf_{};
  int buf_pos_ = 2;
};

}  // namespace hdl
