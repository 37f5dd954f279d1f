// Deterministic random streams.
//
// The engine is std::mt19937_64 (bit-exact output sequence per the C++
// standard). Samplers are written out here instead of using the standard
// <random> distributions, whose output is implementation-defined; this keeps
// every simulation trace reproducible from (seed, consumption order) alone.

#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace gripsim {

/// SplitMix64 scramble, used to derive well-separated substream seeds.
inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

class RngStream {
 public:
  explicit RngStream(std::uint64_t seed) : engine_(splitmix64(seed)) {}

  /// Independent child stream; children with distinct keys do not overlap
  /// in any practical sense and are insensitive to draw order in the parent.
  static RngStream substream(std::uint64_t seed, std::uint64_t key) {
    return RngStream(splitmix64(seed) ^ splitmix64(key * 0xD2B74407B1CE6E93ULL + 1));
  }

  /// Uniform double in [0, 1) with 53 random mantissa bits.
  double uniform01() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

  bool bernoulli(double p) { return uniform01() < p; }

  /// Standard normal via Box-Muller; consumes two draws per pair.
  double normal() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    double u1 = uniform01();
    double u2 = uniform01();
    while (u1 <= 0.0) u1 = uniform01();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double a = 2.0 * 3.14159265358979323846 * u2;
    spare_ = r * std::sin(a);
    have_spare_ = true;
    return r * std::cos(a);
  }

  /// Truncated normal on [lo, hi] by rejection, falling back to a uniform
  /// draw if the window is far in the tail. Always returns a value in range.
  double truncated_normal(double mean, double sd, double lo, double hi) {
    if (sd <= 0.0) return std::min(hi, std::max(lo, mean));
    for (int i = 0; i < 256; ++i) {
      const double x = mean + sd * normal();
      if (x >= lo && x <= hi) return x;
    }
    return uniform(lo, hi);
  }

 private:
  std::mt19937_64 engine_;
  double spare_ = 0.0;
  bool have_spare_ = false;
};

}  // namespace gripsim
