#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace pim {

/// Stochastic-simulation RNG. The variate transforms are written out here
/// rather than taken from <random>'s distributions so that two builds of the
/// toolkit produce bit-identical streams (the standard pins down the engine
/// but not the distributions).
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  /// Uniform on (0, 1); never returns 0, so log() below is safe.
  double uniform() {
    return (static_cast<double>(engine_() >> 11) + 0.5) * 0x1.0p-53;
  }

  double exponential(double rate) { return -std::log(uniform()) / rate; }

  /// Uniform integer in [0, n); n must be positive.
  std::uint64_t below(std::uint64_t n) {
    std::uint64_t threshold = (0 - n) % n;
    for (;;) {
      std::uint64_t x = engine_();
      if (x >= threshold) return x % n;
    }
  }

 private:
  std::mt19937_64 engine_;
};

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ull;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
  return x ^ (x >> 31);
}

/// Independent per-replicate seed derived from the run seed; stable across
/// execution order, so parallel and serial ensembles see the same streams.
inline std::uint64_t replicate_seed(std::uint64_t base, int replicate) {
  return splitmix64(base + 0x9E3779B97F4A7C15ull *
                               static_cast<std::uint64_t>(replicate + 1));
}

}  // namespace pim
