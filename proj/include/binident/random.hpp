#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace binident {

// splitmix64 finalizer; the mixing hash behind all seed derivation.
constexpr std::uint64_t mix64(std::uint64_t z) {
  z += 0x9E3779B97F4A7C15ull;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

// Stable child-seed derivation: trial t of a run uses derive_seed(base, t),
// and agent i within a trial uses derive_seed(trial_seed, i). Adding trials
// or agents never perturbs the streams of existing ones.
constexpr std::uint64_t derive_seed(std::uint64_t base, std::uint64_t stream) {
  return mix64(mix64(base) + 0x9E3779B97F4A7C15ull * (stream + 1));
}

// Deterministic scalar stream: mt19937_64 engine, 53-bit uniforms, gaussians
// via single-value Box-Muller consuming exactly two uniforms per draw (no
// cached spare). The engine's bit stream is pinned by the standard, so the
// same seed reproduces the same trajectory everywhere.
class RandomStream {
 public:
  explicit RandomStream(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next_u64() { return engine_(); }

  // uniform in [0, 1)
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  // uniform in [lo, hi)
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  bool bernoulli(double prob) { return uniform() < prob; }

  // standard normal draw
  double gaussian() {
    const double u1 = static_cast<double>((engine_() >> 11) + 1) * 0x1.0p-53;  // (0, 1]
    const double u2 = static_cast<double>(engine_() >> 11) * 0x1.0p-53;        // [0, 1)
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * kPi * u2);
  }

  // Name + version of the stream contract, echoed into result metadata.
  static constexpr const char* kAlgorithm = "mt19937_64+box_muller/1";

 private:
  static constexpr double kPi = 3.141592653589793238462643383279502884;
  std::mt19937_64 engine_;
};

}  // namespace binident
