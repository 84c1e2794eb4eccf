#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>

namespace textfield {

/// Counter-based generator: every draw is a pure function of
/// (seed, stream, counter), so values do not depend on evaluation order.
class CounterRng {
 public:
  explicit CounterRng(std::uint64_t seed = 0) : seed_(seed) {}

  std::uint64_t seed() const { return seed_; }

  std::uint64_t bits(std::uint64_t stream, std::uint64_t counter) const {
    std::uint64_t z = mix(seed_ ^ mix(stream + 0x9e3779b97f4a7c15ULL));
    return mix(z ^ mix(counter * 0xd1b54a32d192ed03ULL + 0x2545f4914f6cdd1dULL));
  }

  /// Uniform in [0, 1) with 53 random bits.
  double uniform(std::uint64_t stream, std::uint64_t counter) const {
    return static_cast<double>(bits(stream, counter) >> 11) * 0x1.0p-53;
  }

  /// Standard normal via Box-Muller on two consecutive counters.
  double normal(std::uint64_t stream, std::uint64_t counter) const {
    const double u1 = 1.0 - uniform(stream, 2 * counter);  // (0, 1]
    const double u2 = uniform(stream, 2 * counter + 1);
    return std::sqrt(-2.0 * std::log(u1)) *
           std::cos(2.0 * std::numbers::pi * u2);
  }

 private:
  // SplitMix64 finalizer.
  static std::uint64_t mix(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  std::uint64_t seed_;
};

/// Sequential view over one stream of a CounterRng.
class RngStream {
 public:
  RngStream(const CounterRng& rng, std::uint64_t stream)
      : rng_(rng), stream_(stream) {}

  double uniform() { return rng_.uniform(stream_, counter_++); }
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  /// Uniform integer in [lo, hi].
  int uniform_int(int lo, int hi) {
    const auto span = static_cast<std::uint64_t>(hi - lo) + 1;
    return lo + static_cast<int>(rng_.bits(stream_, counter_++) % span);
  }
  double normal() { return rng_.normal(stream_, counter_++); }

 private:
  CounterRng rng_;
  std::uint64_t stream_;
  std::uint64_t counter_ = 0;
};

}  // namespace textfield
