#pragma once

#include <array>
#include <cstdint>
#include <span>

#include "qps/error.hpp"

namespace qps {

inline std::uint64_t splitmix64_next(std::uint64_t& state) {
  state += 0x9e3779b97f4a7c15ull;
  std::uint64_t z = state;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

/// xoshiro256++ seeded through splitmix64. All sampling in the library goes
/// through this class; std:: distributions are avoided so that identical
/// seeds give identical streams on every platform.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) {
    std::uint64_t st = seed;
    for (auto& w : state_) w = splitmix64_next(st);
  }

  /// Counter-based child stream: member `index` of ensemble seed `master`.
  /// Distinct indices give statistically independent generators.
  static Rng child(std::uint64_t master, std::uint64_t index) {
    std::uint64_t st = master ^ (0x632be59bd9b4e019ull + index * 0x9e3779b97f4a7c15ull);
    std::uint64_t mixed = splitmix64_next(st);
    return Rng(mixed);
  }

  std::uint64_t next_u64() {
    const std::uint64_t result = rotl(state_[0] + state_[3], 23) + state_[0];
    const std::uint64_t t = state_[1] << 17;
    state_[2] ^= state_[0];
    state_[3] ^= state_[1];
    state_[1] ^= state_[2];
    state_[0] ^= state_[3];
    state_[2] ^= t;
    state_[3] = rotl(state_[3], 45);
    return result;
  }

  /// Uniform double in [0, 1).
  double next_double() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  /// Index drawn proportionally to `weights` (not necessarily normalized).
  int sample_discrete(std::span<const double> weights) {
    double total = 0.0;
    for (double w : weights) {
      if (w < 0.0) throw Error("sample_discrete: negative weight");
      total += w;
    }
    if (!(total > 0.0)) throw Error("sample_discrete: weights sum to zero");
    double u = next_double() * total;
    double cum = 0.0;
    for (std::size_t i = 0; i + 1 < weights.size(); ++i) {
      cum += weights[i];
      if (u < cum) return static_cast<int>(i);
    }
    return static_cast<int>(weights.size()) - 1;
  }

 private:
  static std::uint64_t rotl(std::uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }

  std::array<std::uint64_t, 4> state_;
};

}  // namespace qps
