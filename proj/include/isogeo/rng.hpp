#pragma once

// Deterministic counter-style random streams. A stream is identified by
// (master_seed, chunk_index) plus a purpose tag and sub-index; the identity is
// hashed into the state of a xoshiro256++ generator, so any chunk can be
// regenerated independently of scheduling. All variate transforms are spelled
// out here (no std::*_distribution) so that a given stream yields the same
// bits on every platform and standard library.

#include <cmath>
#include <cstdint>
#include <stdexcept>

namespace isogeo {

struct StreamSpec {
  std::uint64_t master_seed = 0;
  std::uint64_t chunk_index = 0;
};

// Purpose tags keep the streams of unrelated operations disjoint even when
// they share a master seed.
namespace streams {
inline constexpr std::uint64_t kPoints = 1;
inline constexpr std::uint64_t kSphere = 2;
inline constexpr std::uint64_t kChain = 3;
inline constexpr std::uint64_t kTrial = 4;
inline constexpr std::uint64_t kDirection = 5;
inline constexpr std::uint64_t kHistogram = 6;
}  // namespace streams

namespace detail {

inline std::uint64_t mix64(std::uint64_t z) {
  z ^= z >> 30;
  z *= 0xBF58476D1CE4E5B9ull;
  z ^= z >> 27;
  z *= 0x94D049BB133111EBull;
  z ^= z >> 31;
  return z;
}

inline std::uint64_t splitmix64(std::uint64_t& state) {
  state += 0x9E3779B97F4A7C15ull;
  return mix64(state);
}

}  // namespace detail

inline std::uint64_t derive_seed(std::uint64_t master, std::uint64_t purpose,
                                 std::uint64_t index_a, std::uint64_t index_b = 0) {
  std::uint64_t h = detail::mix64(master + 0x9E3779B97F4A7C15ull);
  h = detail::mix64(h ^ (purpose + 0xBF58476D1CE4E5B9ull));
  h = detail::mix64(h ^ (index_a + 0x94D049BB133111EBull));
  h = detail::mix64(h ^ (index_b + 0xD6E8FEB86659FD93ull));
  return h;
}

// xoshiro256++ (Blackman & Vigna), state expanded from a 64-bit seed with
// splitmix64 as its authors recommend.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) {
    std::uint64_t sm = seed;
    for (auto& word : state_) word = detail::splitmix64(sm);
  }

  static Rng for_stream(const StreamSpec& spec, std::uint64_t purpose,
                        std::uint64_t sub_index = 0) {
    return Rng(derive_seed(spec.master_seed, purpose, spec.chunk_index, sub_index));
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

  // [0, 1) with 53 random bits
  double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  // (0, 1]
  double uniform_pos() {
    return (static_cast<double>(next_u64() >> 11) + 1.0) * 0x1.0p-53;
  }

  double uniform(double a, double b) { return a + (b - a) * uniform(); }

  double exponential() { return -std::log(uniform_pos()); }

  // Box-Muller pair of independent standard normals.
  void normal_pair(double* z0, double* z1) {
    const double r = std::sqrt(-2.0 * std::log(uniform_pos()));
    const double phi = 2.0 * 3.14159265358979323846 * uniform();
    *z0 = r * std::cos(phi);
    *z1 = r * std::sin(phi);
  }

  double normal() {
    double z0, z1;
    normal_pair(&z0, &z1);
    return z0;
  }

  // Gamma(shape, 1) by Marsaglia-Tsang, with the standard power boost for
  // shape < 1. Rejection loops consume the stream sequentially, which keeps
  // the draw deterministic for a fixed stream identity.
  double gamma(double shape) {
    if (!(shape > 0.0)) throw std::invalid_argument("gamma: shape must be positive");
    if (shape == 1.0) return exponential();
    if (shape < 1.0) {
      return gamma(shape + 1.0) * std::pow(uniform_pos(), 1.0 / shape);
    }
    const double d = shape - 1.0 / 3.0;
    const double c = 1.0 / std::sqrt(9.0 * d);
    for (;;) {
      double x, v;
      do {
        x = normal();
        v = 1.0 + c * x;
      } while (v <= 0.0);
      v = v * v * v;
      const double u = uniform_pos();
      if (u < 1.0 - 0.0331 * x * x * x * x) return d * v;
      if (std::log(u) < 0.5 * x * x + d * (1.0 - v + std::log(v))) return d * v;
    }
  }

 private:
  static std::uint64_t rotl(std::uint64_t x, int k) {
    return (x << k) | (x >> (64 - k));
  }

  std::uint64_t state_[4];
};

}  // namespace isogeo
