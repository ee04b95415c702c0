#ifndef GSTAR_RNG_HPP_
#define GSTAR_RNG_HPP_

#include "gstar/vec.hpp"

#include <cstdint>
#include <limits>
#include <random>

namespace gstar {

/// SplitMix64 finalizer.
constexpr std::uint64_t mix64(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

/**
 * Counter-based generator: the i-th output is a pure function of (key, i).
 * Streams are derived by hashing a stream id into the key, so a run keyed by
 * (seed, round) can be reproduced or parallelized without sharing state.
 * Satisfies UniformRandomBitGenerator.
 */
class CounterRng {
 public:
  using result_type = std::uint64_t;

  explicit CounterRng(std::uint64_t seed, std::uint64_t stream = 0)
      : key_(mix64(mix64(seed) ^ (stream * 0xd1342543de82ef95ULL + 0x632be59bd9b4e019ULL))) {}

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }

  result_type operator()() { return mix64(key_ + (counter_++) * 0x9e3779b97f4a7c15ULL); }

  /// Independent child stream; does not advance this generator.
  CounterRng split(std::uint64_t stream) const { return CounterRng(key_, stream + 1); }

  double uniform() { return static_cast<double>((*this)() >> 11) * 0x1.0p-53; }

  double normal() { return std::normal_distribution<double>(0.0, 1.0)(*this); }

  Vec normal_vec(Index dim) {
    Vec v(dim);
    for (Index i = 0; i < dim; ++i) v[i] = normal();
    return v;
  }

  /// +1 or -1 with equal probability.
  double rademacher() { return ((*this)() >> 63) ? 1.0 : -1.0; }

 private:
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
};

/// Generator for round t of the experiment keyed by seed.
inline CounterRng round_rng(std::uint64_t seed, std::uint64_t round) {
  return CounterRng(seed, round);
}

}  // namespace gstar

#endif  // GSTAR_RNG_HPP_
