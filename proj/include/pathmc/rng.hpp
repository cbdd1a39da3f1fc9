#pragma once

#include <cstdint>

#include "pathmc/flip.hpp"
#include "pathmc/weights.hpp"

namespace pathmc {

// 64-bit finalizer (murmur3 style). Full avalanche, cheap, branch-free.
inline std::uint64_t mix64(std::uint64_t x) {
  x ^= x >> 33;
  x *= 0xff51afd7ed558ccdULL;
  x ^= x >> 33;
  x *= 0xc4ceb9fe1a85ec53ULL;
  x ^= x >> 33;
  return x;
}

// Counter-based tuple stream: the tuple at time t is a pure function of
// (seed, t), so forward runs and CFTP replay the same randomness without
// storing it. Three decorrelated lanes feed the index draw and the two fair
// bits, mirroring the three independent streams the dynamics consume.
class TupleStream {
 public:
  TupleStream(std::uint64_t seed, const WeightTable& table) : seed_(seed), table_(&table) {}

  // t may be negative (CFTP runs the chain from the past).
  FlipInstruction at(std::int64_t t) const {
    const std::uint64_t base =
        mix64(seed_ ^ mix64(static_cast<std::uint64_t>(t) + 0x9e3779b97f4a7c15ULL));
    const std::uint64_t h_index = mix64(base ^ 0x243f6a8885a308d3ULL);
    const std::uint64_t h_eps = mix64(base ^ 0x13198a2e03707344ULL);
    const std::uint64_t h_delta = mix64(base ^ 0xa4093822299f31d0ULL);
    const double u = static_cast<double>(h_index >> 11) * 0x1.0p-53;
    FlipInstruction f;
    f.index = table_->sample_index(u);
    f.up = (h_eps & 1) != 0;
    f.delta_plus = (h_delta & 1) != 0;
    return f;
  }

  std::uint64_t seed() const { return seed_; }
  const WeightTable& table() const { return *table_; }

 private:
  std::uint64_t seed_;
  const WeightTable* table_;
};

}  // namespace pathmc
