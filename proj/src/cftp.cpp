#include "pathmc/cftp.hpp"

#include <string>
#include <vector>

#include "pathmc/flip.hpp"
#include "pathmc/rng.hpp"

namespace pathmc {

namespace {

#ifndef NDEBUG
void assert_sandwiched(const LatticePath& lo, const LatticePath& hi) {
  if (!partial_le(lo, hi)) throw internal_error("CFTP sandwich order violated");
}
#endif

template <typename TupleAt>
CftpResult cftp_generic(const FamilySpec& spec, const WeightTable& table, TupleAt&& tuple_at,
                        std::int64_t tau0, std::int64_t cap) {
  if (tau0 < 1) throw validation_error("initial CFTP horizon must be >= 1");
  if (table.n != spec.n()) throw validation_error("weight table length does not match family");
  const auto extremes = spec.extremal_paths();

  std::int64_t tuples = 0;
  for (std::int64_t tau = tau0;; tau *= 2) {
    if (tau > cap)
      throw size_guard_error("CFTP did not coalesce within the horizon cap of " +
                             std::to_string(cap) + " steps");
    LatticePath lo = extremes.first;
    LatticePath hi = extremes.second;
    for (std::int64_t t = -tau; t <= -1; ++t) {
      const FlipInstruction f = tuple_at(t);
      chain_step_inplace(lo, f, spec);
      chain_step_inplace(hi, f, spec);
      ++tuples;
#ifndef NDEBUG
      assert_sandwiched(lo, hi);
#endif
    }
    if (lo == hi) return CftpResult{std::move(lo), tau, tuples};
  }
}

}  // namespace

CftpResult cftp_sample(const FamilySpec& spec, const WeightTable& table, std::uint64_t seed,
                       std::int64_t tau0, std::int64_t cap) {
  TupleStream stream(seed, table);
  return cftp_generic(spec, table, [&](std::int64_t t) { return stream.at(t); }, tau0, cap);
}

CftpResult cftp_sample_buffered(const FamilySpec& spec, const WeightTable& table,
                                std::uint64_t seed, std::int64_t tau0, std::int64_t cap) {
  TupleStream stream(seed, table);
  // buffer[k] holds the tuple for time t = -1-k; it is generated once and
  // replayed by every later horizon.
  std::vector<FlipInstruction> buffer;
  auto tuple_at = [&](std::int64_t t) {
    const std::size_t k = static_cast<std::size_t>(-t - 1);
    while (buffer.size() <= k) buffer.push_back(stream.at(-1 - static_cast<std::int64_t>(buffer.size())));
    return buffer[k];
  };
  return cftp_generic(spec, table, tuple_at, tau0, cap);
}

std::int64_t longest_chain_bound(const FamilySpec& spec) {
  const auto extremes = spec.extremal_paths();
  return d1(extremes.first, extremes.second);
}

}  // namespace pathmc
