#pragma once

#include <cstdint>

#include "pathmc/path.hpp"
#include "pathmc/weights.hpp"

namespace pathmc {

struct CftpResult {
  LatticePath path;
  std::int64_t tau_final = 0;       // horizon at which coalescence was detected
  std::int64_t tuples_consumed = 0; // chain steps executed across all horizons
};

// Coupling from the past with the doubling schedule: run the coupled chains
// from the family minimum and maximum at time -tau; if they meet at time 0
// the common value is an exact uniform sample, otherwise tau doubles. The
// tuple at time t is G(seed, t) and is therefore identical across horizons,
// which is what makes the output exact.
//
// Throws size_guard_error if tau would exceed `cap` (never returns a biased
// sample).
CftpResult cftp_sample(const FamilySpec& spec, const WeightTable& table, std::uint64_t seed,
                       std::int64_t tau0 = 1, std::int64_t cap = std::int64_t{1} << 30);

// Audit variant: materializes the tuple stream in a buffer and replays it,
// instead of regenerating tuples from the counter. Output is identical to
// cftp_sample; memory grows with the horizon.
CftpResult cftp_sample_buffered(const FamilySpec& spec, const WeightTable& table,
                                std::uint64_t seed, std::int64_t tau0 = 1,
                                std::int64_t cap = std::int64_t{1} << 30);

// d1 distance between the family extremes: the height of the order interval
// CFTP sandwiches, used for runtime diagnostics.
std::int64_t longest_chain_bound(const FamilySpec& spec);

}  // namespace pathmc
