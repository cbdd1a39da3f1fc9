#pragma once

#include <cstdint>
#include <optional>
#include <string_view>
#include <vector>

#include "pathmc/flip.hpp"
#include "pathmc/path.hpp"
#include "pathmc/rng.hpp"
#include "pathmc/weights.hpp"

namespace pathmc {

// Trajectory functionals for the time-average estimator.
enum class Functional { FinalHeight, MaxHeight, Area, PeakCount };

const char* functional_name(Functional f);
Functional functional_from_name(std::string_view name);
double eval_functional(Functional f, const LatticePath& path);

// Forward MCMC: starting from `init` (default: the family maximum), applies
// chain steps with tuples G(seed, t) for t = 1..steps and returns the final
// path. Deterministic given (spec, table, steps, seed, init).
LatticePath mcmc_run(const FamilySpec& spec, const WeightTable& table, std::int64_t steps,
                     std::uint64_t seed, const std::optional<LatticePath>& init = std::nullopt);

// Applies the same tuple to every path (the grand coupling).
void grand_coupling_step(std::vector<LatticePath>& paths, const FlipInstruction& f,
                         const FamilySpec& spec);

// Time-average estimator over one trajectory: (1/T) * sum_t f(S(t)).
// Streaming; the functional value is maintained incrementally.
double estimate_functional(const FamilySpec& spec, const WeightTable& table, std::int64_t steps,
                           std::uint64_t seed, Functional f);

struct CouplingResult {
  bool coalesced = false;
  std::int64_t steps = 0;  // first t with equal paths, or the cap
};

// Runs the grand coupling from (min, max) forward until the two paths meet.
CouplingResult coupling_time(const FamilySpec& spec, const WeightTable& table, std::uint64_t seed,
                             std::int64_t cap);

// Theorem-style default step count for an almost-uniform sample at total
// variation target eps: 2 * ceil((2/3) n^2 (n+1) ln(n(n+1)/(2 eps))).
std::int64_t default_mcmc_steps(std::int64_t n, double eps = 0.01);

}  // namespace pathmc
