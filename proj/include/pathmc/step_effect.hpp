#pragma once

#include <cstdint>
#include <optional>

#include "pathmc/flip.hpp"
#include "pathmc/path.hpp"

namespace pathmc {

// Description of an accepted chain move, separated from its application so
// that callers can maintain incremental statistics around the mutation.
struct StepEffect {
  enum class Kind { Interior, FinalStep, Suffix };
  Kind kind = Kind::Interior;
  std::int64_t index = 0;  // flipped position (Interior/FinalStep), or n for Suffix
  std::int64_t old_h = 0;  // height at `index` before the move
  std::int64_t new_h = 0;  // height after
  bool up = false;         // direction (used by the Suffix rewrite)
};

// Decides the move for (path, f) without mutating. Returns nullopt when the
// pattern does not match or membership would be lost.
std::optional<StepEffect> plan_chain_step(const LatticePath& path, const FlipInstruction& f,
                                          const FamilySpec& spec);

// Applies a previously planned move.
void apply_effect(LatticePath& path, const StepEffect& e, const FamilySpec& spec);

}  // namespace pathmc
