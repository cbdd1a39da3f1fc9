#pragma once

#include <cstdint>

#include "pathmc/path.hpp"

namespace pathmc {

// The random tuple (i, epsilon, delta) driving one chain step.
// epsilon chooses the flip direction; delta matters only for the virtual step
// appended at i == n in the non-culminating families.
struct FlipInstruction {
  std::int64_t index = 1;   // i in 1..n
  bool up = true;           // epsilon: true = up-flip, false = down-flip
  bool delta_plus = true;   // delta: true = '+', false = '-'

  friend bool operator==(const FlipInstruction&, const FlipInstruction&) = default;
};

// The flip operator. Membership of the input is not required.
//
//   i < n, up:   a valley (Down,Up) at (i,i+1) becomes (Up,Down); S_i += a+b.
//   i < n, down: a peak (Up,Down) becomes (Down,Up); S_i -= a+b.
//   i = n, non-culminating: a virtual step is appended (Up for delta '+',
//     Down for delta '-') and the rule above is applied to (s_n, virtual).
//     Only (up,'+') and (down,'-') can change the path; they toggle s_n.
//   i = n, culminating: the last ceil(b/a)+1 steps are overwritten, with
//     (Up,...,Up) for an up-flip and (Down,Up,...,Up) for a down-flip.
//
// Everything else returns the path unchanged.
LatticePath flip_raw(const LatticePath& path, const FlipInstruction& f, const FamilySpec& spec);

// One Markov chain step: the flip is applied only if the result stays in the
// family, otherwise the path is returned unchanged. The input must be a member.
LatticePath chain_step(const LatticePath& path, const FlipInstruction& f, const FamilySpec& spec);

// In-place variant for the sampling hot loop. Returns true if the path moved.
// O(1) except for the culminating end move, which rescans the prefix maximum.
bool chain_step_inplace(LatticePath& path, const FlipInstruction& f, const FamilySpec& spec);

}  // namespace pathmc
