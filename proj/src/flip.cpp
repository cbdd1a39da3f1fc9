#include "pathmc/flip.hpp"

#include <cassert>
#include <vector>

#include "pathmc/step_effect.hpp"

namespace pathmc {

namespace {

// Builds the rewritten suffix of the culminating end move into `buf`.
void culminating_suffix(bool up, std::int64_t len, std::vector<Step>& buf) {
  buf.assign(static_cast<std::size_t>(len), Step::Up);
  if (!up) buf[0] = Step::Down;
}

}  // namespace

LatticePath flip_raw(const LatticePath& path, const FlipInstruction& f, const FamilySpec& spec) {
  LatticePath out = path;
  const std::int64_t n = path.n();
  if (f.index < 1 || f.index > n) throw validation_error("flip index out of range");

  if (f.index < n) {
    const Step first = path.step(f.index);
    const Step second = path.step(f.index + 1);
    const bool valley = first == Step::Down && second == Step::Up;
    const bool peak = first == Step::Up && second == Step::Down;
    if ((f.up && valley) || (!f.up && peak)) out.swap_steps(f.index);
    return out;
  }

  if (spec.kind() == FamilyKind::Culminating) {
    std::vector<Step> suffix;
    culminating_suffix(f.up, spec.culminating_suffix_len(), suffix);
    out.overwrite_suffix(suffix.data(), static_cast<std::int64_t>(suffix.size()));
    return out;
  }

  // Virtual step at the end: only (up,'+') turns a final Down into Up and
  // (down,'-') turns a final Up into Down; the other combinations are
  // identities because the virtual step never matches the needed pattern.
  const Step last = path.step(n);
  if (f.up && f.delta_plus && last == Step::Down) out.set_final_step(Step::Up);
  if (!f.up && !f.delta_plus && last == Step::Up) out.set_final_step(Step::Down);
  return out;
}

std::optional<StepEffect> plan_chain_step(const LatticePath& path, const FlipInstruction& f,
                                          const FamilySpec& spec) {
  const std::int64_t n = path.n();
  const StepParams& p = path.params();
  assert(f.index >= 1 && f.index <= n);

  if (f.index < n) {
    const Step first = path.step(f.index);
    const Step second = path.step(f.index + 1);
    std::int64_t new_h;
    if (f.up && first == Step::Down && second == Step::Up)
      new_h = path.height(f.index) + p.gap();
    else if (!f.up && first == Step::Up && second == Step::Down)
      new_h = path.height(f.index) - p.gap();
    else
      return std::nullopt;
    if (!spec.flip_keeps_member(path, f.index, new_h)) return std::nullopt;
    return StepEffect{StepEffect::Kind::Interior, f.index, path.height(f.index), new_h, f.up};
  }

  if (spec.kind() == FamilyKind::Culminating) {
    const std::int64_t m = spec.culminating_suffix_len();
    const std::int64_t base = path.height(n - m);
    const std::int64_t new_final = f.up ? base + m * p.a : base + (m - 1) * p.a - p.b;
    // A member's final suffix already has one of the two shapes, so an equal
    // final height means the move is an identity.
    if (new_final == path.final_height()) return std::nullopt;
    if (!spec.flip_keeps_member(path, n, new_final)) return std::nullopt;
    // index reports the first rewritten position.
    return StepEffect{StepEffect::Kind::Suffix, n - m + 1, path.final_height(), new_final, f.up};
  }

  const Step last = path.step(n);
  std::int64_t new_h;
  if (f.up && f.delta_plus && last == Step::Down)
    new_h = path.final_height() + p.gap();
  else if (!f.up && !f.delta_plus && last == Step::Up)
    new_h = path.final_height() - p.gap();
  else
    return std::nullopt;
  if (!spec.flip_keeps_member(path, n, new_h)) return std::nullopt;
  return StepEffect{StepEffect::Kind::FinalStep, n, path.final_height(), new_h, f.up};
}

void apply_effect(LatticePath& path, const StepEffect& e, const FamilySpec& spec) {
  switch (e.kind) {
    case StepEffect::Kind::Interior:
      path.swap_steps(e.index);
      break;
    case StepEffect::Kind::FinalStep:
      path.set_final_step(e.new_h > e.old_h ? Step::Up : Step::Down);
      break;
    case StepEffect::Kind::Suffix: {
      static thread_local std::vector<Step> suffix;
      culminating_suffix(e.up, spec.culminating_suffix_len(), suffix);
      path.overwrite_suffix(suffix.data(), spec.culminating_suffix_len());
      break;
    }
  }
}

LatticePath chain_step(const LatticePath& path, const FlipInstruction& f, const FamilySpec& spec) {
  LatticePath out = path;
  chain_step_inplace(out, f, spec);
  return out;
}

bool chain_step_inplace(LatticePath& path, const FlipInstruction& f, const FamilySpec& spec) {
  const auto effect = plan_chain_step(path, f, spec);
  if (!effect) return false;
  apply_effect(path, *effect, spec);
  return true;
}

}  // namespace pathmc
