#include "pathmc/path.hpp"

#include <algorithm>
#include <cassert>
#include <limits>

namespace pathmc {

namespace {
constexpr std::int64_t kNoLow = std::numeric_limits<std::int64_t>::min() / 4;
constexpr std::int64_t kNoHigh = std::numeric_limits<std::int64_t>::max() / 4;
}  // namespace

void StepParams::validate() const {
  if (n < 1) throw validation_error("path length n must be >= 1");
  if (a < 1 || b < 1) throw validation_error("step sizes a, b must be >= 1");
  const std::int64_t limit = std::numeric_limits<std::int64_t>::max() / 8;
  const std::int64_t m = std::max(a, b);
  if (m != 0 && n > limit / m) throw validation_error("n*max(a,b) too large for 64-bit heights");
}

LatticePath::LatticePath(StepParams params, std::vector<Step> word)
    : params_(params), word_(std::move(word)) {
  params_.validate();
  if (static_cast<std::int64_t>(word_.size()) != params_.n)
    throw validation_error("word length does not match n");
  heights_ = pathmc::heights(params_, word_);
}

LatticePath LatticePath::from_word(StepParams params, std::string_view word) {
  std::vector<Step> steps;
  steps.reserve(word.size());
  for (char c : word) {
    if (c == 'U' || c == 'u')
      steps.push_back(Step::Up);
    else if (c == 'D' || c == 'd')
      steps.push_back(Step::Down);
    else
      throw validation_error("word must contain only 'U' and 'D'");
  }
  return LatticePath(params, std::move(steps));
}

std::int64_t LatticePath::max_height() const {
  std::int64_t m = heights_[0];
  for (std::int64_t h : heights_) m = std::max(m, h);
  return m;
}

std::string LatticePath::word_string() const {
  std::string out;
  out.reserve(word_.size());
  for (Step s : word_) out.push_back(s == Step::Up ? 'U' : 'D');
  return out;
}

void LatticePath::swap_steps(std::int64_t i) {
  assert(i >= 1 && i < params_.n);
  auto& si = word_[static_cast<std::size_t>(i - 1)];
  auto& sj = word_[static_cast<std::size_t>(i)];
  if (si == sj) return;
  const std::int64_t delta = (si == Step::Down) ? params_.gap() : -params_.gap();
  std::swap(si, sj);
  heights_[static_cast<std::size_t>(i - 1)] += delta;
#ifndef NDEBUG
  check_heights();
#endif
}

void LatticePath::set_final_step(Step s) {
  auto& last = word_.back();
  if (last == s) return;
  heights_.back() += (s == Step::Up) ? params_.gap() : -params_.gap();
  last = s;
#ifndef NDEBUG
  check_heights();
#endif
}

void LatticePath::overwrite_suffix(const Step* suffix, std::int64_t len) {
  assert(len >= 1 && len <= params_.n);
  const std::int64_t start = params_.n - len;  // 0-based index of first rewritten step
  std::int64_t h = (start == 0) ? 0 : heights_[static_cast<std::size_t>(start - 1)];
  for (std::int64_t k = 0; k < len; ++k) {
    const Step s = suffix[k];
    word_[static_cast<std::size_t>(start + k)] = s;
    h += (s == Step::Up) ? params_.a : -params_.b;
    heights_[static_cast<std::size_t>(start + k)] = h;
  }
#ifndef NDEBUG
  check_heights();
#endif
}

void LatticePath::check_heights() const {
  const auto fresh = pathmc::heights(params_, word_);
  if (fresh != heights_) throw internal_error("height cache out of sync with word");
}

std::vector<std::int64_t> heights(const StepParams& params, const std::vector<Step>& word) {
  if (static_cast<std::int64_t>(word.size()) != params.n)
    throw validation_error("word length does not match n");
  std::vector<std::int64_t> out(word.size());
  std::int64_t h = 0;
  for (std::size_t k = 0; k < word.size(); ++k) {
    h += (word[k] == Step::Up) ? params.a : -params.b;
    out[k] = h;
  }
  return out;
}

std::int64_t d1(const LatticePath& s, const LatticePath& t) {
  if (!(s.params() == t.params()))
    throw validation_error("d1 requires paths with identical parameters");
  const std::int64_t gap = s.params().gap();
  std::int64_t total = 0;
  const auto& hs = s.heights();
  const auto& ht = t.heights();
  for (std::size_t i = 0; i < hs.size(); ++i) {
    const std::int64_t diff = hs[i] > ht[i] ? hs[i] - ht[i] : ht[i] - hs[i];
    if (diff % gap != 0) throw internal_error("height gap not a multiple of a+b");
    total += diff / gap;
  }
  return total;
}

bool partial_le(const LatticePath& s, const LatticePath& t) {
  if (!(s.params() == t.params()))
    throw validation_error("partial order requires identical parameters");
  const auto& hs = s.heights();
  const auto& ht = t.heights();
  for (std::size_t i = 0; i < hs.size(); ++i)
    if (hs[i] > ht[i]) return false;
  return true;
}

namespace {

LatticePath pointwise_combine(const LatticePath& s, const LatticePath& t, bool take_min) {
  if (!(s.params() == t.params()))
    throw validation_error("pointwise min/max requires identical parameters");
  const auto& hs = s.heights();
  const auto& ht = t.heights();
  std::vector<Step> word(hs.size());
  std::int64_t prev = 0;
  for (std::size_t i = 0; i < hs.size(); ++i) {
    const std::int64_t h = take_min ? std::min(hs[i], ht[i]) : std::max(hs[i], ht[i]);
    const std::int64_t step = h - prev;
    if (step == s.params().a)
      word[i] = Step::Up;
    else if (step == -s.params().b)
      word[i] = Step::Down;
    else
      throw internal_error("pointwise min/max produced an invalid step");
    prev = h;
  }
  return LatticePath(s.params(), std::move(word));
}

}  // namespace

LatticePath pointwise_min(const LatticePath& s, const LatticePath& t) {
  return pointwise_combine(s, t, true);
}

LatticePath pointwise_max(const LatticePath& s, const LatticePath& t) {
  return pointwise_combine(s, t, false);
}

const char* family_name(FamilyKind kind) {
  switch (kind) {
    case FamilyKind::Meander: return "meander";
    case FamilyKind::Wall: return "wall";
    case FamilyKind::Excursion: return "excursion";
    case FamilyKind::Culminating: return "culminating";
  }
  return "?";
}

FamilyKind family_from_name(std::string_view name) {
  if (name == "meander") return FamilyKind::Meander;
  if (name == "wall") return FamilyKind::Wall;
  if (name == "excursion") return FamilyKind::Excursion;
  if (name == "culminating") return FamilyKind::Culminating;
  throw validation_error("unknown family: " + std::string(name));
}

FamilySpec FamilySpec::meander(StepParams params) {
  return FamilySpec(FamilyKind::Meander, params, {});
}
FamilySpec FamilySpec::wall(StepParams params, WallWindow w) {
  return FamilySpec(FamilyKind::Wall, params, w);
}
FamilySpec FamilySpec::excursion(StepParams params) {
  return FamilySpec(FamilyKind::Excursion, params, {});
}
FamilySpec FamilySpec::culminating(StepParams params) {
  return FamilySpec(FamilyKind::Culminating, params, {});
}
FamilySpec FamilySpec::make(FamilyKind kind, StepParams params, WallWindow w) {
  return FamilySpec(kind, params, w);
}

FamilySpec::FamilySpec(FamilyKind kind, StepParams params, WallWindow w)
    : kind_(kind), params_(params), wall_(w) {
  params_.validate();
  const std::int64_t n = params_.n;

  if (kind_ == FamilyKind::Wall) {
    if (wall_.r < 1 || wall_.r > n || wall_.s < 1 || wall_.s > n)
      throw validation_error("wall window indices must lie in 1..n");
    // r > s is the degenerate window: the family is all of {U,D}^n.
    if (wall_.r <= wall_.s && wall_.h > wall_.r * params_.a)
      throw validation_error("empty family: wall height exceeds r*a, unreachable by position r");
  }

  if (kind_ == FamilyKind::Excursion) {
    if ((n * params_.b) % params_.gap() != 0)
      throw validation_error("empty family: n*b not divisible by a+b");
  }

  if (kind_ == FamilyKind::Culminating) {
    culm_suffix_len_ = (params_.b + params_.a - 1) / params_.a + 1;  // ceil(b/a)+1
    if (n <= culm_suffix_len_)
      throw validation_error("culminating family requires n > ceil(b/a)+1");
  } else {
    // Backward sweep of feasible-height intervals. Position i holds the set of
    // heights that satisfy the constraint at i and admit a valid completion;
    // going one step back, h is feasible iff h+a or h-b is feasible next, which
    // on the height lattice is exactly the interval [lo-a, hi+b].
    lo_.assign(static_cast<std::size_t>(n) + 1, kNoLow);
    hi_.assign(static_cast<std::size_t>(n) + 1, kNoHigh);
    for (std::int64_t i = n; i >= 0; --i) {
      std::int64_t lo = kNoLow, hi = kNoHigh;
      if (i >= 1) {
        switch (kind_) {
          case FamilyKind::Meander:
            lo = 0;
            break;
          case FamilyKind::Excursion:
            lo = 0;
            if (i == n) hi = 0;
            break;
          case FamilyKind::Wall:
            if (wall_.r <= i && i <= wall_.s) lo = wall_.h;
            break;
          case FamilyKind::Culminating:
            break;
        }
      }
      if (i < n) {
        const std::int64_t next_lo = lo_[static_cast<std::size_t>(i + 1)];
        const std::int64_t next_hi = hi_[static_cast<std::size_t>(i + 1)];
        lo = std::max(lo, next_lo == kNoLow ? kNoLow : next_lo - params_.a);
        hi = std::min(hi, next_hi == kNoHigh ? kNoHigh : next_hi + params_.b);
      }
      lo_[static_cast<std::size_t>(i)] = lo;
      hi_[static_cast<std::size_t>(i)] = hi;
    }
    if (lo_[0] > 0 || hi_[0] < 0) throw validation_error("empty family: no valid path exists");
  }
}

bool FamilySpec::height_ok(std::int64_t i, std::int64_t h) const {
  switch (kind_) {
    case FamilyKind::Meander:
      return h >= 0;
    case FamilyKind::Excursion:
      return h >= 0 && (i != params_.n || h == 0);
    case FamilyKind::Wall:
      return (wall_.r <= i && i <= wall_.s) ? h >= wall_.h : true;
    case FamilyKind::Culminating:
      return h >= 0;  // the upper bound needs S_n, checked in is_member
  }
  return false;
}

bool FamilySpec::is_member(const LatticePath& path) const {
  if (!(path.params() == params_))
    throw validation_error("path parameters do not match family");
  const auto& h = path.heights();
  const std::int64_t n = params_.n;
  if (kind_ == FamilyKind::Culminating) {
    const std::int64_t top = h[static_cast<std::size_t>(n - 1)];
    for (std::int64_t v : h)
      if (v < 0 || v > top) return false;
    return true;
  }
  for (std::int64_t i = 1; i <= n; ++i)
    if (!height_ok(i, h[static_cast<std::size_t>(i - 1)])) return false;
  return true;
}

bool FamilySpec::flip_keeps_member(const LatticePath& path, std::int64_t i,
                                   std::int64_t new_h) const {
  const std::int64_t n = params_.n;
  if (kind_ != FamilyKind::Culminating) return height_ok(i, new_h);
  if (i < n) return new_h >= 0 && new_h <= path.final_height();
  // Culminating end move: the last m steps become all-Up (new final
  // base + m*a) or Down then Ups (new final base + (m-1)*a - b, needs
  // base >= b to stay non-negative). The prefix maximum is rescanned.
  const std::int64_t m = culm_suffix_len_;
  const std::int64_t base = path.height(n - m);
  if (new_h == base + m * params_.a) {
    // all-Up suffix; base >= 0 holds for any non-negative prefix
  } else if (new_h == base + (m - 1) * params_.a - params_.b) {
    if (base < params_.b) return false;
  } else {
    throw internal_error("culminating end move with inconsistent target height");
  }
  std::int64_t prefix_max = 0;
  for (std::int64_t j = 1; j <= n - m; ++j) prefix_max = std::max(prefix_max, path.height(j));
  return prefix_max <= new_h;
}

bool FamilySpec::completion_feasible(std::int64_t i, std::int64_t h,
                                     std::int64_t running_max) const {
  if (kind_ == FamilyKind::Culminating) {
    if (i >= 1 && h < 0) return false;
    return h + (params_.n - i) * params_.a >= running_max;
  }
  return h >= lo_[static_cast<std::size_t>(i)] && h <= hi_[static_cast<std::size_t>(i)];
}

std::pair<LatticePath, LatticePath> FamilySpec::extremal_paths() const {
  const std::int64_t n = params_.n;
  auto build = [&](bool low) {
    std::vector<Step> word(static_cast<std::size_t>(n));
    std::int64_t h = 0, running_max = 0;
    for (std::int64_t i = 1; i <= n; ++i) {
      const Step preferred = low ? Step::Down : Step::Up;
      const std::int64_t cand = h + (preferred == Step::Up ? params_.a : -params_.b);
      Step chosen;
      std::int64_t nh;
      if (completion_feasible(i, cand, std::max(running_max, cand))) {
        chosen = preferred;
        nh = cand;
      } else {
        chosen = (preferred == Step::Up) ? Step::Down : Step::Up;
        nh = h + (chosen == Step::Up ? params_.a : -params_.b);
        if (!completion_feasible(i, nh, std::max(running_max, nh)))
          throw internal_error("extremal construction stuck: no feasible step");
      }
      word[static_cast<std::size_t>(i - 1)] = chosen;
      h = nh;
      running_max = std::max(running_max, h);
    }
    return LatticePath(params_, std::move(word));
  };
  auto lo_path = build(true);
  auto hi_path = build(false);
  if (!is_member(lo_path) || !is_member(hi_path))
    throw internal_error("extremal construction produced a non-member");
  return {std::move(lo_path), std::move(hi_path)};
}

}  // namespace pathmc
