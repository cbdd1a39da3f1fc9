#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "pathmc/errors.hpp"

namespace pathmc {

// One step of a path: Up adds +a to the height, Down adds -b.
enum class Step : std::uint8_t { Up = 0, Down = 1 };

struct StepParams {
  std::int64_t n = 0;  // number of steps
  std::int64_t a = 1;  // up-step size
  std::int64_t b = 1;  // down-step magnitude

  std::int64_t gap() const { return a + b; }

  // n >= 1, a >= 1, b >= 1, and n*max(a,b) must fit comfortably in 64 bits.
  void validate() const;

  friend bool operator==(const StepParams&, const StepParams&) = default;
};

// A word over {Up, Down} together with its cached height profile S_1..S_n.
// Heights are kept in sync through the mutating helpers below; anything that
// touches word_ directly must go through them.
class LatticePath {
 public:
  LatticePath(StepParams params, std::vector<Step> word);

  // Parses a word like "UUDUUUD". Throws validation_error on bad input.
  static LatticePath from_word(StepParams params, std::string_view word);

  const StepParams& params() const { return params_; }
  std::int64_t n() const { return params_.n; }

  // 1-based accessors matching the usual indexing; height(0) == 0.
  Step step(std::int64_t i) const { return word_[static_cast<std::size_t>(i - 1)]; }
  std::int64_t height(std::int64_t i) const {
    return i == 0 ? 0 : heights_[static_cast<std::size_t>(i - 1)];
  }
  std::int64_t final_height() const { return height(params_.n); }
  std::int64_t max_height() const;

  const std::vector<Step>& word() const { return word_; }
  const std::vector<std::int64_t>& heights() const { return heights_; }
  std::string word_string() const;

  // Swaps steps (i, i+1); only height S_i changes, by +-(a+b). i in 1..n-1.
  void swap_steps(std::int64_t i);
  // Replaces the final step; S_n moves by +-(a+b). No-op if unchanged.
  void set_final_step(Step s);
  // Overwrites the last `len` steps with `suffix` and recomputes their heights.
  void overwrite_suffix(const Step* suffix, std::int64_t len);

  // Recomputes heights from the word and checks the cache. Used by tests and
  // debug builds after mutations.
  void check_heights() const;

  friend bool operator==(const LatticePath& x, const LatticePath& y) {
    return x.params_ == y.params_ && x.word_ == y.word_;
  }

 private:
  StepParams params_;
  std::vector<Step> word_;
  std::vector<std::int64_t> heights_;
};

// Prefix sums of a word (Up -> +a, Down -> -b). Throws on length mismatch.
std::vector<std::int64_t> heights(const StepParams& params, const std::vector<Step>& word);

// L1 transport distance: (1/(a+b)) * sum_i |S_i - T_i|. The per-index gaps are
// always multiples of a+b for words over the same lattice; a remainder means a
// corrupted height cache and throws internal_error.
std::int64_t d1(const LatticePath& s, const LatticePath& t);

// Coordinatewise partial order: S <= T iff S_i <= T_i for all i.
bool partial_le(const LatticePath& s, const LatticePath& t);

// Coordinatewise min/max of two height profiles. The result is always a valid
// word because same-position heights differ by multiples of a+b.
LatticePath pointwise_min(const LatticePath& s, const LatticePath& t);
LatticePath pointwise_max(const LatticePath& s, const LatticePath& t);

enum class FamilyKind { Meander, Wall, Excursion, Culminating };

struct WallWindow {
  std::int64_t h = 0;  // required height within the window
  std::int64_t r = 1;  // window start (1-based, inclusive)
  std::int64_t s = 0;  // window end (inclusive); r > s means no active window

  friend bool operator==(const WallWindow&, const WallWindow&) = default;
};

const char* family_name(FamilyKind kind);
FamilyKind family_from_name(std::string_view name);

// A path family: step parameters, the constraint variant, and the
// backward-feasibility data that makes greedy extremal construction and
// enumeration pruning exact.
//
// For Meander/Wall/Excursion, completion feasibility at (position i, height h)
// is an interval [lo_i, hi_i]: the interval of heights from which the local
// constraint holds at i and some suffix satisfies all later constraints.
// For Culminating the feasibility state also carries the running maximum M of
// the prefix: a completion exists iff h >= 0 and h + (n-i)*a >= M, since the
// best reachable final height from (i, h) is h + (n-i)*a.
//
// Immutable after construction and safe to share across threads.
class FamilySpec {
 public:
  static FamilySpec meander(StepParams params);
  static FamilySpec wall(StepParams params, WallWindow w);
  static FamilySpec excursion(StepParams params);
  static FamilySpec culminating(StepParams params);
  static FamilySpec make(FamilyKind kind, StepParams params, WallWindow w = {});

  FamilyKind kind() const { return kind_; }
  const StepParams& params() const { return params_; }
  std::int64_t n() const { return params_.n; }
  const WallWindow& wall_window() const { return wall_; }

  // Length of the suffix rewritten by the culminating end move: ceil(b/a)+1.
  std::int64_t culminating_suffix_len() const { return culm_suffix_len_; }

  bool is_member(const LatticePath& path) const;

  // The per-position constraint alone (no completion requirement).
  bool height_ok(std::int64_t i, std::int64_t h) const;

  // Membership of the path obtained by moving height i to new_h, evaluated by
  // local comparison. For Culminating i == n this is the end-move test: it
  // rescans the prefix maximum (O(n), which is fine because the end move is
  // drawn with probability O(1/n)).
  bool flip_keeps_member(const LatticePath& path, std::int64_t i, std::int64_t new_h) const;

  // True iff some valid completion exists from height h at position i
  // (0 <= i <= n; i == 0 means nothing consumed and h must be 0 to be the real
  // start state). running_max is consulted only by Culminating.
  bool completion_feasible(std::int64_t i, std::int64_t h, std::int64_t running_max = 0) const;

  // The coordinatewise minimum and maximum members, built greedily
  // left-to-right against the completion tables.
  std::pair<LatticePath, LatticePath> extremal_paths() const;

 private:
  FamilySpec(FamilyKind kind, StepParams params, WallWindow w);

  FamilyKind kind_;
  StepParams params_;
  WallWindow wall_{};
  std::int64_t culm_suffix_len_ = 0;
  // Feasible-height intervals per position (index 0..n), with sentinels for
  // "unbounded". Unused for Culminating.
  std::vector<std::int64_t> lo_, hi_;
};

}  // namespace pathmc
