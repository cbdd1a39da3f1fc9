#include "pathmc/chain.hpp"

#include <algorithm>
#include <array>
#include <cassert>
#include <cmath>
#include <string>

#include "pathmc/step_effect.hpp"

namespace pathmc {

const char* functional_name(Functional f) {
  switch (f) {
    case Functional::FinalHeight: return "final_height";
    case Functional::MaxHeight: return "max_height";
    case Functional::Area: return "area";
    case Functional::PeakCount: return "peak_count";
  }
  return "?";
}

Functional functional_from_name(std::string_view name) {
  if (name == "final_height") return Functional::FinalHeight;
  if (name == "max_height") return Functional::MaxHeight;
  if (name == "area") return Functional::Area;
  if (name == "peak_count") return Functional::PeakCount;
  throw validation_error("unknown functional: " + std::string(name));
}

double eval_functional(Functional f, const LatticePath& path) {
  switch (f) {
    case Functional::FinalHeight:
      return static_cast<double>(path.final_height());
    case Functional::MaxHeight:
      return static_cast<double>(path.max_height());
    case Functional::Area: {
      std::int64_t area = 0;
      for (std::int64_t h : path.heights()) area += h;
      return static_cast<double>(area);
    }
    case Functional::PeakCount: {
      std::int64_t peaks = 0;
      for (std::int64_t i = 1; i < path.n(); ++i)
        if (path.step(i) == Step::Up && path.step(i + 1) == Step::Down) ++peaks;
      return static_cast<double>(peaks);
    }
  }
  return 0.0;
}

std::int64_t default_mcmc_steps(std::int64_t n, double eps) {
  const double dn = static_cast<double>(n);
  const double target = dn * (dn + 1.0) / (2.0 * eps);
  const double base = (2.0 / 3.0) * dn * dn * (dn + 1.0) * std::log(target);
  return 2 * static_cast<std::int64_t>(std::ceil(base));
}

namespace {

// Small ring of precomputed tuples. Tuples do not depend on the path state,
// so upcoming flip positions can be prefetched while earlier steps apply.
constexpr std::int64_t kLookahead = 16;

inline std::size_t ring_slot(std::int64_t t) {
  return static_cast<std::size_t>(((t % kLookahead) + kLookahead) % kLookahead);
}

struct TupleRing {
  std::array<FlipInstruction, kLookahead> buf;
  const TupleStream& stream;
  const LatticePath& path;

  TupleRing(const TupleStream& s, const LatticePath& p, std::int64_t t0) : stream(s), path(p) {
    for (std::int64_t t = t0; t < t0 + kLookahead; ++t) buf[ring_slot(t)] = stream.at(t);
  }

  FlipInstruction take(std::int64_t t, std::int64_t t_last) {
    const std::size_t slot = ring_slot(t);
    const FlipInstruction f = buf[slot];
    const std::int64_t t_next = t + kLookahead;
    if (t_next <= t_last) {
      const FlipInstruction g = stream.at(t_next);
      buf[slot] = g;
      const auto idx = static_cast<std::size_t>(g.index - 1);
      __builtin_prefetch(path.word().data() + idx);
      __builtin_prefetch(path.heights().data() + idx);
    }
    return f;
  }
};

}  // namespace

LatticePath mcmc_run(const FamilySpec& spec, const WeightTable& table, std::int64_t steps,
                     std::uint64_t seed, const std::optional<LatticePath>& init) {
  if (steps < 0) throw validation_error("step count must be >= 0");
  if (table.n != spec.n()) throw validation_error("weight table length does not match family");
  if (init && !spec.is_member(*init))
    throw validation_error("explicit initial path is not a member of the family");
  LatticePath path = init ? *init : spec.extremal_paths().second;

  TupleStream stream(seed, table);
  TupleRing ring(stream, path, 1);
  for (std::int64_t t = 1; t <= steps; ++t) {
    const FlipInstruction f = ring.take(t, steps);
    chain_step_inplace(path, f, spec);
#ifndef NDEBUG
    if ((t & 1023) == 0 && !spec.is_member(path)) throw internal_error("chain left the family");
#endif
  }
  return path;
}

void grand_coupling_step(std::vector<LatticePath>& paths, const FlipInstruction& f,
                         const FamilySpec& spec) {
  for (auto& p : paths) chain_step_inplace(p, f, spec);
}

namespace {

// Functional value maintained across moves without rescanning the path
// (except where a culminating suffix rewrite forces a short local rescan).
class FunctionalTracker {
 public:
  FunctionalTracker(Functional f, const LatticePath& path) : f_(f) {
    value_ = eval_functional(f, path);
    if (f_ == Functional::MaxHeight) recount_max(path);
  }

  double value() const { return value_; }

  // `path` must be the pre-move state here...
  void before(const LatticePath& path, const StepEffect& e) {
    if (f_ == Functional::PeakCount) pre_peaks_ = local_peaks(path, e);
    if (f_ == Functional::MaxHeight && e.kind == StepEffect::Kind::Suffix) {
      pre_suffix_.clear();
      for (std::int64_t j = e.index; j <= path.n(); ++j) pre_suffix_.push_back(path.height(j));
    }
  }

  // ...and the post-move state here.
  void after(const LatticePath& path, const StepEffect& e) {
    switch (f_) {
      case Functional::FinalHeight:
        value_ = static_cast<double>(path.final_height());
        break;
      case Functional::Area:
        if (e.kind == StepEffect::Kind::Suffix) {
          value_ = eval_functional(Functional::Area, path);
        } else {
          value_ += static_cast<double>(e.new_h - e.old_h);
        }
        break;
      case Functional::PeakCount:
        value_ += static_cast<double>(local_peaks(path, e) - pre_peaks_);
        break;
      case Functional::MaxHeight:
        update_max(path, e);
        break;
    }
  }

 private:
  // Step pairs whose peak status can change: those overlapping the flipped
  // index, or the rewritten suffix.
  std::int64_t local_peaks(const LatticePath& path, const StepEffect& e) const {
    const std::int64_t lo = std::max<std::int64_t>(1, e.index - 1);
    const std::int64_t hi = e.kind == StepEffect::Kind::Suffix
                                ? path.n() - 1
                                : std::min(path.n() - 1, e.index + 1);
    std::int64_t peaks = 0;
    for (std::int64_t j = lo; j <= hi; ++j)
      if (path.step(j) == Step::Up && path.step(j + 1) == Step::Down) ++peaks;
    return peaks;
  }

  void recount_max(const LatticePath& path) {
    max_ = path.max_height();
    at_max_ = 0;
    for (std::int64_t h : path.heights())
      if (h == max_) ++at_max_;
    value_ = static_cast<double>(max_);
  }

  void update_max(const LatticePath& path, const StepEffect& e) {
    auto remove = [&](std::int64_t h) {
      if (h == max_) --at_max_;
    };
    auto add = [&](std::int64_t h) {
      if (h > max_) {
        max_ = h;
        at_max_ = 1;
      } else if (h == max_) {
        ++at_max_;
      }
    };
    if (e.kind == StepEffect::Kind::Suffix) {
      for (std::int64_t h : pre_suffix_) remove(h);
      for (std::int64_t j = e.index; j <= path.n(); ++j) add(path.height(j));
    } else {
      remove(e.old_h);
      add(e.new_h);
    }
    if (at_max_ <= 0) {
      recount_max(path);  // the unique maximum moved down
    } else {
      value_ = static_cast<double>(max_);
    }
  }

  Functional f_;
  double value_ = 0.0;
  std::int64_t pre_peaks_ = 0;
  std::int64_t max_ = 0;
  std::int64_t at_max_ = 0;
  std::vector<std::int64_t> pre_suffix_;
};

}  // namespace

double estimate_functional(const FamilySpec& spec, const WeightTable& table, std::int64_t steps,
                           std::uint64_t seed, Functional f) {
  if (steps < 1) throw validation_error("estimator requires at least one step");
  if (table.n != spec.n()) throw validation_error("weight table length does not match family");
  LatticePath path = spec.extremal_paths().second;
  TupleStream stream(seed, table);
  FunctionalTracker tracker(f, path);

  double sum = 0.0;
  for (std::int64_t t = 1; t <= steps; ++t) {
    const FlipInstruction instr = stream.at(t);
    if (const auto e = plan_chain_step(path, instr, spec)) {
      tracker.before(path, *e);
      apply_effect(path, *e, spec);
      tracker.after(path, *e);
    }
    sum += tracker.value();
  }
  return sum / static_cast<double>(steps);
}

CouplingResult coupling_time(const FamilySpec& spec, const WeightTable& table, std::uint64_t seed,
                             std::int64_t cap) {
  if (table.n != spec.n()) throw validation_error("weight table length does not match family");
  auto [lo, hi] = spec.extremal_paths();
  if (lo == hi) return {true, 0};

  const std::int64_t n = spec.n();
  std::int64_t ndiff = 0;
  for (std::int64_t i = 1; i <= n; ++i)
    if (lo.height(i) != hi.height(i)) ++ndiff;

  const std::int64_t m = spec.kind() == FamilyKind::Culminating ? spec.culminating_suffix_len() : 1;
  TupleStream stream(seed, table);
  TupleRing ring(stream, lo, 1);
  for (std::int64_t t = 1; t <= cap; ++t) {
    const FlipInstruction f = ring.take(t, cap);
    const std::int64_t first =
        (f.index == n && spec.kind() == FamilyKind::Culminating) ? n - m + 1 : f.index;
    for (std::int64_t p = first; p <= f.index; ++p)
      if (lo.height(p) != hi.height(p)) --ndiff;
    chain_step_inplace(lo, f, spec);
    chain_step_inplace(hi, f, spec);
    for (std::int64_t p = first; p <= f.index; ++p)
      if (lo.height(p) != hi.height(p)) ++ndiff;
    if (ndiff == 0) return {true, t};
  }
  return {false, cap};
}

}  // namespace pathmc
