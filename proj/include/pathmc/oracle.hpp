#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "pathmc/path.hpp"
#include "pathmc/weights.hpp"

namespace pathmc {

// Exhaustive small-instance ground truth. Everything here is desk-scale by
// design: dense matrices, all-pairs scans, hard size guards.

struct FamilyEnumeration {
  std::vector<LatticePath> members;              // sorted by word string
  std::unordered_map<std::string, int> index;    // word string -> position

  int size() const { return static_cast<int>(members.size()); }
  std::optional<int> find(const LatticePath& path) const {
    const auto it = index.find(path.word_string());
    if (it == index.end()) return std::nullopt;
    return it->second;
  }
};

// Depth-first generation pruned by the completion tables; complete by
// construction. Throws size_guard_error once more than `cap` members exist.
FamilyEnumeration enumerate_family(const FamilySpec& spec, std::int64_t cap = 10'000'000);

struct TransitionMatrix {
  int size = 0;
  std::vector<double> p;  // row-major

  double at(int r, int c) const { return p[static_cast<std::size_t>(r) * size + c]; }
  double& at(int r, int c) { return p[static_cast<std::size_t>(r) * size + c]; }
};

// Transition matrix assembled from first principles: every tuple (i, eps,
// delta) contributes probs_i/4 to the row entry of its chain_step image.
// Guarded at 20000 states.
TransitionMatrix build_transition_matrix(const FamilySpec& spec, const WeightTable& table,
                                         const FamilyEnumeration& en);

// TV(P^t delta_start, uniform) for t = 0..t_max.
std::vector<double> exact_tv_decay(const TransitionMatrix& P, int start, std::int64_t t_max);

// Max over all start states of TV(P^t delta_v, uniform), for t = 0..t_max.
// TV to stationarity never increases, so once the value drops below `stop_below`
// the remaining entries are bounded by the last computed one and iteration
// stops early; the returned vector may be shorter than t_max+1.
std::vector<double> exact_tv_decay_worst(const TransitionMatrix& P, std::int64_t t_max,
                                         double stop_below = 0.0);

// Smallest t with max over starts of TV(P^t delta_v, uniform) <= 1/e.
// Throws size_guard_error if not reached within `cap` steps.
std::int64_t exact_tmix(const TransitionMatrix& P, std::int64_t cap = 1'000'000);

// Exact one-step expected d1 distance under the grand coupling:
// sum over all 4n tuples of (probs_i/4) * d1(step(S), step(T)).
double coupled_expected_distance(const LatticePath& s, const LatticePath& t,
                                 const FamilySpec& spec, const WeightTable& table);

struct NeighborPairStat {
  int u = 0, v = 0;              // member indices, d1(u,v) == 1
  std::int64_t diff_index = 0;   // the single position where they differ
  double expected_d1 = 0.0;      // one-step coupled expectation
  double contraction = 0.0;      // 1 - expected_d1
};

struct CurvatureReport {
  std::vector<NeighborPairStat> pairs;   // every pair at distance one
  double min_contraction = 0.0;
  std::vector<std::size_t> min_pair_ids;       // pairs attaining the minimum
  std::vector<std::size_t> equality_pair_ids;  // pairs with E = 1 - kappa0/Z (quadratic)
                                               // or E = 1 (uniform), within 1e-12
  bool one_step_bound_ok = true;  // per-pair coupling bound held everywhere
};

CurvatureReport curvature_scan(const FamilySpec& spec, const WeightTable& table,
                               const FamilyEnumeration& en);

struct GeodesicReport {
  bool connected = false;       // the move graph is irreducible
  bool unit_geodesic = false;   // unit-move graph distance equals d1 for all pairs
  std::int64_t max_unit_distance = 0;  // diameter of the unit graph (if connected)
  // First pair where graph distance and d1 disagree, with both values.
  struct Counterexample {
    int u = 0, v = 0;
    std::int64_t d1_distance = 0;
    std::int64_t graph_distance = -1;  // -1 means unreachable
  };
  std::optional<Counterexample> counterexample;
};

// Builds the move graph (edges: positive transition probability), restricts
// to edges of d1-length one, and compares BFS distance with d1 on all pairs.
GeodesicReport geodesic_check(const FamilySpec& spec, const FamilyEnumeration& en);

struct GeodesicMove {
  LatticePath path;        // new value of the endpoint that moved
  bool moved_first = false;  // true if S moved, false if T moved
};

// The constructive distance-reducing move: orient so T is higher at the first
// differing index i0; flip the higher path down at its leftmost peak j >= i0
// if one exists, otherwise raise the lower path (end flip, or its rightmost
// Down flipped up). The result is always a member.
GeodesicMove geodesic_step(const LatticePath& s, const LatticePath& t, const FamilySpec& spec);

struct SandwichReport {
  bool holds = false;
  // Witness when it fails: members r <= s <= t with s a valid word outside
  // the family.
  struct Witness {
    std::string r, s, t;
  };
  std::optional<Witness> witness;
};

// Checks whether (R, T members, R <= S <= T) forces S into the family.
SandwichReport sandwich_closure_check(const FamilySpec& spec, const FamilyEnumeration& en);

// Half L1 distance between the empirical distribution of `samples` and
// uniform over the family. A non-member sample throws internal_error.
double empirical_tv(const std::vector<LatticePath>& samples, const FamilyEnumeration& en);

// Chi-square goodness of fit against the uniform distribution.
struct ChiSquare {
  double statistic = 0.0;
  double p_value = 1.0;
};
ChiSquare chisq_uniform(const std::vector<std::int64_t>& counts);

}  // namespace pathmc
