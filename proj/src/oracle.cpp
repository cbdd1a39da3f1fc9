#include "pathmc/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>

#include <boost/math/special_functions/gamma.hpp>

#include "pathmc/flip.hpp"

namespace pathmc {

namespace {
constexpr std::int64_t kMatrixGuard = 20'000;
}

FamilyEnumeration enumerate_family(const FamilySpec& spec, std::int64_t cap) {
  const std::int64_t n = spec.n();
  FamilyEnumeration out;

  std::vector<Step> word(static_cast<std::size_t>(n));
  // Iterative DFS over (position, height, running max); Up explored first.
  struct Frame {
    std::int64_t h;
    std::int64_t running_max;
    int next_step;  // 0 = try Up, 1 = try Down, 2 = done
  };
  std::vector<Frame> stack;
  stack.push_back({0, 0, 0});
  while (!stack.empty()) {
    Frame& f = stack.back();
    const std::int64_t i = static_cast<std::int64_t>(stack.size());  // position being chosen
    if (i == n + 1) {
      if (static_cast<std::int64_t>(out.members.size()) >= cap)
        throw size_guard_error("family enumeration exceeds cap");
      out.members.emplace_back(spec.params(), word);
      stack.pop_back();
      continue;
    }
    if (f.next_step >= 2) {
      stack.pop_back();
      continue;
    }
    const Step s = f.next_step == 0 ? Step::Up : Step::Down;
    ++f.next_step;
    const std::int64_t h = f.h + (s == Step::Up ? spec.params().a : -spec.params().b);
    const std::int64_t running_max = std::max(f.running_max, h);
    if (!spec.completion_feasible(i, h, running_max)) continue;
    word[static_cast<std::size_t>(i - 1)] = s;
    stack.push_back({h, running_max, 0});
  }

  std::sort(out.members.begin(), out.members.end(),
            [](const LatticePath& x, const LatticePath& y) { return x.word() < y.word(); });
  out.index.reserve(out.members.size());
  for (std::size_t k = 0; k < out.members.size(); ++k)
    out.index.emplace(out.members[k].word_string(), static_cast<int>(k));
  return out;
}

TransitionMatrix build_transition_matrix(const FamilySpec& spec, const WeightTable& table,
                                         const FamilyEnumeration& en) {
  if (en.size() > kMatrixGuard)
    throw size_guard_error("transition matrix guarded at 20000 states");
  if (table.n != spec.n()) throw validation_error("weight table length does not match family");
  TransitionMatrix P;
  P.size = en.size();
  P.p.assign(static_cast<std::size_t>(P.size) * P.size, 0.0);
  for (int r = 0; r < en.size(); ++r) {
    for (std::int64_t i = 1; i <= spec.n(); ++i) {
      const double w = table.probs[static_cast<std::size_t>(i - 1)] / 4.0;
      for (int eps = 0; eps < 2; ++eps) {
        for (int delta = 0; delta < 2; ++delta) {
          const FlipInstruction f{i, eps == 1, delta == 1};
          const LatticePath target = chain_step(en.members[static_cast<std::size_t>(r)], f, spec);
          const auto c = en.find(target);
          if (!c) throw internal_error("chain step left the enumerated family");
          P.at(r, *c) += w;
        }
      }
    }
  }
  return P;
}

namespace {

double tv_from_uniform(const std::vector<double>& mu) {
  const double u = 1.0 / static_cast<double>(mu.size());
  double acc = 0.0;
  for (double x : mu) acc += std::abs(x - u);
  return acc / 2.0;
}

void step_distribution(const TransitionMatrix& P, const std::vector<double>& mu,
                       std::vector<double>& out) {
  const int V = P.size;
  out.assign(static_cast<std::size_t>(V), 0.0);
  for (int r = 0; r < V; ++r) {
    const double m = mu[static_cast<std::size_t>(r)];
    if (m == 0.0) continue;
    const double* row = P.p.data() + static_cast<std::size_t>(r) * V;
    for (int c = 0; c < V; ++c) out[static_cast<std::size_t>(c)] += m * row[c];
  }
  // Keep total mass pinned to one so rounding cannot drift over long runs.
  double mass = 0.0;
  for (double x : out) mass += x;
  for (double& x : out) x /= mass;
}

}  // namespace

std::vector<double> exact_tv_decay(const TransitionMatrix& P, int start, std::int64_t t_max) {
  if (start < 0 || start >= P.size) throw validation_error("start state out of range");
  std::vector<double> mu(static_cast<std::size_t>(P.size), 0.0);
  mu[static_cast<std::size_t>(start)] = 1.0;
  std::vector<double> out;
  out.reserve(static_cast<std::size_t>(t_max) + 1);
  out.push_back(tv_from_uniform(mu));
  std::vector<double> next;
  for (std::int64_t t = 1; t <= t_max; ++t) {
    step_distribution(P, mu, next);
    mu.swap(next);
    out.push_back(tv_from_uniform(mu));
  }
  return out;
}

std::vector<double> exact_tv_decay_worst(const TransitionMatrix& P, std::int64_t t_max,
                                         double stop_below) {
  const int V = P.size;
  std::vector<std::vector<double>> rows(static_cast<std::size_t>(V));
  for (int r = 0; r < V; ++r) {
    rows[static_cast<std::size_t>(r)].assign(static_cast<std::size_t>(V), 0.0);
    rows[static_cast<std::size_t>(r)][static_cast<std::size_t>(r)] = 1.0;
  }
  std::vector<double> out;
  std::vector<double> next;
  for (std::int64_t t = 0; t <= t_max; ++t) {
    if (t > 0) {
      for (auto& mu : rows) {
        step_distribution(P, mu, next);
        mu.swap(next);
      }
    }
    double worst = 0.0;
    for (const auto& mu : rows) worst = std::max(worst, tv_from_uniform(mu));
    out.push_back(worst);
    if (worst < stop_below) break;
  }
  return out;
}

std::int64_t exact_tmix(const TransitionMatrix& P, std::int64_t cap) {
  const int V = P.size;
  const double target = std::exp(-1.0);
  // rows[r] tracks P^t delta_r.
  std::vector<std::vector<double>> rows(static_cast<std::size_t>(V));
  for (int r = 0; r < V; ++r) {
    rows[static_cast<std::size_t>(r)].assign(static_cast<std::size_t>(V), 0.0);
    rows[static_cast<std::size_t>(r)][static_cast<std::size_t>(r)] = 1.0;
  }
  std::vector<double> next;
  for (std::int64_t t = 0;; ++t) {
    double worst = 0.0;
    for (const auto& mu : rows) worst = std::max(worst, tv_from_uniform(mu));
    if (worst <= target) return t;
    if (t >= cap) throw size_guard_error("mixing time exceeds iteration cap");
    for (auto& mu : rows) {
      step_distribution(P, mu, next);
      mu.swap(next);
    }
  }
}

double coupled_expected_distance(const LatticePath& s, const LatticePath& t,
                                 const FamilySpec& spec, const WeightTable& table) {
  double acc = 0.0;
  for (std::int64_t i = 1; i <= spec.n(); ++i) {
    const double w = table.probs[static_cast<std::size_t>(i - 1)] / 4.0;
    for (int eps = 0; eps < 2; ++eps) {
      for (int delta = 0; delta < 2; ++delta) {
        const FlipInstruction f{i, eps == 1, delta == 1};
        acc += w * static_cast<double>(d1(chain_step(s, f, spec), chain_step(t, f, spec)));
      }
    }
  }
  return acc;
}

CurvatureReport curvature_scan(const FamilySpec& spec, const WeightTable& table,
                               const FamilyEnumeration& en) {
  CurvatureReport report;
  const int V = en.size();
  const std::int64_t n = spec.n();
  const bool quadratic = table.mode == WeightMode::Quadratic;
  const double equality_target =
      quadratic ? 1.0 - table.kappa0 / table.Z : 1.0;  // interior equality case

  for (int u = 0; u < V; ++u) {
    for (int v = u + 1; v < V; ++v) {
      const LatticePath& S = en.members[static_cast<std::size_t>(u)];
      const LatticePath& T = en.members[static_cast<std::size_t>(v)];
      if (d1(S, T) != 1) continue;
      std::int64_t diff_index = 0;
      for (std::int64_t i = 1; i <= n; ++i) {
        if (S.height(i) != T.height(i)) {
          diff_index = i;
          break;
        }
      }
      NeighborPairStat stat;
      stat.u = u;
      stat.v = v;
      stat.diff_index = diff_index;
      stat.expected_d1 = coupled_expected_distance(S, T, spec, table);
      stat.contraction = 1.0 - stat.expected_d1;

      // Per-pair one-step bound from the coupling case analysis: for an
      // interior difference the expectation is at most
      //   1 - p_i + (p_{i-1} + p_{i+1})/2        (p_0 := 0)
      // and for a difference at the end position at most
      //   1 - (p_n - p_{n-1})/2.
      if (spec.kind() != FamilyKind::Culminating) {
        const auto prob = [&](std::int64_t i) {
          return (i >= 1 && i <= n) ? table.probs[static_cast<std::size_t>(i - 1)] : 0.0;
        };
        const double bound = diff_index < n
                                 ? 1.0 - prob(diff_index) +
                                       (prob(diff_index - 1) + prob(diff_index + 1)) / 2.0
                                 : 1.0 - (prob(n) - prob(n - 1)) / 2.0;
        if (stat.expected_d1 > bound + 1e-12) report.one_step_bound_ok = false;
      }

      report.pairs.push_back(stat);
    }
  }

  report.min_contraction = std::numeric_limits<double>::infinity();
  for (const auto& s : report.pairs) report.min_contraction = std::min(report.min_contraction, s.contraction);
  for (std::size_t k = 0; k < report.pairs.size(); ++k) {
    const auto& s = report.pairs[k];
    if (std::abs(s.contraction - report.min_contraction) <= 1e-12) report.min_pair_ids.push_back(k);
    if (s.diff_index < n && std::abs(s.expected_d1 - equality_target) <= 1e-12)
      report.equality_pair_ids.push_back(k);
  }
  return report;
}

GeodesicReport geodesic_check(const FamilySpec& spec, const FamilyEnumeration& en) {
  GeodesicReport report;
  const int V = en.size();
  std::vector<std::vector<int>> all_edges(static_cast<std::size_t>(V));
  std::vector<std::vector<int>> unit_edges(static_cast<std::size_t>(V));
  for (int r = 0; r < V; ++r) {
    const LatticePath& path = en.members[static_cast<std::size_t>(r)];
    for (std::int64_t i = 1; i <= spec.n(); ++i) {
      for (int eps = 0; eps < 2; ++eps) {
        for (int delta = 0; delta < 2; ++delta) {
          const LatticePath target = chain_step(path, FlipInstruction{i, eps == 1, delta == 1}, spec);
          const auto c = en.find(target);
          if (!c || *c == r) continue;
          all_edges[static_cast<std::size_t>(r)].push_back(*c);
          if (d1(path, target) == 1) unit_edges[static_cast<std::size_t>(r)].push_back(*c);
        }
      }
    }
  }

  auto bfs = [V](const std::vector<std::vector<int>>& adj, int src,
                 std::vector<std::int64_t>& dist) {
    dist.assign(static_cast<std::size_t>(V), -1);
    std::deque<int> queue{src};
    dist[static_cast<std::size_t>(src)] = 0;
    while (!queue.empty()) {
      const int x = queue.front();
      queue.pop_front();
      for (int y : adj[static_cast<std::size_t>(x)]) {
        if (dist[static_cast<std::size_t>(y)] < 0) {
          dist[static_cast<std::size_t>(y)] = dist[static_cast<std::size_t>(x)] + 1;
          queue.push_back(y);
        }
      }
    }
  };

  report.connected = true;
  report.unit_geodesic = true;
  std::vector<std::int64_t> dist;
  for (int r = 0; r < V && report.connected; ++r) {
    bfs(all_edges, r, dist);
    for (std::int64_t d : dist)
      if (d < 0) report.connected = false;
  }
  for (int r = 0; r < V; ++r) {
    bfs(unit_edges, r, dist);
    for (int c = 0; c < V; ++c) {
      const std::int64_t want =
          d1(en.members[static_cast<std::size_t>(r)], en.members[static_cast<std::size_t>(c)]);
      report.max_unit_distance = std::max(report.max_unit_distance, dist[static_cast<std::size_t>(c)]);
      if (dist[static_cast<std::size_t>(c)] != want) {
        report.unit_geodesic = false;
        if (!report.counterexample)
          report.counterexample =
              GeodesicReport::Counterexample{r, c, want, dist[static_cast<std::size_t>(c)]};
      }
    }
  }
  return report;
}

GeodesicMove geodesic_step(const LatticePath& s, const LatticePath& t, const FamilySpec& spec) {
  if (s == t) throw validation_error("geodesic step requires distinct paths");
  const std::int64_t n = spec.n();
  std::int64_t i0 = 0;
  for (std::int64_t i = 1; i <= n; ++i) {
    if (s.height(i) != t.height(i)) {
      i0 = i;
      break;
    }
  }
  const bool s_higher = s.height(i0) > t.height(i0);
  const LatticePath& higher = s_higher ? s : t;
  const LatticePath& lower = s_higher ? t : s;

  // Leftmost peak of the higher path at or after the first difference. The
  // search deliberately includes i0 itself: the first differing step of the
  // higher path is an Up, and when it is immediately followed by a Down that
  // peak can be the only valid move.
  for (std::int64_t j = i0; j <= n - 1; ++j) {
    if (higher.step(j) == Step::Up && higher.step(j + 1) == Step::Down) {
      LatticePath out = higher;
      out.swap_steps(j);
      if (!spec.is_member(out)) throw internal_error("geodesic peak flip left the family");
      return {std::move(out), s_higher};
    }
  }

  // No peak: the higher path is all Up after i0, so the lower path is raised.
  LatticePath raised = flip_raw(lower, FlipInstruction{n, true, true}, spec);
  if (!(raised == lower)) {
    if (!spec.is_member(raised)) throw internal_error("geodesic end flip left the family");
    return {std::move(raised), !s_higher};
  }
  std::int64_t j = 0;
  for (std::int64_t i = n; i >= 1; --i) {
    if (lower.step(i) == Step::Down) {
      j = i;
      break;
    }
  }
  if (j == 0) throw internal_error("geodesic step: lower path has no Down step");
  LatticePath out = lower;
  out.swap_steps(j);
  if (!spec.is_member(out)) throw internal_error("geodesic valley flip left the family");
  return {std::move(out), !s_higher};
}

SandwichReport sandwich_closure_check(const FamilySpec& spec, const FamilyEnumeration& en) {
  const std::int64_t n = spec.n();
  if (n > 24) throw size_guard_error("sandwich scan enumerates all words; n is capped at 24");
  SandwichReport report;
  report.holds = true;

  const std::uint64_t total = std::uint64_t{1} << n;
  std::vector<Step> word(static_cast<std::size_t>(n));
  for (std::uint64_t bits = 0; bits < total; ++bits) {
    for (std::int64_t i = 0; i < n; ++i)
      word[static_cast<std::size_t>(i)] = (bits >> i) & 1 ? Step::Down : Step::Up;
    LatticePath candidate(spec.params(), word);
    if (spec.is_member(candidate)) continue;
    const LatticePath* below = nullptr;
    const LatticePath* above = nullptr;
    for (const auto& member : en.members) {
      if (!below && partial_le(member, candidate)) below = &member;
      if (!above && partial_le(candidate, member)) above = &member;
      if (below && above) break;
    }
    if (below && above) {
      report.holds = false;
      report.witness = SandwichReport::Witness{below->word_string(), candidate.word_string(),
                                               above->word_string()};
      return report;
    }
  }
  return report;
}

double empirical_tv(const std::vector<LatticePath>& samples, const FamilyEnumeration& en) {
  std::vector<std::int64_t> counts(static_cast<std::size_t>(en.size()), 0);
  for (const auto& sample : samples) {
    const auto idx = en.find(sample);
    if (!idx) throw internal_error("empirical_tv: sample is not a family member");
    ++counts[static_cast<std::size_t>(*idx)];
  }
  const double total = static_cast<double>(samples.size());
  const double u = 1.0 / static_cast<double>(en.size());
  double acc = 0.0;
  for (std::int64_t c : counts) acc += std::abs(static_cast<double>(c) / total - u);
  return acc / 2.0;
}

ChiSquare chisq_uniform(const std::vector<std::int64_t>& counts) {
  const std::size_t k = counts.size();
  if (k < 2) throw validation_error("chi-square needs at least two cells");
  std::int64_t total = 0;
  for (std::int64_t c : counts) total += c;
  if (total <= 0) throw validation_error("chi-square needs samples");
  const double expected = static_cast<double>(total) / static_cast<double>(k);
  ChiSquare out;
  for (std::int64_t c : counts) {
    const double d = static_cast<double>(c) - expected;
    out.statistic += d * d / expected;
  }
  const double dof = static_cast<double>(k - 1);
  out.p_value = boost::math::gamma_q(dof / 2.0, out.statistic / 2.0);
  return out;
}

}  // namespace pathmc
