#include <algorithm>
#include <atomic>
#include <cstdint>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "pathmc/cftp.hpp"
#include "pathmc/chain.hpp"
#include "pathmc/errors.hpp"
#include "pathmc/oracle.hpp"
#include "pathmc/render.hpp"
#include "pathmc/serialize.hpp"

using nlohmann::json;
using namespace pathmc;

namespace {

int thread_budget() {
  if (const char* env = std::getenv("PATHMC_THREADS")) {
    const int v = std::atoi(env);
    if (v >= 1) return v;
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : static_cast<int>(hw);
}

// Runs job(k) for k = 0..jobs-1 on the worker budget; results are collected
// by index so the output order never depends on scheduling.
template <typename Result, typename Job>
std::vector<Result> run_indexed(std::int64_t jobs, Job&& job) {
  std::vector<Result> results(static_cast<std::size_t>(jobs));
  const int workers = std::min<std::int64_t>(thread_budget(), jobs);
  if (workers <= 1) {
    for (std::int64_t k = 0; k < jobs; ++k) results[static_cast<std::size_t>(k)] = job(k);
    return results;
  }
  std::atomic<std::int64_t> next{0};
  std::vector<std::thread> pool;
  pool.reserve(static_cast<std::size_t>(workers));
  std::exception_ptr error;
  std::mutex error_mutex;
  for (int w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (;;) {
        const std::int64_t k = next.fetch_add(1);
        if (k >= jobs) return;
        try {
          results[static_cast<std::size_t>(k)] = job(k);
        } catch (...) {
          std::lock_guard<std::mutex> lock(error_mutex);
          if (!error) error = std::current_exception();
          return;
        }
      }
    });
  }
  for (auto& t : pool) t.join();
  if (error) std::rethrow_exception(error);
  return results;
}

struct FamilyArgs {
  std::string family = "meander";
  std::int64_t n = 10;
  std::int64_t a = 1;
  std::int64_t b = 1;
  std::int64_t wall_h = 0;
  std::int64_t wall_r = 1;
  std::int64_t wall_s = 0;

  FamilySpec make() const {
    const FamilyKind kind = family_from_name(family);
    return FamilySpec::make(kind, StepParams{n, a, b}, WallWindow{wall_h, wall_r, wall_s});
  }
};

void add_family_options(CLI::App* cmd, FamilyArgs& args) {
  cmd->add_option("--family", args.family, "meander|wall|excursion|culminating")
      ->default_val("meander");
  cmd->add_option("--n", args.n, "path length")->required();
  cmd->add_option("--a", args.a, "up-step size")->default_val(1);
  cmd->add_option("--b", args.b, "down-step magnitude")->default_val(1);
  cmd->add_option("--wall-h", args.wall_h, "wall height (wall family)");
  cmd->add_option("--wall-r", args.wall_r, "wall window start");
  cmd->add_option("--wall-s", args.wall_s, "wall window end");
}

struct SampleArgs {
  FamilyArgs fam;
  std::string weights = "quadratic";
  std::uint64_t seed = 1;
  std::int64_t samples = 1;
  std::optional<std::int64_t> steps;
  double tv_target = 0.01;
  std::int64_t trace_every = 0;
};

int cmd_sample(const SampleArgs& args) {
  const FamilySpec spec = args.fam.make();
  const WeightTable table = WeightTable::build(spec.n(), weight_mode_from_name(args.weights));
  const std::int64_t steps =
      args.steps ? *args.steps : default_mcmc_steps(spec.n(), args.tv_target);
  if (steps < 0) throw validation_error("--steps must be >= 0");
  if (args.samples < 1) throw validation_error("--samples must be >= 1");

  if (args.trace_every > 0) {
    // Trace mode: single trajectory, records every k steps.
    LatticePath path = spec.extremal_paths().second;
    TupleStream stream(args.seed, table);
    for (std::int64_t t = 1; t <= steps; ++t) {
      chain_step_inplace(path, stream.at(t), spec);
      if (t % args.trace_every == 0) {
        json rec = {{"t", t},
                    {"word", path.word_string()},
                    {"final", path.final_height()},
                    {"max", path.max_height()}};
        std::cout << rec.dump() << "\n";
      }
    }
    json rec = path_record(spec, path);
    rec["steps"] = steps;
    rec["seed"] = args.seed;
    std::cout << rec.dump() << "\n";
    return exit_ok;
  }

  auto rows = run_indexed<std::string>(args.samples, [&](std::int64_t k) {
    const std::uint64_t seed = args.seed + static_cast<std::uint64_t>(k);
    const LatticePath path = mcmc_run(spec, table, steps, seed);
    json rec = path_record(spec, path);
    rec["steps"] = steps;
    rec["seed"] = seed;
    return rec.dump();
  });
  for (const auto& row : rows) std::cout << row << "\n";
  return exit_ok;
}

struct CftpArgs {
  FamilyArgs fam;
  std::string weights = "quadratic";
  std::uint64_t seed = 1;
  std::int64_t samples = 1;
  std::int64_t tau0 = 1;
  std::int64_t cap = std::int64_t{1} << 30;
};

int cmd_cftp(const CftpArgs& args) {
  const FamilySpec spec = args.fam.make();
  const WeightTable table = WeightTable::build(spec.n(), weight_mode_from_name(args.weights));
  if (args.samples < 1) throw validation_error("--samples must be >= 1");

  auto rows = run_indexed<std::string>(args.samples, [&](std::int64_t k) {
    const std::uint64_t seed = args.seed + static_cast<std::uint64_t>(k);
    const CftpResult res = cftp_sample(spec, table, seed, args.tau0, args.cap);
    json rec = path_record(spec, res.path);
    rec["seed"] = seed;
    rec["tau_final"] = res.tau_final;
    rec["tuples"] = res.tuples_consumed;
    return rec.dump();
  });
  for (const auto& row : rows) std::cout << row << "\n";
  return exit_ok;
}

int cmd_enumerate(const FamilyArgs& fam, std::int64_t cap) {
  const FamilySpec spec = fam.make();
  const FamilyEnumeration en = enumerate_family(spec, cap);
  for (const auto& member : en.members) std::cout << path_record(spec, member).dump() << "\n";
  std::cout << json{{"count", en.size()}}.dump() << "\n";
  return exit_ok;
}

struct VerifyArgs {
  std::string check;
  FamilyArgs fam;
  std::string weights = "quadratic";
  std::int64_t tuples = 10000;
  std::uint64_t seed = 1;
  bool with_tmix = false;
};

json instance_json(const FamilySpec& spec) {
  json j = family_to_json(spec);
  return j;
}

int cmd_verify(const VerifyArgs& args) {
  const FamilySpec spec = args.fam.make();
  const WeightTable table = WeightTable::build(spec.n(), weight_mode_from_name(args.weights));
  const FamilyEnumeration en = enumerate_family(spec);
  json report;
  report["check"] = args.check;
  report["instance"] = instance_json(spec);
  report["members"] = en.size();

  if (args.check == "matrix") {
    const TransitionMatrix P = build_transition_matrix(spec, table, en);
    double max_asym = 0.0, max_row_err = 0.0, max_stat_err = 0.0;
    const int V = P.size;
    std::vector<double> col_sum(static_cast<std::size_t>(V), 0.0);
    for (int r = 0; r < V; ++r) {
      double row = 0.0;
      for (int c = 0; c < V; ++c) {
        max_asym = std::max(max_asym, std::abs(P.at(r, c) - P.at(c, r)));
        row += P.at(r, c);
        col_sum[static_cast<std::size_t>(c)] += P.at(r, c) / V;
      }
      max_row_err = std::max(max_row_err, std::abs(row - 1.0));
    }
    for (double s : col_sum) max_stat_err = std::max(max_stat_err, std::abs(s - 1.0 / V));
    report["max_asymmetry"] = max_asym;
    report["max_row_sum_error"] = max_row_err;
    report["max_stationarity_error"] = max_stat_err;
    report["pass"] = max_asym == 0.0 && max_row_err <= 1e-12 && max_stat_err <= 1e-12;
    if (args.with_tmix) report["tmix"] = exact_tmix(P);
  } else if (args.check == "geodesic") {
    const GeodesicReport g = geodesic_check(spec, en);
    report["connected"] = g.connected;
    report["unit_geodesic"] = g.unit_geodesic;
    report["max_unit_distance"] = g.max_unit_distance;
    report["pass"] = g.connected && g.unit_geodesic;
    if (g.counterexample) {
      report["witnesses"] = json::array(
          {{{"u", en.members[static_cast<std::size_t>(g.counterexample->u)].word_string()},
            {"v", en.members[static_cast<std::size_t>(g.counterexample->v)].word_string()},
            {"d1", g.counterexample->d1_distance},
            {"graph_distance", g.counterexample->graph_distance}}});
    }
  } else if (args.check == "curvature") {
    const CurvatureReport c = curvature_scan(spec, table, en);
    report["neighbor_pairs"] = c.pairs.size();
    report["min_contraction"] = c.min_contraction;
    report["equality_pairs"] = c.equality_pair_ids.size();
    report["one_step_bound_ok"] = c.one_step_bound_ok;
    if (table.mode == WeightMode::Quadratic) {
      report["effective_kappa"] = table.effective_kappa();
      report["pass"] = c.min_contraction >= table.effective_kappa() - 1e-12 && c.one_step_bound_ok;
    } else {
      report["pass"] = c.one_step_bound_ok;
    }
    json witnesses = json::array();
    for (std::size_t id : c.min_pair_ids) {
      if (witnesses.size() >= 4) break;
      const auto& pr = c.pairs[id];
      witnesses.push_back({{"u", en.members[static_cast<std::size_t>(pr.u)].word_string()},
                           {"v", en.members[static_cast<std::size_t>(pr.v)].word_string()},
                           {"diff_index", pr.diff_index},
                           {"expected_d1", pr.expected_d1}});
    }
    report["witnesses"] = witnesses;
  } else if (args.check == "monotone") {
    // Exhaustive: all ordered member pairs, all 4n tuples.
    bool ok = true;
    json witness;
    for (int u = 0; u < en.size() && ok; ++u) {
      for (int v = 0; v < en.size() && ok; ++v) {
        const auto& S = en.members[static_cast<std::size_t>(u)];
        const auto& T = en.members[static_cast<std::size_t>(v)];
        if (!partial_le(S, T)) continue;
        for (std::int64_t i = 1; i <= spec.n() && ok; ++i) {
          for (int eps = 0; eps < 2 && ok; ++eps) {
            for (int delta = 0; delta < 2 && ok; ++delta) {
              const FlipInstruction f{i, eps == 1, delta == 1};
              if (!partial_le(chain_step(S, f, spec), chain_step(T, f, spec))) {
                ok = false;
                witness = {{"u", S.word_string()},
                           {"v", T.word_string()},
                           {"i", i},
                           {"eps_up", eps == 1},
                           {"delta_plus", delta == 1}};
              }
            }
          }
        }
      }
    }
    report["pass"] = ok;
    if (!ok) report["witnesses"] = json::array({witness});
  } else if (args.check == "sandwich") {
    const SandwichReport s = sandwich_closure_check(spec, en);
    report["holds"] = s.holds;
    // The scan itself always "passes"; the closure verdict is data.
    report["pass"] = true;
    if (s.witness)
      report["witnesses"] =
          json::array({{{"r", s.witness->r}, {"s", s.witness->s}, {"t", s.witness->t}}});
  } else {
    throw validation_error("unknown check: " + args.check +
                           " (expected matrix|geodesic|curvature|monotone|sandwich)");
  }
  std::cout << report.dump(2) << "\n";
  return report["pass"].get<bool>() ? exit_ok : 1;
}

struct MixArgs {
  FamilyArgs fam;
  std::string weights = "quadratic";
  std::vector<std::int64_t> sizes;
  bool exact = false;
  bool coupling = false;
  std::int64_t seeds = 100;
  std::uint64_t seed = 1;
  std::int64_t cap = std::int64_t{1} << 40;
  std::string metric = "mean";
};

int cmd_mix(const MixArgs& args) {
  if (args.exact == args.coupling)
    throw validation_error("choose exactly one of --exact / --coupling");
  std::vector<std::int64_t> sizes = args.sizes.empty() ? std::vector<std::int64_t>{args.fam.n}
                                                       : args.sizes;
  std::cout << "n,family,a,b,mode,metric,value,seed\n";
  for (std::int64_t n : sizes) {
    FamilyArgs fam = args.fam;
    fam.n = n;
    const FamilySpec spec = fam.make();
    const WeightTable table = WeightTable::build(n, weight_mode_from_name(args.weights));
    std::ostringstream row;
    if (args.exact) {
      const FamilyEnumeration en = enumerate_family(spec);
      const TransitionMatrix P = build_transition_matrix(spec, table, en);
      row << n << "," << family_name(spec.kind()) << "," << fam.a << "," << fam.b << ","
          << args.weights << ",tmix_exact," << exact_tmix(P) << ",0";
    } else {
      auto times = run_indexed<std::int64_t>(args.seeds, [&](std::int64_t k) {
        const CouplingResult res =
            coupling_time(spec, table, args.seed + static_cast<std::uint64_t>(k), args.cap);
        if (!res.coalesced) throw size_guard_error("coupling did not coalesce within cap");
        return res.steps;
      });
      double value = 0.0;
      if (args.metric == "mean") {
        for (std::int64_t t : times) value += static_cast<double>(t);
        value /= static_cast<double>(times.size());
      } else if (args.metric == "median") {
        std::sort(times.begin(), times.end());
        value = static_cast<double>(times[times.size() / 2]);
      } else {
        throw validation_error("--metric must be mean or median");
      }
      row << n << "," << family_name(spec.kind()) << "," << fam.a << "," << fam.b << ","
          << args.weights << ",coupling_" << args.metric << "," << value << "," << args.seed;
    }
    std::cout << row.str() << "\n";
  }
  return exit_ok;
}

struct StatsArgs {
  FamilyArgs fam;
  std::string weights = "quadratic";
  std::uint64_t seed = 1;
  std::optional<std::int64_t> steps;
  std::vector<std::string> functionals{"final_height", "max_height", "area", "peak_count"};
};

int cmd_stats(const StatsArgs& args) {
  const FamilySpec spec = args.fam.make();
  const WeightTable table = WeightTable::build(spec.n(), weight_mode_from_name(args.weights));
  const std::int64_t steps = args.steps ? *args.steps : default_mcmc_steps(spec.n());
  for (const auto& name : args.functionals) {
    const Functional f = functional_from_name(name);
    const double estimate = estimate_functional(spec, table, steps, args.seed, f);
    json rec = {{"functional", name}, {"estimate", estimate}, {"steps", steps}, {"seed", args.seed}};
    std::cout << rec.dump() << "\n";
  }
  return exit_ok;
}

struct RenderArgs {
  std::string input = "-";
  std::string output = "-";
  std::string format = "svg";
  int width = 800;
  int height = 300;
};

int cmd_render(const RenderArgs& args) {
  std::string line;
  if (args.input == "-") {
    if (!std::getline(std::cin, line)) throw validation_error("no input record on stdin");
  } else {
    std::ifstream in(args.input);
    if (!in) throw validation_error("cannot open input file: " + args.input);
    if (!std::getline(in, line)) throw validation_error("input file is empty");
  }
  json rec;
  try {
    rec = json::parse(line);
  } catch (const json::parse_error& e) {
    throw validation_error(std::string("malformed JSON record: ") + e.what());
  }
  auto [spec, path] = parse_path_record(rec);

  std::string body;
  if (args.format == "svg") {
    RenderOptions opts;
    opts.width = args.width;
    opts.height = args.height;
    body = render_svg(spec, path, opts);
  } else if (args.format == "ascii") {
    body = render_ascii(spec, path);
  } else {
    throw validation_error("--format must be svg or ascii");
  }
  if (args.output == "-") {
    std::cout << body;
  } else {
    std::ofstream out(args.output, std::ios::binary);
    if (!out) throw validation_error("cannot open output file: " + args.output);
    out << body;
  }
  return exit_ok;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Uniform sampling of constrained lattice paths"};
  app.require_subcommand(1);

  SampleArgs sample_args;
  auto* sample = app.add_subcommand("sample", "forward MCMC sampling");
  add_family_options(sample, sample_args.fam);
  sample->add_option("--weights", sample_args.weights, "quadratic|uniform")->default_val("quadratic");
  sample->add_option("--seed", sample_args.seed)->default_val(1);
  sample->add_option("--samples", sample_args.samples)->default_val(1);
  sample->add_option("--steps", sample_args.steps, "chain steps (default: TV-target formula)");
  sample->add_option("--tv-target", sample_args.tv_target)->default_val(0.01);
  sample->add_option("--trace-every", sample_args.trace_every, "emit a trace record every k steps");

  CftpArgs cftp_args;
  auto* cftp = app.add_subcommand("cftp", "exact sampling by coupling from the past");
  add_family_options(cftp, cftp_args.fam);
  cftp->add_option("--weights", cftp_args.weights)->default_val("quadratic");
  cftp->add_option("--seed", cftp_args.seed)->default_val(1);
  cftp->add_option("--samples", cftp_args.samples)->default_val(1);
  cftp->add_option("--tau0", cftp_args.tau0)->default_val(1);
  cftp->add_option("--cap", cftp_args.cap);

  FamilyArgs enum_args;
  std::int64_t enum_cap = 10'000'000;
  auto* enumerate = app.add_subcommand("enumerate", "exhaustively list family members");
  add_family_options(enumerate, enum_args);
  enumerate->add_option("--cap", enum_cap);

  VerifyArgs verify_args;
  auto* verify = app.add_subcommand("verify", "exact small-instance checks");
  verify->add_option("check", verify_args.check, "matrix|geodesic|curvature|monotone|sandwich")
      ->required();
  add_family_options(verify, verify_args.fam);
  verify->add_option("--weights", verify_args.weights)->default_val("quadratic");
  verify->add_flag("--tmix", verify_args.with_tmix, "include exact mixing time (matrix check)");

  MixArgs mix_args;
  auto* mix = app.add_subcommand("mix", "mixing-time measurements");
  add_family_options(mix, mix_args.fam);
  mix->add_option("--weights", mix_args.weights)->default_val("quadratic");
  mix->add_option("--sizes", mix_args.sizes, "comma-separated n values")->delimiter(',');
  mix->add_flag("--exact", mix_args.exact, "exact t_mix from the transition matrix");
  mix->add_flag("--coupling", mix_args.coupling, "empirical coupling times");
  mix->add_option("--seeds", mix_args.seeds)->default_val(100);
  mix->add_option("--seed", mix_args.seed)->default_val(1);
  mix->add_option("--cap", mix_args.cap);
  mix->add_option("--metric", mix_args.metric, "mean|median")->default_val("mean");

  StatsArgs stats_args;
  auto* stats = app.add_subcommand("stats", "time-average functional estimates");
  add_family_options(stats, stats_args.fam);
  stats->add_option("--weights", stats_args.weights)->default_val("quadratic");
  stats->add_option("--seed", stats_args.seed)->default_val(1);
  stats->add_option("--steps", stats_args.steps);
  stats->add_option("--functional", stats_args.functionals,
                    "final_height|max_height|area|peak_count")
      ->delimiter(',');

  RenderArgs render_args;
  auto* render = app.add_subcommand("render", "draw a path record as SVG or ASCII");
  render->add_option("--input", render_args.input, "JSONL record file, or - for stdin");
  render->add_option("--output", render_args.output, "output file, or - for stdout");
  render->add_option("--format", render_args.format, "svg|ascii")->default_val("svg");
  render->add_option("--width", render_args.width)->default_val(800);
  render->add_option("--height", render_args.height)->default_val(300);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? exit_ok : exit_validation;
  }

  try {
    if (sample->parsed()) return cmd_sample(sample_args);
    if (cftp->parsed()) return cmd_cftp(cftp_args);
    if (enumerate->parsed()) return cmd_enumerate(enum_args, enum_cap);
    if (verify->parsed()) return cmd_verify(verify_args);
    if (mix->parsed()) return cmd_mix(mix_args);
    if (stats->parsed()) return cmd_stats(stats_args);
    if (render->parsed()) return cmd_render(render_args);
  } catch (const validation_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return exit_validation;
  } catch (const size_guard_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return exit_size_guard;
  } catch (const internal_error& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return exit_internal;
  }
  return exit_validation;
}
