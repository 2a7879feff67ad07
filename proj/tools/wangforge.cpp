// Command-line front end: one subcommand per library operation.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "wangforge/algebra.hpp"
#include "wangforge/macro.hpp"
#include "wangforge/paper.hpp"
#include "wangforge/search.hpp"
#include "wangforge/text_format.hpp"
#include "wangforge/tiler.hpp"

using namespace wangforge;

namespace {

constexpr int kOk = 0;
constexpr int kFactFailed = 1;
constexpr int kUsage = 2;
constexpr int kBudget = 3;

// Flags shared by every subcommand that consumes a budget.
struct BudgetFlags {
  std::size_t max_states = std::size_t{1} << 22;
  std::size_t max_transitions = std::size_t{1} << 24;
  double timeout_s = 60;

  void add(CLI::App* app) {
    app->add_option("--max-states", max_states, "Largest transducer allowed (states)")
        ->capture_default_str();
    app->add_option("--max-transitions", max_transitions,
                    "Largest transducer allowed (transitions)")
        ->capture_default_str();
    app->add_option("--timeout", timeout_s, "Wall-clock limit in seconds (0: none)")
        ->capture_default_str();
  }

  // WANGFORGE_BUDGET_OVERRIDE="states=N,transitions=N,timeout=S" wins over flags.
  Budget budget() const {
    Budget b;
    b.max_states = max_states;
    b.max_transitions = max_transitions;
    double t = timeout_s;
    if (const char* env = std::getenv("WANGFORGE_BUDGET_OVERRIDE")) {
      std::stringstream ss(env);
      std::string item;
      while (std::getline(ss, item, ',')) {
        auto eq = item.find('=');
        if (eq == std::string::npos) throw CLI::ValidationError("WANGFORGE_BUDGET_OVERRIDE", item);
        std::string key = item.substr(0, eq);
        double value = std::stod(item.substr(eq + 1));
        if (key == "states")
          b.max_states = static_cast<std::size_t>(value);
        else if (key == "transitions")
          b.max_transitions = static_cast<std::size_t>(value);
        else if (key == "timeout")
          t = value;
        else
          throw CLI::ValidationError("WANGFORGE_BUDGET_OVERRIDE", "unknown key " + key);
      }
    }
    b.wall_time = t > 0 ? std::chrono::milliseconds(static_cast<long long>(t * 1000))
                        : std::chrono::milliseconds::max();
    return b;
  }
};

// "builtin:NAME" or "builtin:NAME:i" selects an embedded set or one of its
// components; anything else is a file path.
Transducer load(const std::string& spec) {
  const std::string prefix = "builtin:";
  if (spec.rfind(prefix, 0) != 0) {
    try {
      return read_wang_file(spec);
    } catch (const ParseError& e) {
      throw ParseError(e.line(), spec + ": " + e.what());
    }
  }
  std::string rest = spec.substr(prefix.size());
  auto colon = rest.find(':');
  NamedTileset set = named_tileset(rest.substr(0, colon));
  if (colon == std::string::npos) return set.tiles;
  std::size_t i = std::stoul(rest.substr(colon + 1));
  if (i >= set.components.size()) throw WangError("no component " + std::to_string(i));
  return set.components[i];
}

void emit(const std::string& text, const std::string& output) {
  if (output.empty() || output == "-")
    std::cout << text;
  else
    write_file(output, text);
}

std::string step_table(const std::vector<StepSize>& steps) {
  std::ostringstream out;
  for (const auto& s : steps)
    out << "k=" << s.k << " states=" << s.states << " transitions=" << s.transitions << '\n';
  return out.str();
}

std::string verdict_text(const Verdict& v) {
  std::ostringstream out;
  out << "verdict: " << to_string(v.kind);
  if (v.kind == Verdict::Kind::not_tiling) out << '(' << v.k << ')';
  if (v.kind == Verdict::Kind::periodic) out << '(' << v.k << ',' << v.p << ')';
  return out.str();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Wang tile sets as transducers: algebra, aperiodicity search and tilings"};
  app.require_subcommand(1);

  std::vector<std::string> inputs;
  std::string input, output, strategy = "trim_and_minimize";
  BudgetFlags budget_flags;

  auto add_io = [&](CLI::App* cmd, bool many) {
    if (many)
      cmd->add_option("-i,--input", inputs, "Wang set files (or builtin:NAME[:component])")
          ->required();
    else
      cmd->add_option("-i,--input", input, "Wang set file (or builtin:NAME[:component])")
          ->required();
    cmd->add_option("-o,--output", output, "Output file (default: stdout)");
  };

  auto* compose_cmd = app.add_subcommand("compose", "Stack transducers, first input at the bottom");
  add_io(compose_cmd, true);
  compose_cmd->add_option("--strategy", strategy, "plain, trim_each or trim_and_minimize")
      ->capture_default_str();
  budget_flags.add(compose_cmd);

  auto* rotate_cmd = app.add_subcommand("rotate", "Quarter turn: swap the two color axes");
  add_io(rotate_cmd, false);

  auto* union_cmd = app.add_subcommand("union", "Disjoint union of transducers");
  add_io(union_cmd, true);

  auto* trim_cmd = app.add_subcommand("trim", "Remove states without biinfinite runs");
  add_io(trim_cmd, false);

  auto* prune_cmd = app.add_subcommand(
      "prune", "Drop transitions whose output is never read or input never written");
  add_io(prune_cmd, false);

  auto* minimize_cmd =
      app.add_subcommand("minimize", "Quotient by forward and backward bisimulation");
  add_io(minimize_cmd, false);

  std::size_t k = 1;
  auto* power_cmd = app.add_subcommand("power", "k-fold self-composition");
  add_io(power_cmd, false);
  power_cmd->add_option("-k,--k", k, "Number of rows")->required();
  power_cmd->add_option("--strategy", strategy, "plain, trim_each or trim_and_minimize")
      ->capture_default_str();
  budget_flags.add(power_cmd);

  std::size_t max_k = 12, max_period = 64, threshold = 2000;
  bool prune_io = false, inter_scc = false;
  auto* check_cmd = app.add_subcommand(
      "check", "Decide NotTiling(k) or Periodic(k,p) by iterating powers");
  add_io(check_cmd, false);
  check_cmd->add_option("--max-k", max_k, "Largest power tried")->capture_default_str();
  check_cmd->add_option("--max-period", max_period, "Widest torus accepted")
      ->capture_default_str();
  check_cmd->add_option("--minimize-threshold", threshold,
                        "Minimize powers with more transitions than this")
      ->capture_default_str();
  check_cmd->add_flag("--prune", prune_io, "Also prune unread outputs and unwritten inputs");
  check_cmd->add_flag("--drop-inter-scc", inter_scc,
                      "Also delete transitions between strongly connected components");
  budget_flags.add(check_cmd);

  std::size_t n_tiles = 4, v_colors = 2, jobs = 1, limit = 0;
  bool symmetries = false, run_check = false;
  auto* enumerate_cmd = app.add_subcommand(
      "enumerate", "List Wang sets with a given number of tiles, one per isomorphism class");
  enumerate_cmd->add_option("--tiles", n_tiles, "Number of tiles")->required();
  enumerate_cmd->add_option("--vcolors", v_colors, "Number of vertical colors")
      ->capture_default_str();
  enumerate_cmd->add_flag("--symmetries", symmetries,
                          "Identify sets related by rotations and reflections");
  enumerate_cmd->add_flag("--check", run_check, "Test every candidate and print verdict lines");
  enumerate_cmd->add_option("--jobs", jobs, "Worker threads for --check")->capture_default_str();
  enumerate_cmd->add_option("--limit", limit, "Stop after this many candidates (0: all)");
  enumerate_cmd->add_option("--max-k", max_k, "Largest power tried by --check")
      ->capture_default_str();
  enumerate_cmd->add_option("--max-period", max_period, "Widest torus accepted by --check")
      ->capture_default_str();
  enumerate_cmd->add_option("-o,--output", output, "Output file (default: stdout)");
  budget_flags.add(enumerate_cmd);

  unsigned seed = 0;
  std::string direction = "reverse";
  auto* seeded_cmd = app.add_subcommand(
      "seeded", "Rows stacked on a constant row until no strip of k rows remains");
  add_io(seeded_cmd, false);
  seeded_cmd->add_option("--seed", seed, "Vertical color of the constant row")->required();
  seeded_cmd->add_option("--max-k", max_k, "Largest number of rows")->capture_default_str();
  seeded_cmd->add_option("--direction", direction,
                         "reverse: constant row on top; forward: at the bottom")
      ->capture_default_str();
  budget_flags.add(seeded_cmd);

  std::size_t max_side = 64;
  auto* square_cmd = app.add_subcommand("square", "Largest square that can be tiled");
  add_io(square_cmd, false);
  square_cmd->add_option("--max-side", max_side, "Largest side tried")->capture_default_str();
  budget_flags.add(square_cmd);

  unsigned family_n = 0;
  std::string family_format = "wang";
  auto* family_cmd = app.add_subcommand(
      "expand-family", "Letter-level transducer T_n of the Fibonacci family");
  family_cmd->add_option("-n,--n", family_n, "Index n")->required();
  family_cmd->add_option("--format", family_format, "wang or macro")->capture_default_str();
  family_cmd->add_option("-o,--output", output, "Output file (default: stdout)");

  std::size_t width = 0, height = 0;
  auto* tile_cmd = app.add_subcommand("tile", "Find a tiling of a width x height rectangle");
  add_io(tile_cmd, false);
  tile_cmd->add_option("--width", width, "Rectangle width")->required();
  tile_cmd->add_option("--height", height, "Rectangle height")->required();
  budget_flags.add(tile_cmd);

  std::string grid_path, style = "text";
  auto* render_cmd = app.add_subcommand("render", "Draw a grid as SVG or text");
  add_io(render_cmd, false);
  render_cmd->add_option("--grid", grid_path, "Grid file (grid v1)")->required();
  render_cmd->add_option("--style", style, "svg or text")->capture_default_str();

  std::string suite = "all";
  unsigned n_max = 2;
  auto* verify_cmd = app.add_subcommand(
      "verify-paper", "Replay the computer-checkable facts about the embedded tile sets");
  verify_cmd->add_option("--suite", suite, "t11, t11prime, kari10 or all")
      ->capture_default_str();
  verify_cmd->add_option("--n-max", n_max, "Largest n for the family checks")
      ->capture_default_str();
  verify_cmd->add_option("-o,--output", output, "Also write the fact lines to this file");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? kOk : kUsage;
  }

  try {
    if (*compose_cmd) {
      if (inputs.size() < 2) throw CLI::ValidationError("--input", "needs at least two inputs");
      Budget budget = budget_flags.budget();
      Strategy s = parse_strategy(strategy);
      Transducer acc = load(inputs[0]);
      for (std::size_t i = 1; i < inputs.size(); ++i)
        acc = reduce(compose(acc, load(inputs[i]), budget), s);
      emit(write_wang(acc), output);
    } else if (*rotate_cmd) {
      emit(write_wang(rotate(load(input))), output);
    } else if (*union_cmd) {
      Transducer acc = load(inputs[0]);
      for (std::size_t i = 1; i < inputs.size(); ++i) acc = disjoint_union(acc, load(inputs[i]));
      emit(write_wang(acc), output);
    } else if (*trim_cmd) {
      emit(write_wang(trim(load(input))), output);
    } else if (*prune_cmd) {
      emit(write_wang(prune_io_alphabet(load(input))), output);
    } else if (*minimize_cmd) {
      emit(write_wang(minimize_bisim(load(input))), output);
    } else if (*power_cmd) {
      emit(write_wang(power(load(input), k, parse_strategy(strategy), budget_flags.budget())),
           output);
    } else if (*check_cmd) {
      AperiodicityOptions options;
      options.budget = budget_flags.budget();
      options.budget.max_k = max_k;
      options.max_period = max_period;
      options.minimize_threshold = threshold;
      options.prune_io = prune_io;
      options.drop_inter_scc = inter_scc;
      Transducer t = load(input);
      Verdict v = test_aperiodicity(t, options);
      std::cout << step_table(v.steps) << verdict_text(v) << '\n'
                << ledger_line(canonical_key(t), v) << '\n';
      if (v.torus && !output.empty()) write_file(output, write_grid(*v.torus));
      return v.kind == Verdict::Kind::unknown ? kBudget : kOk;
    } else if (*enumerate_cmd) {
      std::vector<Candidate> candidates;
      for (const MultiGraph& g : enumerate_graphs(n_tiles)) {
        enumerate_wangsets(
            g, v_colors, [&](const Candidate& c) { candidates.push_back(c); }, symmetries);
        if (limit && candidates.size() >= limit) break;
      }
      if (limit && candidates.size() > limit) candidates.resize(limit);
      std::ostringstream out;
      if (!run_check) {
        for (const auto& c : candidates) out << c.key << '\n';
      } else {
        AperiodicityOptions options;
        options.budget = budget_flags.budget();
        options.budget.max_k = max_k;
        options.max_period = max_period;
        std::vector<Transducer> sets;
        for (const auto& c : candidates) sets.push_back(c.tiles);
        auto verdicts = test_many(sets, options, jobs);
        for (std::size_t i = 0; i < candidates.size(); ++i)
          out << ledger_line(candidates[i].key, verdicts[i]) << '\n';
      }
      emit(out.str(), output);
    } else if (*seeded_cmd) {
      Budget budget = budget_flags.budget();
      SeededReport r =
          seeded_row_analysis(load(input), seed, max_k, parse_direction(direction), budget);
      std::cout << step_table(r.reduced_steps);
      if (r.first_empty_k)
        std::cout << "empty at k=" << *r.first_empty_k;
      else
        std::cout << "nonempty through k=" << r.k_reached;
      std::cout << "; longest seed path ";
      if (r.longest_seed_path)
        std::cout << *r.longest_seed_path;
      else
        std::cout << "unbounded";
      std::cout << '\n';
      if (r.budget_exhausted && !r.first_empty_k) return kBudget;
    } else if (*square_cmd) {
      Transducer t = load(input);
      SquareReport r = max_square(t, max_side, budget_flags.budget());
      std::cout << "square " << r.size;
      if (r.unbounded) std::cout << " (periodic tiling: every square)";
      else if (r.proven_maximal) std::cout << " (maximal)";
      else std::cout << " (budget reached)";
      std::cout << '\n';
      if (r.witness && !output.empty()) write_file(output, write_grid(*r.witness));
      if (!r.unbounded && !r.proven_maximal) return kBudget;
    } else if (*family_cmd) {
      if (family_format == "macro")
        emit(write_macro(family_macro(family_n)), output);
      else if (family_format == "wang")
        emit(write_wang(expand_family(family_n).transducer), output);
      else
        throw CLI::ValidationError("--format", "expected wang or macro");
    } else if (*tile_cmd) {
      Transducer t = load(input);
      RectangleResult r = tile_rectangle(t, width, height, budget_flags.budget());
      if (r.grid) {
        emit(write_grid(*r.grid), output);
      } else if (r.proven_impossible) {
        std::cerr << "no tiling of " << width << 'x' << height << " exists\n";
        return kFactFailed;
      } else {
        std::cerr << "budget reached after " << r.columns_reached << " columns\n";
        return kBudget;
      }
    } else if (*render_cmd) {
      RenderStyle rs;
      if (style == "svg") rs = RenderStyle::svg;
      else if (style == "text") rs = RenderStyle::text;
      else throw CLI::ValidationError("--style", "expected svg or text");
      Transducer t = load(input);
      TilingGrid grid = read_grid(read_file(grid_path));
      if (auto bad = grid_violation(t.tiles(), grid)) throw WangError("invalid grid: " + *bad);
      emit(render(t.tiles(), grid, rs), output);
    } else if (*verify_cmd) {
      auto reports = run_suite(suite, n_max);
      std::size_t failed = 0;
      std::ostringstream lines;
      for (const auto& r : reports) {
        std::cout << (r.pass ? "[pass] " : "[FAIL] ") << r.id << " (" << r.elapsed_ms
                  << " ms)\n       " << r.details << '\n';
        lines << fact_line(r) << '\n';
        failed += !r.pass;
      }
      std::cout << '\n' << lines.str();
      std::cout << reports.size() - failed << '/' << reports.size() << " facts hold\n";
      if (!output.empty()) write_file(output, lines.str());
      return failed ? kFactFailed : kOk;
    }
  } catch (const CLI::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const BudgetExceeded& e) {
    std::cerr << "budget exceeded: " << e.what() << " (reached " << e.reached() << ")\n";
    return kBudget;
  } catch (const WangError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kUsage;
  }
  return kOk;
}
