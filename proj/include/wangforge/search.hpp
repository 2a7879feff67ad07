#pragma once

#include <chrono>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <limits>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "wangforge/algebra.hpp"
#include "wangforge/budget.hpp"
#include "wangforge/tiler.hpp"
#include "wangforge/transducer.hpp"

namespace wangforge {

/// Directed multigraph with self-loops; edges sorted by (from, to).
struct MultiGraph {
  std::size_t vertices = 0;
  std::vector<std::pair<std::uint32_t, std::uint32_t>> edges;

  friend bool operator==(const MultiGraph&, const MultiGraph&) = default;
};

/// Which pruning criterion rejects a graph, if any.
enum class GraphRejection {
  none,
  edge_off_cycle,     // an edge u -> v with no path back from v to u
  bare_cycle_scc,     // a strongly connected component that is just a cycle
  too_few_edges,      // edges - vertices < 2
  isolated_vertex,    // a vertex without edges
};

GraphRejection classify_graph(const MultiGraph& g);

/// Canonical relabelling: smallest sorted edge list over the vertex
/// permutations that order vertices by (out-degree, in-degree, loops).
MultiGraph canonical_graph(const MultiGraph& g);

/// All multigraphs with `n_edges` edges and at most n_edges - 2 vertices
/// that survive the pruning criteria, one per isomorphism class, in
/// increasing canonical order.
std::vector<MultiGraph> enumerate_graphs(std::size_t n_edges);

/// Canonical key of a Wang set: smallest sorted tile list over all
/// permutations of both color axes (only colors used by some tile count).
/// With `symmetries`, also minimised over the eight rotations and
/// reflections of the square.
std::string canonical_key(const Transducer& t, bool symmetries = false);

struct Candidate {
  Transducer tiles;
  std::string key;
};

/// Every (south, north) assignment of `v_colors` colors to the edges of
/// `g` that has no duplicate tile, one per canonical key.
void enumerate_wangsets(const MultiGraph& g, std::size_t v_colors,
                        const std::function<void(const Candidate&)>& emit,
                        bool symmetries = false);

struct StepSize {
  std::size_t k = 0;
  std::size_t states = 0;
  std::size_t transitions = 0;
};

struct Verdict {
  enum class Kind { not_tiling, periodic, unknown };
  Kind kind = Kind::unknown;
  std::size_t k = 0;
  std::size_t p = 0;
  /// For periodic verdicts: a k x p torus, rows bottom to top, tiles
  /// given by index into the tested set.
  std::optional<TilingGrid> torus;
  std::vector<StepSize> steps;
  std::size_t peak_states = 0;
  std::size_t peak_transitions = 0;
  std::chrono::milliseconds elapsed{0};
};

std::string to_string(Verdict::Kind kind);

struct AperiodicityOptions {
  Budget budget;
  /// Widest torus accepted as a periodic witness.
  std::size_t max_period = std::numeric_limits<std::size_t>::max();
  /// Minimise once a power has more transitions than this.
  std::size_t minimize_threshold = 2000;
  /// Optional reductions; they preserve whether the plane can be tiled
  /// but not the set of k-row strips, so NotTiling(k) then speaks about
  /// plane tilings only.
  bool prune_io = false;
  bool drop_inter_scc = false;
};

/// Iterates k = 1, 2, ...: reduces t^k, then reports NotTiling(k) when it
/// is empty or Periodic(k, p) when a k-row periodic strip of width p
/// closes into a torus.
Verdict test_aperiodicity(const Transducer& t, const AperiodicityOptions& options = {});

/// Tests every set, spreading the work over `jobs` threads. Results are in
/// input order whatever the scheduling.
std::vector<Verdict> test_many(const std::vector<Transducer>& sets,
                               const AperiodicityOptions& options, std::size_t jobs);

/// Smallest-width torus with `height` rows, found through the diagonal of
/// the trimmed power; nullopt when none of width <= max_width exists.
std::optional<TilingGrid> find_torus(const Transducer& t, std::size_t height,
                                     std::size_t max_width, const Budget& budget);

/// "verdict v1 | key | kind | k | p | budget_used"
std::string ledger_line(const std::string& key, const Verdict& v);

enum class Direction {
  /// Seed row at the bottom; each step adds a row above.
  forward,
  /// Seed row on top; each step adds a row below.
  reverse,
};

Direction parse_direction(std::string_view text);
std::string_view to_string(Direction d);

struct SeededReport {
  std::optional<std::size_t> first_empty_k;
  std::vector<StepSize> raw_steps;
  std::vector<StepSize> reduced_steps;
  /// Longest path reading and writing only the seed letter in the last
  /// composed (untrimmed) transducer; nullopt when unbounded.
  std::optional<std::size_t> longest_seed_path;
  std::size_t k_reached = 0;
  bool budget_exhausted = false;
  std::chrono::milliseconds elapsed{0};
};

/// t_0 is the constant row of `seed`; t_k composes one more copy of t
/// (above or below, by direction) and is then trimmed and minimised.
SeededReport seeded_row_analysis(const Transducer& t, ColorId seed, std::size_t k_max,
                                 Direction direction, const Budget& budget = Budget::unlimited());

/// Longest path using only transitions labelled letter|letter; nullopt when
/// such transitions form a cycle.
std::optional<std::size_t> longest_constant_path(const Transducer& t, ColorId letter);

struct SquareReport {
  std::size_t size = 0;
  bool unbounded = false;       // a periodic tiling exists
  bool proven_maximal = false;  // size + 1 was shown impossible
  std::optional<TilingGrid> witness;
};

/// Grows squares one side length at a time with tile_rectangle until one
/// is impossible or the budget runs out.
SquareReport max_square(const Transducer& t, std::size_t max_side, const Budget& budget);

}  // namespace wangforge
