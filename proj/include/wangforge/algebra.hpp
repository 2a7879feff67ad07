#pragma once

#include <cstddef>
#include <optional>
#include <set>
#include <string_view>
#include <vector>

#include "wangforge/budget.hpp"
#include "wangforge/transducer.hpp"

namespace wangforge {

/// Stacks `a` below `b`: tiles ((w,w'),(e,e'),s,n') for every pair with
/// n = s'. Product states are numbered densely in first-seen order. When
/// both operands are named, a product state is named by concatenating the
/// two names.
Transducer compose(const Transducer& a, const Transducer& b,
                   const Budget& budget = Budget::unlimited());

/// compose() together with the (a-state, b-state) origin of every
/// product state.
struct TracedCompose {
  Transducer result;
  std::vector<std::pair<ColorId, ColorId>> origin;
};
TracedCompose compose_traced(const Transducer& a, const Transducer& b,
                             const Budget& budget = Budget::unlimited());

/// Folds compose over a bottom-to-top sequence of factors.
Transducer compose_all(const std::vector<Transducer>& factors,
                       const Budget& budget = Budget::unlimited());

/// Quarter turn: (w,e,s,n) becomes (s,n,e,w); the axes swap.
Transducer rotate(const Transducer& t);

/// Horizontal mirror image: every run read right to left.
Transducer reverse(const Transducer& t);

/// Disjoint union; states of `b` are numbered after those of `a`.
Transducer disjoint_union(const Transducer& a, const Transducer& b);

/// Removes sources and sinks to a fixpoint and renumbers the surviving
/// states densely (keeping their relative order and names).
Transducer trim(const Transducer& t);

/// trim() together with the original id of every surviving state.
struct TracedTrim {
  Transducer result;
  std::vector<ColorId> kept;
};
TracedTrim trim_traced(const Transducer& t);

/// Drops transitions whose output is never read or whose input is never
/// written, then trims, to a fixpoint.
Transducer prune_io_alphabet(const Transducer& t);

/// Strongly connected component id of every state (Tarjan, iterative).
std::vector<std::uint32_t> scc_ids(const Transducer& t);

/// Removes transitions joining two different strongly connected components.
Transducer drop_inter_scc(const Transducer& t);

/// Block id of each state, blocks numbered by their smallest member.
using Partition = std::vector<std::uint32_t>;

/// Coarsest forward bisimulation: states related iff they have the same
/// labelled transitions into related blocks.
Partition forward_bisimulation(const Transducer& t);

/// Quotient by a partition; merged states are named by joining member
/// names with '+'.
Transducer quotient(const Transducer& t, const Partition& p);

/// Alternates forward and backward bisimulation quotients to a fixpoint.
Transducer minimize_bisim(const Transducer& t);

enum class Strategy { plain, trim_each, trim_and_minimize };

Strategy parse_strategy(std::string_view text);
std::string_view to_string(Strategy s);

/// Applies the reduction associated with a strategy.
Transducer reduce(const Transducer& t, Strategy s);

/// t^k with the strategy's reduction after every composition. Throws
/// BudgetExceeded with the last completed k.
Transducer power(const Transducer& t, std::size_t k, Strategy strategy,
                 const Budget& budget = Budget::unlimited());

/// True iff trim(t) has no transitions (no biinfinite row exists).
bool is_empty(const Transducer& t);

/// A cycle of the diagonal subautomaton (transitions with s = n).
struct PeriodicWitness {
  std::size_t period = 0;
  std::vector<Tile> cycle;
};

/// Finds a run w -> w with w periodic, if any.
std::optional<PeriodicWitness> has_periodic_point(const Transducer& t);

/// Word of (south, north) pairs labelling a path.
using Label = std::pair<ColorId, ColorId>;

struct RunWindow {
  std::vector<Label> word;
  friend auto operator<=>(const RunWindow&, const RunWindow&) = default;
};

/// All label words of length 1..L along paths of trim(t).
std::set<RunWindow> window_language(const Transducer& t, std::size_t L);

/// Window languages agree up to length L.
bool equivalent_upto(const Transducer& a, const Transducer& b, std::size_t L);

/// A state map: mapping[q] is the image of state q, or -1 for states that
/// carry no transition.
using StateMap = std::vector<long>;

/// Label-preserving bijection between the active states, if any.
std::optional<StateMap> isomorphic(const Transducer& a, const Transducer& b);

/// Injective state map sending every transition of `a` onto a transition
/// of `b` with the same label, if any.
std::optional<StateMap> embeds_in(const Transducer& a, const Transducer& b);

/// Which side of the middle state carries the new copy in
/// forbid_succession.
enum class SplitSide {
  /// The copy takes the transition `first` and every outgoing transition
  /// except `second`.
  incoming,
  /// The copy takes the transition `second` and every incoming transition
  /// except `first`.
  outgoing,
};

/// Splits the middle state so that no run uses transition `first`
/// immediately followed by `second` (tile indices into t); every other run
/// survives. The copy is appended as a new state named with a trailing '.
Transducer forbid_succession(const Transducer& t, std::size_t first,
                             std::size_t second, SplitSide side);

}  // namespace wangforge
