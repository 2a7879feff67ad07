#pragma once

#include <cstdint>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "wangforge/algebra.hpp"
#include "wangforge/budget.hpp"
#include "wangforge/macro.hpp"
#include "wangforge/transducer.hpp"

namespace wangforge {

/// A published tile set with its component split. Component i is named
/// by component_names[i] (a single letter used in row words).
struct NamedTileset {
  std::string name;
  Transducer tiles;
  std::string component_names;
  std::vector<Transducer> components;
};

/// Names accepted by named_tileset().
extern const char* const kTilesetNames[4];

/// "T11", "T11prime", "Culik13" or "Kari10like". States carry display
/// names so that compositions are named like the published figures.
NamedTileset named_tileset(std::string_view name);

/// FNV-1a over the Wang text serialization.
std::uint64_t tileset_checksum(const Transducer& t);

/// Expected checksums of the embedded tile tables.
std::uint64_t expected_checksum(std::string_view name);

/// Composition of the components selected by `word`, bottom letter first.
Transducer compose_word(const NamedTileset& set, std::string_view word,
                        const Budget& budget = Budget::unlimited());

/// First word w of the given length, in depth-first order over the
/// component letters, with sc(T_w) nonempty: the row types of some strip of
/// `length` biinfinite rows. nullopt when every word dies earlier.
std::optional<std::string> find_row_word(const NamedTileset& set, std::size_t length,
                                         const Budget& budget = Budget::unlimited());

struct FactReport {
  std::string id;
  bool pass = false;
  std::string details;
  std::uint64_t elapsed_ms = 0;
};

/// "fact v1 | id | pass|fail | details"
std::string fact_line(const FactReport& r);

/// Emptiness of sc(T_w) for the published words of T11 or T11prime.
FactReport verify_empties(std::string_view name);

/// The forbidden row words for T11 or T11prime.
std::vector<std::string> empty_words(std::string_view name);

struct BlockDecomposition {
  bool forced = false;
  std::set<std::string> blocks;
  /// Context length at which every cut became locally determined.
  std::size_t context = 0;
  std::string reason;
};

/// Blocks into which every biinfinite binary word avoiding `forbidden`
/// splits. Blocks start at the return words to 1; a return word with a
/// single possible predecessor and successor is fused with them. The
/// factorization is then checked to be forced by a bounded context.
BlockDecomposition derive_row_decomposition(const std::vector<std::string>& forbidden,
                                            std::size_t max_context = 24);

/// derive_row_decomposition on the emptiness words of T11 or T11prime,
/// compared with the published block set.
FactReport verify_row_decomposition(std::string_view name);

/// Figure tables.
Transducer figure_TA();
Transducer figure_TB();
/// The right component of T_C (states K..R).
Transducer figure_TC_right();
/// T_a (states a..j) and T_b (states K..R, M', O').
Transducer figure_Ta();
Transducer figure_Tb();

struct Pipeline {
  Transducer TA, TB, TC, TD;
  Transducer Ta, Tb;
};

/// T_A = sc(T_1000 ∪ T_10000), T_B = pruned, T_C = bisimulation
/// quotient, T_D = T_C with the two successions split away.
Pipeline build_pipeline(const Budget& budget = Budget::unlimited());

std::vector<FactReport> verify_pipeline();

/// Loop words at `hub`, which must lie on every cycle of trim(t). Each
/// loop is given as (input, output) over single-digit letters.
std::vector<std::pair<std::string, std::string>> hub_loops(const Transducer& t,
                                                           const std::string& hub);

/// One-state macro transducer whose loops are the given word pairs.
MacroTransducer loop_macro(const std::vector<std::pair<std::string, std::string>>& loops,
                           std::size_t v_count = 2);

/// Drops loops whose input contains one of `bad_in` or whose output
/// contains one of `bad_out`.
std::vector<std::pair<std::string, std::string>> filter_loops(
    const std::vector<std::pair<std::string, std::string>>& loops,
    const std::vector<std::string>& bad_in, const std::vector<std::string>& bad_out);

/// minimize_bisim(trim(a)) and minimize_bisim(trim(b)) are isomorphic.
bool equivalent_by_isomorphism(const Transducer& a, const Transducer& b);

std::vector<FactReport> verify_base_cases();

struct RecursionOutcome {
  unsigned n = 0;
  /// "BAB" is T_{n+1} ∘ T_n ∘ T_{n+1}, "ABA" is T_n ∘ T_{n+1} ∘ T_n.
  std::string order;
  int shift = 0;
  bool match = false;
  std::size_t states = 0;
  std::size_t transitions = 0;
};

/// Both orders against T_{n+3} composed with the shift by 0, +3 and -3,
/// for each n <= n_max.
std::vector<RecursionOutcome> recursion_outcomes(unsigned n_max,
                                                 const Budget& budget = Budget::unlimited());

/// One report per n plus one checking that a single combination works for
/// every n.
std::vector<FactReport> verify_recursion(unsigned n_max,
                                         const Budget& budget = Budget::unlimited());

/// Forbidden sequences of macro transitions of T_n between two copies of
/// T_{n+1}, alpha omitted.
extern const char* const kForbiddenMetawords[18];

struct MetawordScan {
  std::set<std::string> realized;  // forbidden words found, e.g. "gamma.beta"
  bool omega_survives = false;        // in the middle T_n
  bool outer_omega_survives = false;  // in either surrounding T_{n+1}
};

/// Scans trim(T_{n+1} ∘ T_n ∘ T_{n+1}) (or trim(T_n) alone when
/// `surrounded` is false) for forbidden macro-transition sequences.
MetawordScan scan_metawords(unsigned n, bool surrounded);

FactReport verify_forbidden_metawords(unsigned n);

std::vector<FactReport> verify_Tprime_reduction();

/// β_n(x) = ceil((n+1)x) - ceil(nx) for a rational x = num/den.
std::vector<int> beatty_word(long num, long den, std::size_t length);

/// A path of `t` reads `in` and writes `out` letter by letter.
bool accepts_window(const Transducer& t, const std::vector<int>& in, const std::vector<int>& out);

FactReport beatty_fact_check(const std::vector<std::pair<long, long>>& samples, std::size_t L);

/// Smallest and largest output sum over paths of `t` reading `in`;
/// nullopt when no path reads it.
std::optional<std::pair<long, long>> output_sum_range(const Transducer& t,
                                                      const std::vector<int>& in);

FactReport verify_piecewise_map_consistency();

/// Suites: "t11" (empties, decomposition, pipeline, base cases, recursion
/// n <= 2, forbidden metawords), "t11prime", "kari10" (Beatty and map
/// checks), "all".
std::vector<FactReport> run_suite(std::string_view suite, unsigned n_max = 2);

}  // namespace wangforge
