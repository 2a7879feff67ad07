#pragma once

#include <cstddef>
#include <cstdint>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "wangforge/budget.hpp"
#include "wangforge/transducer.hpp"

namespace wangforge {

/// g(0) = 1, g(1) = 2, g(n+2) = g(n) + g(n+1).
std::uint64_t fib_g(unsigned n);

/// u_{-2} = "", u_{-1} = "a", u_0 = "b", u_{n+2} = u_n u_{n-1} u_n.
std::string singular_word(int n);

/// Prefix of the fixed point of a -> ab, b -> a with at least `length`
/// letters.
std::string fibonacci_word(std::size_t length);

/// All factors of the Fibonacci word of length 1..L.
std::set<std::string> fibonacci_factors(std::size_t L);

/// Word over the vertical alphabet.
using Word = std::vector<ColorId>;

/// Parses run-length notation: single digits, parenthesised literal
/// blocks, each optionally followed by ^k, e.g. "0^5(100)1^2". "-" is
/// the empty word.
Word parse_rle(std::string_view text);

/// Canonical run-length form: maximal runs written c^r (or c when r = 1).
std::string format_rle(const Word& w);

/// Plain digit string of a word.
std::string word_digits(const Word& w);

struct MacroEdge {
  std::string from;
  std::string to;
  Word in;
  Word out;
  std::string label;
};

/// Transducer whose edges carry equal-length word pairs.
struct MacroTransducer {
  std::size_t v_count = 2;
  std::vector<std::string> states;
  std::vector<MacroEdge> edges;
};

/// Text format:
///
///     macro v1
///     vcolors M          (optional, default 2)
///     state NAME
///     edge FROM TO IN OUT [LABEL]
MacroTransducer read_macro(const std::string& text);
std::string write_macro(const MacroTransducer& m);

/// Where a letter-level transition came from.
struct MacroTag {
  std::uint32_t edge = 0;    // index into MacroTransducer::edges
  std::uint32_t offset = 0;  // position inside the edge's words
};

struct ExpandedMacro {
  Transducer transducer;
  /// tags[i] describes transducer.tiles()[i].
  std::vector<MacroTag> tags;
  /// Letter-level state of every macro state (after merging the endpoints
  /// of empty edges).
  std::vector<ColorId> macro_state;
};

/// Expands every edge into a chain of single-letter transitions through
/// fresh states. Edges with empty words identify their endpoints.
ExpandedMacro expand_macro(const MacroTransducer& m,
                           const Budget& budget = Budget::unlimited());

/// Collapses chains of fresh states back into macro edges between the
/// states listed in `keep`; every other state must have exactly one
/// incoming and one outgoing transition.
MacroTransducer compress_paths(const Transducer& t, const std::vector<ColorId>& keep);

/// Edge labels of the family, in the order alpha, beta, gamma, delta,
/// epsilon, omega.
extern const char* const kFamilyLabels[6];

/// The two-state macro transducer T_n (states "A" and "F"). The parity of
/// n selects between the 0/1-dual forms.
MacroTransducer family_macro(unsigned n);

/// expand_macro(family_macro(n)).
ExpandedMacro expand_family(unsigned n, const Budget& budget = Budget::unlimited());

}  // namespace wangforge
