#include <algorithm>
#include <random>

#include "doctest.h"
#include "wangforge/algebra.hpp"
#include "wangforge/macro.hpp"
#include "wangforge/paper.hpp"

using namespace wangforge;

namespace {

// Fibonacci word by direct iteration of a -> ab, b -> a.
std::string morphism_prefix(std::size_t n) {
  std::string w = "a";
  while (w.size() < n) {
    std::string next;
    for (char c : w) next += c == 'a' ? "ab" : "a";
    w = next;
  }
  return w;
}

}  // namespace

TEST_CASE("fib_g") {
  CHECK(fib_g(0) == 1);
  CHECK(fib_g(1) == 2);
  CHECK(fib_g(2) == 3);
  CHECK(fib_g(3) == 5);
  CHECK(fib_g(4) == 8);
  for (unsigned n = 0; n <= 30; ++n) CHECK(fib_g(n + 2) == fib_g(n + 1) + fib_g(n));
}

TEST_CASE("singular words") {
  CHECK(singular_word(-2).empty());
  CHECK(singular_word(-1) == "a");
  CHECK(singular_word(0) == "b");
  CHECK(singular_word(1) == "aa");
  CHECK(singular_word(2) == "bab");
  auto factors = fibonacci_factors(40);
  for (int n = -1; n <= 6; ++n) CHECK(factors.count(singular_word(n)));
  for (int n = 1; n <= 10; ++n) CHECK(singular_word(n).size() == fib_g(n));
}

TEST_CASE("fibonacci factors") {
  CHECK(fibonacci_word(20).rfind(morphism_prefix(20).substr(0, 20), 0) == 0);
  auto f2 = fibonacci_factors(2);
  CHECK(f2 == std::set<std::string>{"a", "b", "aa", "ab", "ba"});
  auto f12 = fibonacci_factors(12);
  for (std::size_t k = 1; k <= 12; ++k) {
    std::size_t count = std::count_if(f12.begin(), f12.end(),
                                      [&](const std::string& s) { return s.size() == k; });
    CHECK(count == k + 1);
  }
  CHECK_FALSE(f12.count("aaa"));
  CHECK_FALSE(f12.count("bb"));
  // Independent oracle: factors of a long prefix of the morphism's fixed point.
  std::string w = morphism_prefix(2000);
  std::set<std::string> brute;
  for (std::size_t k = 1; k <= 12; ++k)
    for (std::size_t i = 0; i + k <= w.size(); ++i) brute.insert(w.substr(i, k));
  CHECK(brute == f12);
}

TEST_CASE("run-length words") {
  CHECK(word_digits(parse_rle("0^5(10)^2")) == "000001010");
  CHECK(word_digits(parse_rle("0^5(1)^2")) == "0000011");
  CHECK(word_digits(parse_rle("0^5(100)1^2")) == "0000010011");
  CHECK(parse_rle("-").empty());
  CHECK(format_rle(parse_rle("0000011")) == "0^5(1)^2");
  CHECK(format_rle(parse_rle("0011")) == "0^2(1)^2");
  CHECK(format_rle(parse_rle("0001")) == "0^3(1)");
  CHECK(format_rle(parse_rle("1000")) == "10^3");
  CHECK_THROWS_AS(parse_rle("(01"), WangError);
}

TEST_CASE("run-length format round-trips random words") {
  std::mt19937 rng(4);
  for (int i = 0; i < 500; ++i) {
    Word w(rng() % 40);
    for (auto& c : w) c = rng() % 3 == 0 ? 1 : 0;
    if (rng() % 4 == 0)
      for (auto& c : w) c = c * 3;  // letters 0 and 3
    CHECK(parse_rle(format_rle(w)) == w);
  }
}

TEST_CASE("macro text round trip") {
  MacroTransducer m = family_macro(3);
  MacroTransducer again = read_macro(write_macro(m));
  CHECK(write_macro(again) == write_macro(m));
  CHECK(again.edges.size() == 6);
}

TEST_CASE("expand_macro of a single loop is a cycle") {
  MacroTransducer m;
  m.states = {"H"};
  m.edges = {{"H", "H", parse_rle("01"), parse_rle("10"), ""}};
  ExpandedMacro e = expand_macro(m);
  CHECK(e.transducer.active_state_count() == 2);
  CHECK(e.transducer.size() == 2);
  CHECK(e.tags[0].edge == 0);
}

TEST_CASE("expand then compress round-trips") {
  for (unsigned n = 0; n <= 4; ++n) {
    MacroTransducer m = family_macro(n);
    ExpandedMacro e = expand_macro(m);
    std::vector<ColorId> keep(e.macro_state.begin(), e.macro_state.end());
    std::sort(keep.begin(), keep.end());
    keep.erase(std::unique(keep.begin(), keep.end()), keep.end());
    MacroTransducer back = compress_paths(e.transducer, keep);
    auto pairs = [](const MacroTransducer& x) {
      std::multiset<std::pair<std::string, std::string>> out;
      for (const auto& edge : x.edges)
        if (!edge.in.empty()) out.insert({word_digits(edge.in), word_digits(edge.out)});
      return out;
    };
    CHECK(pairs(back) == pairs(m));
  }
}

TEST_CASE("family edges have equal input and output lengths") {
  for (unsigned n = 0; n <= 8; ++n) {
    MacroTransducer m = family_macro(n);
    for (const auto& e : m.edges) CHECK(e.in.size() == e.out.size());
  }
}

TEST_CASE("family T_0 loops after collapsing alpha") {
  MacroTransducer m = family_macro(0);
  std::set<std::pair<std::string, std::string>> loops;
  // With alpha empty, A and F coincide; every edge is a loop at the hub.
  for (const auto& e : m.edges)
    if (!e.in.empty()) loops.insert({word_digits(e.in), word_digits(e.out)});
  std::set<std::pair<std::string, std::string>> expected = {
      {"00000", "10011"}, {"00000000", "11100011"}, {"00111000", "11111111"},
      {"00110", "11111"}, {"0000011000", "1110011111"}};
  CHECK(loops == expected);
  auto alpha = std::find_if(m.edges.begin(), m.edges.end(),
                            [](const MacroEdge& e) { return e.label == "alpha"; });
  REQUIRE(alpha != m.edges.end());
  CHECK(alpha->in.empty());
}

TEST_CASE("odd family alpha edge") {
  MacroTransducer m = family_macro(1);
  auto alpha = std::find_if(m.edges.begin(), m.edges.end(),
                            [](const MacroEdge& e) { return e.label == "alpha"; });
  REQUIRE(alpha != m.edges.end());
  CHECK(word_digits(alpha->in) == "11");
  CHECK(word_digits(alpha->out) == "00");
}

TEST_CASE("expand_family is deterministic and grows with g") {
  for (unsigned n = 0; n <= 5; ++n) {
    CHECK(expand_family(n).transducer == expand_family(n).transducer);
    CHECK(expand_family(n + 1).transducer.size() > expand_family(n).transducer.size());
  }
}

TEST_CASE("one-state form of the T_b loops expands to the published loops") {
  Transducer Tb = figure_Tb();
  auto loops = filter_loops(hub_loops(Tb, "N"), {"010"}, {"101"});
  ExpandedMacro e = expand_macro(loop_macro(loops));
  CHECK(hub_loops(e.transducer, e.transducer.name(e.macro_state[0])) == loops);
}
