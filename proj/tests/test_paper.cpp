#include "doctest.h"
#include "wangforge/algebra.hpp"
#include "wangforge/paper.hpp"
#include "wangforge/text_format.hpp"

using namespace wangforge;

namespace {

bool all_pass(const std::vector<FactReport>& reports) {
  bool ok = true;
  for (const auto& r : reports) {
    INFO(fact_line(r));
    CHECK(r.pass);
    ok = ok && r.pass;
  }
  return ok;
}

}  // namespace

TEST_CASE("embedded tile tables") {
  for (const char* name : kTilesetNames) {
    NamedTileset set = named_tileset(name);
    CHECK(tileset_checksum(set.tiles) == expected_checksum(name));
    std::size_t total = 0;
    for (const auto& c : set.components) total += c.size();
    CHECK(total == set.tiles.size());
    CHECK(set.components.size() == set.component_names.size());
  }
  CHECK(named_tileset("T11").tiles.size() == 11);
  CHECK(named_tileset("T11").tiles.v_count() == 5);
  CHECK(named_tileset("T11prime").tiles.v_count() == 4);
  CHECK(named_tileset("Culik13").tiles.size() == 13);
  CHECK(named_tileset("Kari10like").tiles.size() == 10);
  CHECK_THROWS_AS(named_tileset("nope"), WangError);
}

TEST_CASE("tables survive the text format") {
  for (const char* name : kTilesetNames) {
    Transducer t = named_tileset(name).tiles;
    CHECK(read_wang(write_wang(t)) == t);
  }
}

TEST_CASE("data files match the embedded tables") {
  for (const char* name : kTilesetNames) {
    Transducer t = read_wang_file(std::string(WANGFORGE_DATA_DIR) + "/" + name + ".wang");
    CHECK(t == named_tileset(name).tiles);
  }
}

TEST_CASE("emptiness facts and a nonempty control") {
  CHECK(verify_empties("T11").pass);
  CHECK(verify_empties("T11prime").pass);
  CHECK(empty_words("T11").size() == 4);
  CHECK(empty_words("T11prime").size() == 10);
  NamedTileset set = named_tileset("T11");
  CHECK_FALSE(is_empty(trim(compose_word(set, "10"))));
  CHECK_FALSE(is_empty(trim(compose_word(set, "1000"))));
}

TEST_CASE("row decompositions") {
  CHECK(verify_row_decomposition("T11").pass);
  CHECK(verify_row_decomposition("T11prime").pass);
  BlockDecomposition d = derive_row_decomposition(empty_words("T11"));
  CHECK(d.forced);
  CHECK(d.blocks == std::set<std::string>{"1000", "10000"});
  BlockDecomposition control = derive_row_decomposition({"11"});
  CHECK_FALSE(control.forced);
  CHECK_FALSE(control.reason.empty());
}

TEST_CASE("pipeline") {
  CHECK(all_pass(verify_pipeline()));
  Pipeline p = build_pipeline();
  CHECK(build_pipeline().TD == p.TD);
  CHECK(read_wang(write_wang(p.TC)) == p.TC.without_names());
}

TEST_CASE("base cases") { CHECK(all_pass(verify_base_cases())); }

TEST_CASE("recursion") {
  CHECK(all_pass(verify_recursion(2)));
  auto outcomes = recursion_outcomes(0);
  bool bab0 = false;
  for (const auto& o : outcomes)
    if (o.order == "BAB" && o.shift == 0) bab0 = o.match;
  CHECK(bab0);
}

TEST_CASE("forbidden metawords") {
  for (unsigned n = 0; n <= 1; ++n) {
    CHECK(verify_forbidden_metawords(n).pass);
    MetawordScan alone = scan_metawords(n, false);
    CHECK(alone.realized.size() == 18);
  }
}

TEST_CASE("T11prime reduction") { CHECK(all_pass(verify_Tprime_reduction())); }

TEST_CASE("Beatty words") {
  // beta_n(1/2) alternates 1, 0 starting from n = 0.
  CHECK(beatty_word(1, 2, 6) == std::vector<int>{1, 0, 1, 0, 1, 0});
  CHECK(beatty_word(2, 1, 4) == std::vector<int>{2, 2, 2, 2});
  for (long num = 1; num <= 9; ++num) {
    auto w = beatty_word(num, 4, 40);
    long sum = 0;
    for (int x : w) sum += x;
    CHECK(sum == (40 * num + 3) / 4);
  }
  CHECK(verify_piecewise_map_consistency().pass);
}

TEST_CASE("fact lines") {
  FactReport r{"x.y", true, "fine", 3};
  CHECK(fact_line(r) == "fact v1 | x.y | pass | fine");
  auto a = run_suite("t11prime");
  auto b = run_suite("t11prime");
  REQUIRE(a.size() == b.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    CHECK(a[i].id == b[i].id);
    CHECK(a[i].pass == b[i].pass);
    CHECK(a[i].details == b[i].details);
  }
}
