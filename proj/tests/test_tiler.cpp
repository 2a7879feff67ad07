#include <regex>

#include "doctest.h"
#include "wangforge/algebra.hpp"
#include "wangforge/paper.hpp"
#include "wangforge/tiler.hpp"

using namespace wangforge;

namespace {

// Labels T11 tiles by component: state 2 belongs to the second one.
std::string t11_labels(const Transducer& t) {
  std::string label;
  for (const Tile& x : t.tiles()) label += x.w == 2 ? '1' : '0';
  return label;
}

}  // namespace

TEST_CASE("grid validators") {
  std::vector<Tile> tiles = {{0, 1, 0, 1}, {1, 0, 1, 0}};
  TilingGrid ok{2, 2, {0, 1, 1, 0}};
  CHECK_FALSE(grid_violation(tiles, ok));
  CHECK_FALSE(torus_violation(tiles, ok));
  TilingGrid bad{2, 1, {0, 0}};
  CHECK(grid_violation(tiles, bad));
  TilingGrid open{1, 1, {0}};
  CHECK_FALSE(grid_violation(tiles, open));
  CHECK(torus_violation(tiles, open));
  TilingGrid out_of_range{1, 1, {7}};
  CHECK(grid_violation(tiles, out_of_range));
}

TEST_CASE("tile_rectangle small cases") {
  Transducer bar(2, 1, {{0, 1, 0, 0}});
  auto r1 = tile_rectangle(bar, 1, 3);
  REQUIRE(r1.grid);
  CHECK_FALSE(grid_violation(bar.tiles(), *r1.grid));
  auto r2 = tile_rectangle(bar, 2, 1);
  CHECK_FALSE(r2.grid);
  CHECK(r2.proven_impossible);
  // A finite staircase: states 0 -> 1 -> 2, rows 0 -> 1.
  Transducer stair(3, 2, {{0, 1, 0, 1}, {1, 2, 0, 1}});
  auto r3 = tile_rectangle(stair, 2, 2);
  CHECK_FALSE(r3.grid);
  CHECK(r3.proven_impossible);
  auto r4 = tile_rectangle(stair, 2, 1);
  REQUIRE(r4.grid);
  CHECK_FALSE(grid_violation(stair.tiles(), *r4.grid));
}

TEST_CASE("T11 tiles a rectangle whose row types avoid the empty words") {
  NamedTileset set = named_tileset("T11");
  auto r = tile_rectangle(set.tiles, 24, 30);
  REQUIRE(r.grid);
  CHECK(r.grid->width == 24);
  CHECK(r.grid->height == 30);
  CHECK_FALSE(grid_violation(set.tiles.tiles(), *r.grid));
  std::string word = row_type_sequence(*r.grid, t11_labels(set.tiles));
  for (const auto& bad : empty_words("T11")) CHECK(word.find(bad) == std::string::npos);
  // Every complete block between two 1s is 1000 or 10000.
  CHECK(std::regex_search(word, std::regex("1")));
  std::smatch m;
  std::string rest = word.substr(word.find('1'));
  std::regex block("^1(0{3,4})1");
  while (rest.size() > 1 && rest.find('1', 1) != std::string::npos) {
    REQUIRE(std::regex_search(rest, m, block));
    rest = rest.substr(m.length(0) - 1);
  }
}

TEST_CASE("tall rectangles go through the rotated power") {
  Pipeline p = build_pipeline();
  auto r = tile_rectangle(p.TD, 6, 40);
  REQUIRE(r.grid);
  CHECK(r.grid->width == 6);
  CHECK(r.grid->height == 40);
  CHECK_FALSE(grid_violation(p.TD.tiles(), *r.grid));
  auto wide = tile_rectangle(named_tileset("T11").tiles, 30, 4);
  REQUIRE(wide.grid);
  CHECK_FALSE(grid_violation(named_tileset("T11").tiles.tiles(), *wide.grid));
}

TEST_CASE("row_type_sequence rejects mixed rows") {
  TilingGrid g{2, 1, {0, 1}};
  CHECK(row_type_sequence(g, "aa") == "a");
  CHECK_THROWS_AS(row_type_sequence(g, "ab"), WangError);
  CHECK_THROWS_AS(row_type_sequence(g, "a"), WangError);
}

TEST_CASE("TracedPower decodes valid columns") {
  NamedTileset set = named_tileset("T11");
  TracedPower tp(set.tiles, 5, Budget{});
  CHECK(tp.height() == 5);
  REQUIRE_FALSE(tp.top().empty());
  // Any cycle of top() decodes to a valid strip; walk greedily from a tile.
  std::vector<Tile> path;
  Tile cur = tp.top().tiles().front();
  for (int i = 0; i < 8; ++i) {
    path.push_back(cur);
    auto out = tp.top().outgoing(cur.e);
    REQUIRE_FALSE(out.empty());
    cur = out.front();
  }
  TilingGrid g = tp.decode_path(path);
  CHECK(g.height == 5);
  CHECK(g.width == 8);
  CHECK_FALSE(grid_violation(set.tiles.tiles(), g));
}

TEST_CASE("grid text round trip") {
  TilingGrid g{3, 2, {0, 1, 2, 2, 1, 0}};
  std::string text = write_grid(g);
  CHECK(text == "grid v1\nwidth 3 height 2\n0 1 2\n2 1 0\n");
  CHECK(read_grid(text) == g);
  CHECK(write_grid(read_grid(text)) == text);
  CHECK_THROWS_AS(read_grid("grid v1\nwidth 2 height 1\n0\n"), WangError);
}

TEST_CASE("render golden output") {
  std::vector<Tile> tiles = {{0, 1, 0, 1}, {1, 0, 1, 0}};
  TilingGrid g{2, 2, {0, 1, 1, 0}};
  CHECK(render_text(tiles, g) == "1,0,1,0 0,1,0,1\n0,1,0,1 1,0,1,0\n");
  std::string svg = render_svg(tiles, g, 40);
  CHECK(svg == render_svg(tiles, g, 40));
  CHECK(svg.find("<svg") != std::string::npos);
  CHECK(svg.find("</svg>") != std::string::npos);
  std::size_t polygons = 0;
  for (std::size_t at = svg.find("<polygon"); at != std::string::npos;
       at = svg.find("<polygon", at + 1))
    ++polygons;
  CHECK(polygons == 4 * g.cells.size());
  CHECK(svg.find("width=\"80\"") != std::string::npos);
  CHECK(render(tiles, g, RenderStyle::text) == render_text(tiles, g));
}
