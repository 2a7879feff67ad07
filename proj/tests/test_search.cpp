#include <algorithm>
#include <numeric>
#include <random>
#include <set>

#include "doctest.h"
#include "support.hpp"
#include "wangforge/algebra.hpp"
#include "wangforge/paper.hpp"
#include "wangforge/search.hpp"
#include "wangforge/tiler.hpp"

using namespace wangforge;

namespace {

using Edges = std::vector<std::pair<std::uint32_t, std::uint32_t>>;

std::vector<std::vector<char>> closure(std::size_t n, const Edges& edges) {
  std::vector<std::vector<char>> r(n, std::vector<char>(n, 0));
  for (std::size_t i = 0; i < n; ++i) r[i][i] = 1;
  for (auto [u, v] : edges) r[u][v] = 1;
  for (std::size_t m = 0; m < n; ++m)
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j)
        if (r[i][m] && r[m][j]) r[i][j] = 1;
  return r;
}

// Admissibility checked from the definitions, one condition at a time.
bool oracle_admissible(std::size_t n, const Edges& edges) {
  std::vector<std::size_t> degree(n, 0);
  for (auto [u, v] : edges) ++degree[u], ++degree[v];
  if (std::count(degree.begin(), degree.end(), 0u)) return false;
  if (edges.size() < n + 2) return false;
  auto r = closure(n, edges);
  for (auto [u, v] : edges)
    if (!r[v][u]) return false;
  for (std::size_t u = 0; u < n; ++u) {
    std::size_t verts = 0, inner = 0;
    for (std::size_t v = 0; v < n; ++v) verts += r[u][v] && r[v][u];
    for (auto [a, b] : edges) inner += r[u][a] && r[a][u] && r[u][b] && r[b][u];
    if (inner == verts) return false;
  }
  return true;
}

Edges brute_canonical(std::size_t n, const Edges& edges) {
  std::vector<std::uint32_t> perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  Edges best;
  bool first = true;
  do {
    Edges e;
    for (auto [u, v] : edges) e.push_back({perm[u], perm[v]});
    std::sort(e.begin(), e.end());
    if (first || e < best) best = e;
    first = false;
  } while (std::next_permutation(perm.begin(), perm.end()));
  return best;
}

std::set<Edges> oracle_graphs(std::size_t n_edges) {
  std::set<Edges> out;
  for (std::size_t n = 1; n + 2 <= n_edges; ++n) {
    const std::size_t codes = n * n;
    std::vector<std::size_t> pick(n_edges, 0);
    auto rec = [&](auto&& self, std::size_t i, std::size_t from) -> void {
      if (i == n_edges) {
        Edges e;
        for (auto c : pick) e.push_back({std::uint32_t(c / n), std::uint32_t(c % n)});
        if (oracle_admissible(n, e)) out.insert(brute_canonical(n, e));
        return;
      }
      for (std::size_t c = from; c < codes; ++c) {
        pick[i] = c;
        self(self, i + 1, c);
      }
    };
    rec(rec, 0, 0);
  }
  return out;
}

MultiGraph random_graph(std::mt19937& rng) {
  std::uniform_int_distribution<std::size_t> nd(1, 4), ed(1, 7);
  MultiGraph g;
  g.vertices = nd(rng);
  std::uniform_int_distribution<std::uint32_t> vd(0, std::uint32_t(g.vertices - 1));
  std::size_t e = ed(rng);
  for (std::size_t i = 0; i < e; ++i) g.edges.push_back({vd(rng), vd(rng)});
  std::sort(g.edges.begin(), g.edges.end());
  return g;
}

Transducer single(std::vector<Tile> tiles, std::size_t h = 1, std::size_t v = 1) {
  return Transducer(h, v, std::move(tiles));
}

}  // namespace

TEST_CASE("classify_graph examples") {
  CHECK(classify_graph({1, {{0, 0}, {0, 0}, {0, 0}}}) == GraphRejection::none);
  CHECK(classify_graph({1, {{0, 0}, {0, 0}}}) == GraphRejection::too_few_edges);
  CHECK(classify_graph({2, {{0, 0}, {0, 0}, {0, 0}, {0, 1}}}) == GraphRejection::edge_off_cycle);
  CHECK(classify_graph({3, {{0, 0}, {0, 0}, {0, 0}, {1, 2}, {2, 1}}}) ==
        GraphRejection::bare_cycle_scc);
  CHECK(classify_graph({2, {{0, 0}, {0, 0}, {0, 0}, {0, 0}}}) == GraphRejection::isolated_vertex);
}

TEST_CASE("classify_graph agrees with the definitions and the fired criterion holds") {
  std::mt19937 rng(11);
  for (int i = 0; i < 2000; ++i) {
    MultiGraph g = random_graph(rng);
    GraphRejection r = classify_graph(g);
    CHECK((r == GraphRejection::none) == oracle_admissible(g.vertices, g.edges));
    auto reach = closure(g.vertices, g.edges);
    switch (r) {
      case GraphRejection::isolated_vertex: {
        std::set<std::uint32_t> touched;
        for (auto [u, v] : g.edges) touched.insert(u), touched.insert(v);
        CHECK(touched.size() < g.vertices);
        break;
      }
      case GraphRejection::too_few_edges:
        CHECK(g.edges.size() < g.vertices + 2);
        break;
      case GraphRejection::edge_off_cycle:
        CHECK(std::any_of(g.edges.begin(), g.edges.end(),
                          [&](auto e) { return !reach[e.second][e.first]; }));
        break;
      case GraphRejection::bare_cycle_scc: {
        // Some component has out-degree exactly one inside itself everywhere.
        bool found = false;
        for (std::uint32_t u = 0; u < g.vertices && !found; ++u) {
          bool cycle = true;
          for (std::uint32_t v = 0; v < g.vertices; ++v) {
            if (!(reach[u][v] && reach[v][u])) continue;
            std::size_t out = 0;
            for (auto [a, b] : g.edges) out += a == v && reach[u][b] && reach[b][u];
            cycle = cycle && out == 1;
          }
          found = cycle;
        }
        CHECK(found);
        break;
      }
      case GraphRejection::none:
        break;
    }
  }
}

TEST_CASE("enumerate_graphs small cases") {
  CHECK(enumerate_graphs(1).empty());
  CHECK(enumerate_graphs(2).empty());
  auto three = enumerate_graphs(3);
  REQUIRE(three.size() == 1);
  CHECK(three[0] == MultiGraph{1, {{0, 0}, {0, 0}, {0, 0}}});
}

TEST_CASE("enumerate_graphs matches a generate-then-filter oracle") {
  for (std::size_t e = 3; e <= 6; ++e) {
    auto got = enumerate_graphs(e);
    std::set<Edges> keys;
    for (const auto& g : got) {
      CHECK(classify_graph(g) == GraphRejection::none);
      CHECK(canonical_graph(g) == g);
      keys.insert(brute_canonical(g.vertices, g.edges));
    }
    CHECK(keys.size() == got.size());
    CHECK(keys == oracle_graphs(e));
  }
}

TEST_CASE("canonical_graph is invariant under relabelling") {
  std::mt19937 rng(5);
  for (int i = 0; i < 300; ++i) {
    MultiGraph g = random_graph(rng);
    std::vector<std::uint32_t> perm(g.vertices);
    std::iota(perm.begin(), perm.end(), 0);
    std::shuffle(perm.begin(), perm.end(), rng);
    MultiGraph h{g.vertices, {}};
    for (auto [u, v] : g.edges) h.edges.push_back({perm[u], perm[v]});
    std::sort(h.edges.begin(), h.edges.end());
    CHECK(canonical_graph(g) == canonical_graph(h));
    MultiGraph c = canonical_graph(g);
    CHECK(brute_canonical(c.vertices, c.edges) == brute_canonical(g.vertices, g.edges));
  }
}

TEST_CASE("canonical_key is invariant under color renaming") {
  std::mt19937 rng(7);
  for (int i = 0; i < 300; ++i) {
    Transducer t = wftest::random_transducer(rng, 3, 3, 6);
    std::vector<ColorId> hp = {0, 1, 2}, vp = {0, 1, 2};
    std::shuffle(hp.begin(), hp.end(), rng);
    std::shuffle(vp.begin(), vp.end(), rng);
    std::vector<Tile> tiles;
    for (const Tile& x : t.tiles()) tiles.push_back({hp[x.w], hp[x.e], vp[x.s], vp[x.n]});
    Transducer u(3, 3, tiles);
    CHECK(canonical_key(t) == canonical_key(u));
    CHECK(canonical_key(t, true) == canonical_key(u, true));
  }
}

TEST_CASE("canonical_key with symmetries identifies rotations") {
  std::mt19937 rng(8);
  for (int i = 0; i < 200; ++i) {
    Transducer t = wftest::random_transducer(rng, 3, 3, 5);
    Transducer r = rotate(t);
    CHECK(canonical_key(t, true) == canonical_key(r, true));
    CHECK(canonical_key(t, true) == canonical_key(reverse(t), true));
  }
  // Without symmetries a rotation can change the key.
  Transducer t = single({{0, 1, 0, 0}}, 2, 1);
  CHECK(canonical_key(t) != canonical_key(rotate(t)));
}

TEST_CASE("enumerate_wangsets trivial cases") {
  std::size_t count = 0;
  enumerate_wangsets({1, {{0, 0}}}, 1, [&](const Candidate&) { ++count; });
  CHECK(count == 1);
}

TEST_CASE("enumerate_wangsets matches brute-force canonicalization") {
  // Three self-loops on one vertex, two vertical colors.
  MultiGraph g{1, {{0, 0}, {0, 0}, {0, 0}}};
  std::set<std::vector<Tile>> oracle;
  std::size_t raw = 0;
  for (int code = 0; code < 64; ++code) {
    ++raw;
    std::vector<Tile> tiles;
    for (int e = 0; e < 3; ++e)
      tiles.push_back({0, 0, ColorId((code >> (2 * e)) & 1), ColorId((code >> (2 * e + 1)) & 1)});
    std::sort(tiles.begin(), tiles.end());
    if (std::adjacent_find(tiles.begin(), tiles.end()) != tiles.end()) continue;
    std::vector<Tile> best;
    for (int flip = 0; flip < 2; ++flip) {
      std::vector<Tile> m;
      for (Tile x : tiles) m.push_back({0, 0, x.s ^ ColorId(flip), x.n ^ ColorId(flip)});
      std::sort(m.begin(), m.end());
      if (best.empty() || m < best) best = m;
    }
    oracle.insert(best);
  }
  std::set<std::string> keys;
  std::size_t emitted = 0;
  enumerate_wangsets(g, 2, [&](const Candidate& c) {
    ++emitted;
    keys.insert(c.key);
    CHECK(c.tiles.size() == 3);
    CHECK(c.key == canonical_key(c.tiles));
  });
  CHECK(emitted == keys.size());
  CHECK(emitted == oracle.size());
  CHECK(emitted < raw);
}

TEST_CASE("trivial verdicts") {
  Verdict p = test_aperiodicity(single({{0, 0, 0, 0}}));
  CHECK(p.kind == Verdict::Kind::periodic);
  CHECK(p.k == 1);
  CHECK(p.p == 1);
  REQUIRE(p.torus);
  CHECK_FALSE(torus_violation(single({{0, 0, 0, 0}}).tiles(), *p.torus));

  Verdict n = test_aperiodicity(single({{0, 1, 0, 0}}, 2));
  CHECK(n.kind == Verdict::Kind::not_tiling);
  CHECK(n.k == 1);
}

TEST_CASE("the 10-tile set stays unknown under a small budget") {
  AperiodicityOptions o;
  o.budget.max_k = 6;
  Verdict v = test_aperiodicity(named_tileset("Kari10like").tiles, o);
  CHECK(v.kind == Verdict::Kind::unknown);
}

TEST_CASE("verdicts are replayable and agree with the oracle") {
  std::mt19937 rng(21);
  AperiodicityOptions o;
  o.budget.max_k = 4;
  o.max_period = 5;
  for (int i = 0; i < 150; ++i) {
    Transducer t = wftest::random_transducer(rng, 3, 3, 5);
    Verdict v = test_aperiodicity(t, o);
    auto expect = wftest::oracle_verdict(t.tiles(), 4, 5);
    if (v.kind == Verdict::Kind::not_tiling) {
      CHECK(is_empty(trim(power(t, v.k, Strategy::plain))));
      CHECK(expect.kind == 'N');
    } else if (v.kind == Verdict::Kind::periodic) {
      REQUIRE(v.torus);
      CHECK(v.torus->height == v.k);
      CHECK(v.torus->width == v.p);
      CHECK_FALSE(torus_violation(t.tiles(), *v.torus));
      CHECK(expect.kind == 'P');
    } else {
      CHECK(expect.kind == 'U');
    }
    CHECK(v.k == expect.k);
    CHECK(v.p == expect.p);
  }
}

TEST_CASE("test_many does not depend on scheduling") {
  std::mt19937 rng(3);
  std::vector<Transducer> sets;
  for (int i = 0; i < 60; ++i) sets.push_back(wftest::random_transducer(rng, 3, 3, 6));
  AperiodicityOptions o;
  o.budget.max_k = 5;
  o.max_period = 6;
  auto a = test_many(sets, o, 1);
  auto b = test_many(sets, o, 4);
  REQUIRE(a.size() == sets.size());
  REQUIRE(b.size() == sets.size());
  for (std::size_t i = 0; i < sets.size(); ++i) {
    CHECK(a[i].kind == b[i].kind);
    CHECK(a[i].k == b[i].k);
    CHECK(a[i].p == b[i].p);
    CHECK(ledger_line(canonical_key(sets[i]), a[i]) == ledger_line(canonical_key(sets[i]), b[i]));
  }
}

TEST_CASE("ledger line format") {
  Verdict v = test_aperiodicity(single({{0, 0, 0, 0}}));
  std::string line = ledger_line("key", v);
  CHECK(line.rfind("verdict v1 | key | Periodic | 1 | 1 | ", 0) == 0);
}

TEST_CASE("find_torus") {
  auto g = find_torus(single({{0, 0, 0, 0}}), 3, 4, Budget{});
  REQUIRE(g);
  CHECK(g->height == 3);
  CHECK(g->width == 1);
  // Two states alternating: the smallest torus has width 2.
  Transducer alt = single({{0, 1, 0, 0}, {1, 0, 0, 0}}, 2);
  auto h = find_torus(alt, 2, 4, Budget{});
  REQUIRE(h);
  CHECK(h->width == 2);
  CHECK_FALSE(torus_violation(alt.tiles(), *h));
  CHECK_FALSE(find_torus(single({{0, 1, 0, 0}}, 2), 1, 4, Budget{}));
}

TEST_CASE("longest_constant_path") {
  // 0 -> 1 -> 2 reading and writing 1, plus a 0|0 loop elsewhere.
  Transducer chain(3, 2, {{0, 1, 1, 1}, {1, 2, 1, 1}, {2, 2, 0, 0}});
  CHECK(longest_constant_path(chain, 1) == std::optional<std::size_t>(2));
  CHECK_FALSE(longest_constant_path(chain, 0));
  CHECK(longest_constant_path(Transducer(2, 2, {{0, 1, 0, 1}}), 1) ==
        std::optional<std::size_t>(0));
}

TEST_CASE("seeded analysis on a two-row set") {
  // Row 0 is followed by row 1 and nothing fits above row 1.
  Transducer t(1, 2, {{0, 0, 0, 1}});
  SeededReport fwd = seeded_row_analysis(t, 0, 5, Direction::forward);
  REQUIRE(fwd.first_empty_k);
  CHECK(*fwd.first_empty_k == 2);
  // Nothing writes row 0, so nothing fits below it.
  SeededReport rev = seeded_row_analysis(t, 0, 5, Direction::reverse);
  REQUIRE(rev.first_empty_k);
  CHECK(*rev.first_empty_k == 1);
  // A constant row that reproduces itself never empties.
  SeededReport loop = seeded_row_analysis(Transducer(1, 1, {{0, 0, 0, 0}}), 0, 5,
                                          Direction::forward);
  CHECK_FALSE(loop.first_empty_k);
  CHECK(loop.k_reached == 5);
  CHECK(parse_direction("reverse") == Direction::reverse);
  CHECK(to_string(Direction::forward) == "forward");
}

TEST_CASE("max_square trivial cases") {
  SquareReport one = max_square(single({{0, 0, 0, 0}}), 10, Budget{});
  CHECK(one.unbounded);
  REQUIRE(one.witness);
  CHECK_FALSE(grid_violation(single({{0, 0, 0, 0}}).tiles(), *one.witness));

  SquareReport bar = max_square(single({{0, 1, 0, 0}}, 2), 10, Budget{});
  CHECK_FALSE(bar.unbounded);
  CHECK(bar.size == 1);
  CHECK(bar.proven_maximal);
}
