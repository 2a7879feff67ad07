#pragma once

// Random inputs and brute-force oracles shared by the test binaries. The
// oracles work on raw tile lists and never call the library algorithms
// they are compared with.

#include <algorithm>
#include <cstdint>
#include <map>
#include <optional>
#include <random>
#include <set>
#include <utility>
#include <vector>

#include "wangforge/transducer.hpp"

namespace wftest {

using wangforge::ColorId;
using wangforge::Tile;
using wangforge::Transducer;

inline Transducer random_transducer(std::mt19937& rng, std::size_t h, std::size_t v,
                                    std::size_t max_tiles) {
  std::uniform_int_distribution<ColorId> hd(0, static_cast<ColorId>(h - 1));
  std::uniform_int_distribution<ColorId> vd(0, static_cast<ColorId>(v - 1));
  std::uniform_int_distribution<std::size_t> nd(1, max_tiles);
  std::set<Tile> tiles;
  std::size_t n = nd(rng);
  for (std::size_t i = 0; i < n; ++i) tiles.insert({hd(rng), hd(rng), vd(rng), vd(rng)});
  return Transducer(h, v, std::vector<Tile>(tiles.begin(), tiles.end()));
}

using LabelWord = std::vector<std::pair<ColorId, ColorId>>;

// Label words of every path with exactly L transitions (no trimming).
inline std::set<LabelWord> path_labels(const std::vector<Tile>& tiles, std::size_t L) {
  std::set<LabelWord> out;
  LabelWord cur;
  auto rec = [&](auto&& self, ColorId state) -> void {
    if (cur.size() == L) {
      out.insert(cur);
      return;
    }
    for (const Tile& t : tiles)
      if (t.w == state) {
        cur.push_back({t.s, t.n});
        self(self, t.e);
        cur.pop_back();
      }
  };
  std::set<ColorId> states;
  for (const Tile& t : tiles) states.insert(t.w);
  for (ColorId q : states) rec(rec, q);
  return out;
}

// Relational composition of two sets of label words.
inline std::set<LabelWord> join(const std::set<LabelWord>& a, const std::set<LabelWord>& b) {
  std::set<LabelWord> out;
  for (const auto& x : a)
    for (const auto& y : b) {
      bool ok = true;
      for (std::size_t i = 0; i < x.size() && ok; ++i) ok = x[i].second == y[i].first;
      if (!ok) continue;
      LabelWord z;
      for (std::size_t i = 0; i < x.size(); ++i) z.push_back({x[i].first, y[i].second});
      out.insert(z);
    }
  return out;
}

// States lying on a biinfinite path: a path of h transitions forward and
// one backward must both exist (pigeonhole gives a cycle on each side).
inline std::set<ColorId> biinfinite_states(const std::vector<Tile>& tiles, std::size_t h) {
  auto reach = [&](bool forward) {
    std::set<ColorId> alive;
    for (ColorId q = 0; q < h; ++q) alive.insert(q);
    for (std::size_t step = 0; step < h; ++step) {
      std::set<ColorId> next;
      for (const Tile& t : tiles) {
        ColorId from = forward ? t.w : t.e, to = forward ? t.e : t.w;
        if (alive.count(to)) next.insert(from);
      }
      alive = std::move(next);
    }
    return alive;
  };
  std::set<ColorId> f = reach(true), b = reach(false), both;
  for (ColorId q : f)
    if (b.count(q)) both.insert(q);
  return both;
}

// Columns of k tiles stacked with matching vertical colors.
inline std::vector<std::vector<std::uint32_t>> columns(const std::vector<Tile>& tiles,
                                                       std::size_t k, bool periodic) {
  std::vector<std::vector<std::uint32_t>> out;
  std::vector<std::uint32_t> cur;
  auto rec = [&](auto&& self) -> void {
    if (cur.size() == k) {
      if (!periodic || tiles[cur.back()].n == tiles[cur.front()].s) out.push_back(cur);
      return;
    }
    for (std::uint32_t i = 0; i < tiles.size(); ++i)
      if (cur.empty() || tiles[cur.back()].n == tiles[i].s) {
        cur.push_back(i);
        self(self);
        cur.pop_back();
      }
  };
  rec(rec);
  return out;
}

inline bool column_follows(const std::vector<Tile>& tiles, const std::vector<std::uint32_t>& a,
                           const std::vector<std::uint32_t>& b) {
  for (std::size_t i = 0; i < a.size(); ++i)
    if (tiles[a[i]].e != tiles[b[i]].w) return false;
  return true;
}

// A biinfinite strip of k rows exists iff the column graph has a cycle.
inline bool strip_exists(const std::vector<Tile>& tiles, std::size_t k) {
  auto cols = columns(tiles, k, false);
  const std::size_t n = cols.size();
  std::vector<std::vector<std::size_t>> adj(n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      if (column_follows(tiles, cols[i], cols[j])) adj[i].push_back(j);
  std::vector<int> colour(n, 0);
  bool cycle = false;
  auto dfs = [&](auto&& self, std::size_t u) -> void {
    colour[u] = 1;
    for (auto v : adj[u]) {
      if (cycle) return;
      if (colour[v] == 1) cycle = true;
      else if (colour[v] == 0) self(self, v);
    }
    colour[u] = 2;
  };
  for (std::size_t i = 0; i < n && !cycle; ++i)
    if (!colour[i]) dfs(dfs, i);
  return cycle;
}

// Smallest p <= max_p with a k x p torus, by closed walks in the graph of
// vertically periodic columns.
inline std::optional<std::size_t> smallest_torus(const std::vector<Tile>& tiles, std::size_t k,
                                                 std::size_t max_p) {
  auto cols = columns(tiles, k, true);
  const std::size_t n = cols.size();
  if (n == 0) return std::nullopt;
  std::vector<std::vector<char>> adj(n, std::vector<char>(n, 0));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) adj[i][j] = column_follows(tiles, cols[i], cols[j]);
  auto walk = adj;
  for (std::size_t p = 1; p <= max_p; ++p) {
    for (std::size_t i = 0; i < n; ++i)
      if (walk[i][i]) return p;
    std::vector<std::vector<char>> next(n, std::vector<char>(n, 0));
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t m = 0; m < n; ++m)
        if (walk[i][m])
          for (std::size_t j = 0; j < n; ++j)
            if (adj[m][j]) next[i][j] = 1;
    walk = std::move(next);
  }
  return std::nullopt;
}

struct OracleVerdict {
  char kind = 'U';  // 'N' not tiling, 'P' periodic, 'U' unknown
  std::size_t k = 0;
  std::size_t p = 0;
};

// First k <= max_k where no k-row strip exists or a k x p torus with
// p <= max_p exists.
inline OracleVerdict oracle_verdict(const std::vector<Tile>& tiles, std::size_t max_k,
                                    std::size_t max_p) {
  for (std::size_t k = 1; k <= max_k; ++k) {
    if (!strip_exists(tiles, k)) return {'N', k, 0};
    if (auto p = smallest_torus(tiles, k, max_p)) return {'P', k, *p};
  }
  return {'U', max_k, 0};
}

}  // namespace wftest
