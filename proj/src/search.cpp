#include "wangforge/search.hpp"

#include <algorithm>
#include <atomic>
#include <deque>
#include <numeric>
#include <set>
#include <sstream>
#include <thread>

namespace wangforge {

namespace {

// reach[u][v]: v reachable from u by a path of length >= 0.
std::vector<std::vector<char>> reachability(const MultiGraph& g) {
  const std::size_t n = g.vertices;
  std::vector<std::vector<char>> reach(n, std::vector<char>(n, 0));
  for (std::size_t i = 0; i < n; ++i) reach[i][i] = 1;
  for (auto [u, v] : g.edges) reach[u][v] = 1;
  for (std::size_t k = 0; k < n; ++k)
    for (std::size_t i = 0; i < n; ++i)
      if (reach[i][k])
        for (std::size_t j = 0; j < n; ++j)
          if (reach[k][j]) reach[i][j] = 1;
  return reach;
}

}  // namespace

GraphRejection classify_graph(const MultiGraph& g) {
  std::vector<char> touched(g.vertices, 0);
  for (auto [u, v] : g.edges) touched[u] = touched[v] = 1;
  if (std::count(touched.begin(), touched.end(), 0)) return GraphRejection::isolated_vertex;
  if (g.edges.size() < g.vertices + 2) return GraphRejection::too_few_edges;
  auto reach = reachability(g);
  for (auto [u, v] : g.edges)
    if (!reach[v][u]) return GraphRejection::edge_off_cycle;
  // Every edge lies inside a component now; a component is a bare cycle
  // when it has as many edges as vertices.
  std::vector<long> comp(g.vertices, -1);
  long comps = 0;
  for (std::size_t u = 0; u < g.vertices; ++u) {
    if (comp[u] >= 0) continue;
    for (std::size_t v = 0; v < g.vertices; ++v)
      if (reach[u][v] && reach[v][u]) comp[v] = comps;
    ++comps;
  }
  std::vector<std::size_t> vcount(comps, 0), ecount(comps, 0);
  for (std::size_t u = 0; u < g.vertices; ++u) ++vcount[comp[u]];
  for (auto [u, v] : g.edges) ++ecount[comp[u]];
  for (long c = 0; c < comps; ++c)
    if (ecount[c] == vcount[c]) return GraphRejection::bare_cycle_scc;
  return GraphRejection::none;
}

namespace {

// Calls fn(perm) for every permutation that keeps `order` grouped by
// equal invariants: perm[old] = new label.
template <class Inv, class Fn>
void for_each_invariant_permutation(std::size_t n, const std::vector<Inv>& inv, Fn&& fn) {
  std::vector<std::size_t> sorted(n);
  std::iota(sorted.begin(), sorted.end(), 0);
  std::stable_sort(sorted.begin(), sorted.end(),
                   [&](std::size_t a, std::size_t b) { return inv[a] < inv[b]; });
  std::vector<std::pair<std::size_t, std::size_t>> groups;
  for (std::size_t i = 0; i < n;) {
    std::size_t j = i;
    while (j < n && !(inv[sorted[i]] < inv[sorted[j]])) ++j;
    groups.push_back({i, j});
    i = j;
  }
  std::vector<std::size_t> slots = sorted;
  std::vector<std::size_t> perm(n);
  auto rec = [&](auto&& self, std::size_t gi) -> void {
    if (gi == groups.size()) {
      for (std::size_t pos = 0; pos < n; ++pos) perm[slots[pos]] = pos;
      fn(perm);
      return;
    }
    auto [lo, hi] = groups[gi];
    std::sort(slots.begin() + static_cast<long>(lo), slots.begin() + static_cast<long>(hi));
    do {
      self(self, gi + 1);
    } while (std::next_permutation(slots.begin() + static_cast<long>(lo),
                                   slots.begin() + static_cast<long>(hi)));
  };
  rec(rec, 0);
}

}  // namespace

MultiGraph canonical_graph(const MultiGraph& g) {
  using Inv = std::tuple<std::size_t, std::size_t, std::size_t>;
  std::vector<Inv> inv(g.vertices);
  for (auto [u, v] : g.edges) {
    ++std::get<0>(inv[u]);
    ++std::get<1>(inv[v]);
    if (u == v) ++std::get<2>(inv[u]);
  }
  MultiGraph best;
  bool have = false;
  for_each_invariant_permutation(g.vertices, inv, [&](const std::vector<std::size_t>& perm) {
    MultiGraph h{g.vertices, {}};
    for (auto [u, v] : g.edges)
      h.edges.push_back({static_cast<std::uint32_t>(perm[u]), static_cast<std::uint32_t>(perm[v])});
    std::sort(h.edges.begin(), h.edges.end());
    if (!have || h.edges < best.edges) {
      best = std::move(h);
      have = true;
    }
  });
  if (!have) best = g;
  return best;
}

std::vector<MultiGraph> enumerate_graphs(std::size_t n_edges) {
  std::set<std::vector<std::pair<std::uint32_t, std::uint32_t>>> seen;
  std::vector<MultiGraph> out;
  if (n_edges < 3) return out;
  for (std::size_t v = 1; v + 2 <= n_edges; ++v) {
    const std::size_t codes = v * v;
    std::vector<std::size_t> pick(n_edges);
    std::vector<std::size_t> touched(v, 0);
    std::size_t touched_count = 0;
    std::vector<MultiGraph> found;
    auto rec = [&](auto&& self, std::size_t i, std::size_t from) -> void {
      // Each remaining edge can touch at most two new vertices.
      if (v - touched_count > 2 * (n_edges - i)) return;
      if (i == n_edges) {
        MultiGraph g{v, {}};
        for (std::size_t c : pick)
          g.edges.push_back({static_cast<std::uint32_t>(c / v), static_cast<std::uint32_t>(c % v)});
        if (classify_graph(g) != GraphRejection::none) return;
        MultiGraph canon = canonical_graph(g);
        if (seen.insert(canon.edges).second) found.push_back(std::move(canon));
        return;
      }
      for (std::size_t c = from; c < codes; ++c) {
        pick[i] = c;
        std::size_t a = c / v, b = c % v;
        touched_count += (touched[a]++ == 0);
        touched_count += (touched[b]++ == 0);
        self(self, i + 1, c);
        touched_count -= (--touched[b] == 0);
        touched_count -= (--touched[a] == 0);
      }
    };
    rec(rec, 0, 0);
    std::sort(found.begin(), found.end(),
              [](const MultiGraph& a, const MultiGraph& b) { return a.edges < b.edges; });
    for (auto& g : found) out.push_back(std::move(g));
  }
  return out;
}

namespace {

// Canonical sorted tile list over color permutations of both axes,
// restricted to the colors in use.
std::vector<Tile> canonical_tiles(const Transducer& t) {
  std::vector<ColorId> hmap(t.h_count(), 0), vmap(t.v_count(), 0);
  std::vector<char> hused(t.h_count(), 0), vused(t.v_count(), 0);
  for (const Tile& x : t.tiles()) {
    hused[x.w] = hused[x.e] = 1;
    vused[x.s] = vused[x.n] = 1;
  }
  std::size_t H = 0, V = 0;
  for (std::size_t i = 0; i < t.h_count(); ++i)
    if (hused[i]) hmap[i] = static_cast<ColorId>(H++);
  for (std::size_t i = 0; i < t.v_count(); ++i)
    if (vused[i]) vmap[i] = static_cast<ColorId>(V++);
  std::vector<Tile> base;
  for (const Tile& x : t.tiles()) base.push_back({hmap[x.w], hmap[x.e], vmap[x.s], vmap[x.n]});

  using Inv = std::array<std::size_t, 3>;
  std::vector<Inv> hinv(H, Inv{}), vinv(V, Inv{});
  for (const Tile& x : base) {
    ++hinv[x.w][0];
    ++hinv[x.e][1];
    if (x.w == x.e) ++hinv[x.w][2];
    ++vinv[x.s][0];
    ++vinv[x.n][1];
    if (x.s == x.n) ++vinv[x.s][2];
  }
  std::vector<Tile> best;
  bool have = false;
  std::vector<Tile> cand(base.size());
  for_each_invariant_permutation(H, hinv, [&](const std::vector<std::size_t>& hp) {
    for_each_invariant_permutation(V, vinv, [&](const std::vector<std::size_t>& vp) {
      for (std::size_t i = 0; i < base.size(); ++i) {
        const Tile& x = base[i];
        cand[i] = {static_cast<ColorId>(hp[x.w]), static_cast<ColorId>(hp[x.e]),
                   static_cast<ColorId>(vp[x.s]), static_cast<ColorId>(vp[x.n])};
      }
      std::sort(cand.begin(), cand.end());
      if (!have || cand < best) {
        best = cand;
        have = true;
      }
    });
  });
  return best;
}

std::string encode_key(const std::vector<Tile>& tiles) {
  std::ostringstream out;
  for (std::size_t i = 0; i < tiles.size(); ++i) {
    const Tile& x = tiles[i];
    out << (i ? " " : "") << x.w << ',' << x.e << ',' << x.s << ',' << x.n;
  }
  return out.str();
}

}  // namespace

std::string canonical_key(const Transducer& t, bool symmetries) {
  if (!symmetries) return encode_key(canonical_tiles(t));
  std::vector<Tile> best;
  bool have = false;
  Transducer cur = t.without_names();
  for (int reflect = 0; reflect < 2; ++reflect) {
    Transducer img = reflect ? reverse(cur) : cur;
    for (int r = 0; r < 4; ++r) {
      auto c = canonical_tiles(img);
      if (!have || c < best) {
        best = std::move(c);
        have = true;
      }
      img = rotate(img);
    }
  }
  return encode_key(best);
}

void enumerate_wangsets(const MultiGraph& g, std::size_t v_colors,
                        const std::function<void(const Candidate&)>& emit, bool symmetries) {
  const std::size_t e = g.edges.size();
  std::set<std::string> seen;
  std::vector<ColorId> digits(2 * e, 0);
  while (true) {
    std::vector<Tile> tiles;
    for (std::size_t i = 0; i < e; ++i)
      tiles.push_back({g.edges[i].first, g.edges[i].second, digits[2 * i], digits[2 * i + 1]});
    std::vector<Tile> sorted = tiles;
    std::sort(sorted.begin(), sorted.end());
    if (std::adjacent_find(sorted.begin(), sorted.end()) == sorted.end()) {
      Transducer t(g.vertices, v_colors, std::move(tiles));
      std::string key = canonical_key(t, symmetries);
      if (seen.insert(key).second) emit(Candidate{std::move(t), std::move(key)});
    }
    std::size_t i = 0;
    while (i < digits.size() && ++digits[i] == v_colors) digits[i++] = 0;
    if (i == digits.size()) break;
  }
}

std::string to_string(Verdict::Kind kind) {
  switch (kind) {
    case Verdict::Kind::not_tiling: return "NotTiling";
    case Verdict::Kind::periodic: return "Periodic";
    case Verdict::Kind::unknown: return "Unknown";
  }
  return "?";
}

namespace {

// Shortest cycle of a graph (BFS from every state), at most max_len long.
std::optional<std::vector<Tile>> shortest_cycle(const Transducer& g, std::size_t max_len) {
  std::optional<std::vector<Tile>> best;
  const std::size_t h = g.h_count();
  std::vector<long> parent(h);
  std::vector<std::size_t> dist(h);
  for (ColorId root = 0; root < h; ++root) {
    if (g.outgoing(root).empty()) continue;
    std::fill(parent.begin(), parent.end(), -2);
    parent[root] = -1;
    dist[root] = 0;
    std::deque<ColorId> queue{root};
    const std::size_t limit = best ? best->size() - 1 : max_len;
    bool done = false;
    while (!queue.empty() && !done) {
      ColorId q = queue.front();
      queue.pop_front();
      if (dist[q] + 1 > limit) break;
      for (const Tile& x : g.outgoing(q)) {
        if (x.e == root) {
          std::vector<Tile> path{x};
          for (ColorId v = q; parent[v] >= 0;) {
            const Tile& y = g.tiles()[static_cast<std::size_t>(parent[v])];
            path.push_back(y);
            v = y.w;
          }
          std::reverse(path.begin(), path.end());
          best = std::move(path);
          done = true;
          break;
        }
        if (parent[x.e] == -2) {
          parent[x.e] = static_cast<long>(&x - g.tiles().data());
          dist[x.e] = dist[q] + 1;
          queue.push_back(x.e);
        }
      }
    }
  }
  return best;
}

}  // namespace

std::optional<TilingGrid> find_torus(const Transducer& t, std::size_t height,
                                     std::size_t max_width, const Budget& budget) {
  TracedPower power(t, height, budget);
  Transducer diag = filter_tiles(power.top(), [](const Tile& x) { return x.s == x.n; });
  auto cycle = shortest_cycle(diag, max_width);
  if (!cycle) return std::nullopt;
  TilingGrid grid = power.decode_path(*cycle);
  if (auto bad = torus_violation(t.tiles(), grid))
    throw WangError("torus reconstruction failed: " + *bad);
  return grid;
}

Verdict test_aperiodicity(const Transducer& t, const AperiodicityOptions& options) {
  Verdict v;
  Deadline deadline(options.budget);
  const Transducer base = t.without_names();
  Transducer cur;
  auto finish = [&]() {
    v.elapsed = deadline.elapsed();
    return v;
  };
  for (std::size_t k = 1; k <= options.budget.max_k; ++k) {
    Transducer red;
    try {
      red = trim(k == 1 ? base : compose(cur, base, options.budget));
    } catch (const BudgetExceeded&) {
      return finish();
    }
    if (options.prune_io) red = prune_io_alphabet(red);
    if (options.drop_inter_scc) red = trim(drop_inter_scc(red));
    if (red.size() > options.minimize_threshold) red = minimize_bisim(red);
    v.steps.push_back({k, red.h_count(), red.size()});
    v.peak_states = std::max(v.peak_states, red.h_count());
    v.peak_transitions = std::max(v.peak_transitions, red.size());
    v.k = k;
    if (red.empty()) {
      v.kind = Verdict::Kind::not_tiling;
      return finish();
    }
    if (auto witness = has_periodic_point(red)) {
      try {
        if (auto torus = find_torus(base, k, options.max_period, options.budget)) {
          v.kind = Verdict::Kind::periodic;
          v.p = torus->width;
          v.torus = std::move(torus);
          return finish();
        }
      } catch (const BudgetExceeded&) {
        if (witness->period <= options.max_period) {
          v.kind = Verdict::Kind::periodic;
          v.p = witness->period;
          return finish();
        }
      }
    }
    if (red.h_count() > options.budget.max_states ||
        red.size() > options.budget.max_transitions || deadline.expired())
      return finish();
    cur = std::move(red);
  }
  return finish();
}

std::vector<Verdict> test_many(const std::vector<Transducer>& sets,
                               const AperiodicityOptions& options, std::size_t jobs) {
  std::vector<Verdict> out(sets.size());
  jobs = std::max<std::size_t>(1, std::min(jobs, sets.size()));
  std::atomic<std::size_t> next{0};
  auto worker = [&]() {
    for (std::size_t i = next++; i < sets.size(); i = next++)
      out[i] = test_aperiodicity(sets[i], options);
  };
  std::vector<std::thread> pool;
  for (std::size_t j = 1; j < jobs; ++j) pool.emplace_back(worker);
  worker();
  for (auto& th : pool) th.join();
  return out;
}

std::string ledger_line(const std::string& key, const Verdict& v) {
  std::ostringstream out;
  out << "verdict v1 | " << key << " | " << to_string(v.kind) << " | " << v.k << " | " << v.p
      << " | k=" << v.k << ",states=" << v.peak_states << ",transitions=" << v.peak_transitions;
  return out.str();
}

Direction parse_direction(std::string_view text) {
  if (text == "forward" || text == "up") return Direction::forward;
  if (text == "reverse" || text == "down") return Direction::reverse;
  throw WangError("unknown direction '" + std::string(text) + "'");
}

std::string_view to_string(Direction d) {
  return d == Direction::forward ? "forward" : "reverse";
}

std::optional<std::size_t> longest_constant_path(const Transducer& t, ColorId letter) {
  Transducer g = filter_tiles(t, [&](const Tile& x) { return x.s == letter && x.n == letter; });
  const std::size_t h = g.h_count();
  std::vector<std::uint32_t> indeg(h, 0);
  for (const Tile& x : g.tiles()) ++indeg[x.e];
  std::vector<ColorId> queue;
  for (ColorId q = 0; q < h; ++q)
    if (indeg[q] == 0) queue.push_back(q);
  std::vector<std::size_t> longest(h, 0);
  std::size_t processed = 0, best = 0;
  while (!queue.empty()) {
    ColorId q = queue.back();
    queue.pop_back();
    ++processed;
    best = std::max(best, longest[q]);
    for (const Tile& x : g.outgoing(q)) {
      longest[x.e] = std::max(longest[x.e], longest[q] + 1);
      if (--indeg[x.e] == 0) queue.push_back(x.e);
    }
  }
  if (processed != h) return std::nullopt;
  return best;
}

SeededReport seeded_row_analysis(const Transducer& t, ColorId seed, std::size_t k_max,
                                 Direction direction, const Budget& budget) {
  if (seed >= t.v_count()) throw WangError("seed letter out of range");
  SeededReport report;
  Deadline deadline(budget);
  const Transducer base = t.without_names();
  Transducer cur = constant_row(base.v_count(), seed);
  for (std::size_t k = 1; k <= k_max; ++k) {
    Transducer raw;
    try {
      raw = direction == Direction::forward ? compose(cur, base, budget)
                                            : compose(base, cur, budget);
    } catch (const BudgetExceeded&) {
      report.budget_exhausted = true;
      break;
    }
    report.raw_steps.push_back({k, raw.h_count(), raw.size()});
    Transducer reduced = minimize_bisim(trim(raw));
    report.reduced_steps.push_back({k, reduced.h_count(), reduced.size()});
    report.k_reached = k;
    if (reduced.empty() || k == k_max) {
      report.longest_seed_path = longest_constant_path(raw, seed);
      if (reduced.empty()) report.first_empty_k = k;
      break;
    }
    if (deadline.expired() || reduced.h_count() > budget.max_states) {
      report.budget_exhausted = true;
      break;
    }
    cur = std::move(reduced);
  }
  report.elapsed = deadline.elapsed();
  return report;
}

SquareReport max_square(const Transducer& t, std::size_t max_side, const Budget& budget) {
  SquareReport report;
  AperiodicityOptions quick;
  quick.budget = budget;
  quick.budget.max_k = std::min<std::size_t>(budget.max_k, 4);
  quick.max_period = 16;
  Verdict v = test_aperiodicity(t, quick);
  if (v.kind == Verdict::Kind::periodic && v.torus) {
    const TilingGrid& torus = *v.torus;
    TilingGrid grid{max_side, max_side, std::vector<std::uint32_t>(max_side * max_side)};
    for (std::size_t y = 0; y < max_side; ++y)
      for (std::size_t x = 0; x < max_side; ++x)
        grid.at(x, y) = torus.at(x % torus.width, y % torus.height);
    report.size = max_side;
    report.unbounded = true;
    report.witness = std::move(grid);
    return report;
  }
  Deadline deadline(budget);
  for (std::size_t n = 1; n <= max_side; ++n) {
    RectangleResult r = tile_rectangle(t, n, n, budget);
    if (!r.grid) {
      report.proven_maximal = r.proven_impossible;
      break;
    }
    report.size = n;
    report.witness = std::move(r.grid);
    if (deadline.expired()) break;
  }
  return report;
}

}  // namespace wangforge
