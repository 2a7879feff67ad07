#include "wangforge/algebra.hpp"

#include <algorithm>
#include <cstdint>
#include <deque>
#include <map>
#include <numeric>
#include <tuple>
#include <unordered_map>

namespace wangforge {

namespace {

constexpr std::uint32_t kNone = 0xffffffffu;

std::uint64_t mix(std::uint64_t x) {
  x ^= x >> 33;
  x *= 0xff51afd7ed558ccdULL;
  x ^= x >> 33;
  x *= 0xc4ceb9fe1a85ec53ULL;
  x ^= x >> 33;
  return x;
}

// Dense or hashed numbering of product states (i, j) in first-seen order.
class PairIds {
 public:
  PairIds(std::size_t ha, std::size_t hb) : hb_(hb) {
    if (ha * hb <= (std::size_t{1} << 26)) dense_.assign(ha * hb, kNone);
  }

  std::uint32_t get(ColorId i, ColorId j) {
    std::uint64_t key = static_cast<std::uint64_t>(i) * hb_ + j;
    if (!dense_.empty()) {
      std::uint32_t& slot = dense_[key];
      if (slot == kNone) {
        slot = static_cast<std::uint32_t>(pairs_.size());
        pairs_.push_back({i, j});
      }
      return slot;
    }
    auto [it, inserted] =
        sparse_.try_emplace(key, static_cast<std::uint32_t>(pairs_.size()));
    if (inserted) pairs_.push_back({i, j});
    return it->second;
  }

  const std::vector<std::pair<ColorId, ColorId>>& pairs() const { return pairs_; }

 private:
  std::size_t hb_;
  std::vector<std::uint32_t> dense_;
  std::unordered_map<std::uint64_t, std::uint32_t> sparse_;
  std::vector<std::pair<ColorId, ColorId>> pairs_;
};

// Tiles of t grouped by south color.
struct SouthIndex {
  std::vector<std::size_t> offsets;
  std::vector<std::uint32_t> tile_ids;

  explicit SouthIndex(const Transducer& t) {
    offsets.assign(t.v_count() + 1, 0);
    for (const Tile& tile : t.tiles()) ++offsets[tile.s + 1];
    std::partial_sum(offsets.begin(), offsets.end(), offsets.begin());
    tile_ids.resize(t.size());
    std::vector<std::size_t> fill(offsets.begin(), offsets.end() - 1);
    for (std::size_t i = 0; i < t.size(); ++i)
      tile_ids[fill[t.tiles()[i].s]++] = static_cast<std::uint32_t>(i);
  }
};

// Keeps only the states listed in `keep` (in increasing order), renumbered
// densely, together with the given tiles (already restricted to them).
Transducer restrict_states(const Transducer& t, const std::vector<char>& keep,
                           std::vector<Tile> tiles) {
  std::vector<ColorId> id(t.h_count(), kNone);
  std::vector<std::string> names;
  ColorId next = 0;
  for (ColorId q = 0; q < t.h_count(); ++q) {
    if (!keep[q]) continue;
    id[q] = next++;
    if (t.has_names()) names.push_back(t.names()[q]);
  }
  for (Tile& tile : tiles) {
    tile.w = id[tile.w];
    tile.e = id[tile.e];
  }
  return Transducer::merged(next, t.v_count(), std::move(tiles), std::move(names));
}

}  // namespace

TracedCompose compose_traced(const Transducer& a, const Transducer& b,
                             const Budget& budget) {
  if (a.v_count() != b.v_count()) throw IncompatibleAlphabets();
  SouthIndex south(b);
  std::size_t count = 0;
  for (const Tile& ta : a.tiles())
    count += south.offsets[ta.n + 1] - south.offsets[ta.n];
  if (count > budget.max_transitions)
    throw BudgetExceeded("composition exceeds the transition budget", 0);

  PairIds ids(a.h_count(), b.h_count());
  std::vector<Tile> tiles;
  tiles.reserve(count);
  for (const Tile& ta : a.tiles()) {
    for (std::size_t k = south.offsets[ta.n]; k < south.offsets[ta.n + 1]; ++k) {
      const Tile& tb = b.tiles()[south.tile_ids[k]];
      ColorId w = ids.get(ta.w, tb.w);
      ColorId e = ids.get(ta.e, tb.e);
      tiles.push_back({w, e, ta.s, tb.n});
    }
  }
  if (ids.pairs().size() > budget.max_states)
    throw BudgetExceeded("composition exceeds the state budget", 0);

  std::vector<std::string> names;
  if (a.has_names() && b.has_names()) {
    names.reserve(ids.pairs().size());
    for (auto [i, j] : ids.pairs()) names.push_back(a.names()[i] + b.names()[j]);
  }
  TracedCompose out{Transducer::merged(ids.pairs().size(), a.v_count(), std::move(tiles),
                                       std::move(names)),
                    ids.pairs()};
  return out;
}

Transducer compose(const Transducer& a, const Transducer& b, const Budget& budget) {
  return compose_traced(a, b, budget).result;
}

Transducer compose_all(const std::vector<Transducer>& factors, const Budget& budget) {
  if (factors.empty()) throw WangError("empty composition");
  Transducer acc = factors.front();
  for (std::size_t i = 1; i < factors.size(); ++i) acc = compose(acc, factors[i], budget);
  return acc;
}

Transducer rotate(const Transducer& t) {
  std::vector<Tile> tiles;
  tiles.reserve(t.size());
  for (const Tile& x : t.tiles()) tiles.push_back({x.s, x.n, x.e, x.w});
  return Transducer(t.v_count(), t.h_count(), std::move(tiles));
}

Transducer reverse(const Transducer& t) {
  std::vector<Tile> tiles;
  tiles.reserve(t.size());
  for (const Tile& x : t.tiles()) tiles.push_back({x.e, x.w, x.s, x.n});
  return Transducer(t.h_count(), t.v_count(), std::move(tiles), t.names());
}

Transducer disjoint_union(const Transducer& a, const Transducer& b) {
  if (a.v_count() != b.v_count()) throw IncompatibleAlphabets();
  std::vector<Tile> tiles = a.tiles();
  const auto off = static_cast<ColorId>(a.h_count());
  for (const Tile& x : b.tiles()) tiles.push_back({x.w + off, x.e + off, x.s, x.n});
  std::vector<std::string> names;
  if (a.has_names() || b.has_names()) {
    for (ColorId q = 0; q < a.h_count(); ++q) names.push_back(a.name(q));
    for (ColorId q = 0; q < b.h_count(); ++q) names.push_back(b.name(q));
  }
  return Transducer(a.h_count() + b.h_count(), a.v_count(), std::move(tiles),
                    std::move(names));
}

Transducer trim(const Transducer& t) { return trim_traced(t).result; }

TracedTrim trim_traced(const Transducer& t) {
  const std::size_t h = t.h_count();
  const auto& tiles = t.tiles();
  ReverseIndex rev(t);
  std::vector<std::uint32_t> indeg(h, 0), outdeg(h, 0);
  for (const Tile& x : tiles) {
    ++outdeg[x.w];
    ++indeg[x.e];
  }
  std::vector<char> dead_tile(tiles.size(), 0), removed(h, 0);
  std::vector<ColorId> queue;
  for (ColorId q = 0; q < h; ++q)
    if (indeg[q] == 0 || outdeg[q] == 0) {
      removed[q] = 1;
      queue.push_back(q);
    }
  while (!queue.empty()) {
    ColorId q = queue.back();
    queue.pop_back();
    auto out = t.outgoing(q);
    std::size_t base = static_cast<std::size_t>(out.data() - tiles.data());
    for (std::size_t i = 0; i < out.size(); ++i) {
      if (dead_tile[base + i]) continue;
      dead_tile[base + i] = 1;
      ColorId e = out[i].e;
      if (--indeg[e] == 0 && !removed[e]) {
        removed[e] = 1;
        queue.push_back(e);
      }
    }
    for (std::uint32_t id : rev.incoming(q)) {
      if (dead_tile[id]) continue;
      dead_tile[id] = 1;
      ColorId w = tiles[id].w;
      if (--outdeg[w] == 0 && !removed[w]) {
        removed[w] = 1;
        queue.push_back(w);
      }
    }
  }
  std::vector<Tile> kept;
  for (std::size_t i = 0; i < tiles.size(); ++i)
    if (!dead_tile[i]) kept.push_back(tiles[i]);
  std::vector<char> keep(h);
  TracedTrim out;
  for (ColorId q = 0; q < h; ++q) {
    keep[q] = !removed[q];
    if (keep[q]) out.kept.push_back(q);
  }
  out.result = restrict_states(t, keep, std::move(kept));
  return out;
}

Transducer prune_io_alphabet(const Transducer& t) {
  Transducer cur = trim(t);
  while (true) {
    std::vector<char> read(cur.v_count(), 0), written(cur.v_count(), 0);
    for (const Tile& x : cur.tiles()) {
      read[x.s] = 1;
      written[x.n] = 1;
    }
    Transducer next = trim(filter_tiles(
        cur, [&](const Tile& x) { return read[x.n] && written[x.s]; }));
    if (next.size() == cur.size()) return cur;
    cur = std::move(next);
  }
}

std::vector<std::uint32_t> scc_ids(const Transducer& t) {
  const std::size_t h = t.h_count();
  std::vector<std::uint32_t> index(h, kNone), low(h, 0), comp(h, kNone);
  std::vector<char> on_stack(h, 0);
  std::vector<ColorId> stack;
  struct Frame {
    ColorId v;
    std::size_t next;
  };
  std::vector<Frame> calls;
  std::uint32_t counter = 0, comps = 0;
  for (ColorId root = 0; root < h; ++root) {
    if (index[root] != kNone) continue;
    calls.push_back({root, 0});
    index[root] = low[root] = counter++;
    stack.push_back(root);
    on_stack[root] = 1;
    while (!calls.empty()) {
      Frame& f = calls.back();
      auto out = t.outgoing(f.v);
      if (f.next < out.size()) {
        ColorId w = out[f.next++].e;
        if (index[w] == kNone) {
          index[w] = low[w] = counter++;
          stack.push_back(w);
          on_stack[w] = 1;
          calls.push_back({w, 0});
        } else if (on_stack[w]) {
          low[f.v] = std::min(low[f.v], index[w]);
        }
        continue;
      }
      ColorId v = f.v;
      calls.pop_back();
      if (!calls.empty()) low[calls.back().v] = std::min(low[calls.back().v], low[v]);
      if (low[v] == index[v]) {
        ColorId w;
        do {
          w = stack.back();
          stack.pop_back();
          on_stack[w] = 0;
          comp[w] = comps;
        } while (w != v);
        ++comps;
      }
    }
  }
  return comp;
}

Transducer drop_inter_scc(const Transducer& t) {
  auto comp = scc_ids(t);
  return filter_tiles(t, [&](const Tile& x) { return comp[x.w] == comp[x.e]; });
}

Partition forward_bisimulation(const Transducer& t) {
  // Worklist refinement: a state is re-examined only when one of its
  // successors changed block, and the largest part of a split keeps the old
  // block id so that its predecessors stay untouched.
  const std::size_t h = t.h_count();
  if (h == 0) return {};
  const auto& tiles = t.tiles();
  ReverseIndex rev(t);
  using Sig = std::vector<std::tuple<ColorId, ColorId, std::uint32_t>>;

  std::vector<std::uint32_t> block(h, 0);
  std::vector<std::vector<ColorId>> members(1);
  std::vector<std::size_t> pos(h);
  for (ColorId q = 0; q < h; ++q) {
    pos[q] = q;
    members[0].push_back(q);
  }
  std::vector<char> dirty(h, 1), in_group(h, 0);
  std::vector<ColorId> work(members[0]), next_work;

  auto signature = [&](ColorId q) {
    Sig sig;
    for (const Tile& x : t.outgoing(q)) sig.emplace_back(x.s, x.n, block[x.e]);
    std::sort(sig.begin(), sig.end());
    sig.erase(std::unique(sig.begin(), sig.end()), sig.end());
    return sig;
  };
  auto move_to = [&](ColorId q, std::uint32_t b) {
    auto& from = members[block[q]];
    ColorId last = from.back();
    from[pos[q]] = last;
    pos[last] = pos[q];
    from.pop_back();
    block[q] = b;
    pos[q] = members[b].size();
    members[b].push_back(q);
    for (auto id : rev.incoming(q)) {
      ColorId p = tiles[id].w;
      if (!dirty[p]) {
        dirty[p] = 1;
        next_work.push_back(p);
      }
    }
  };

  while (!work.empty()) {
    std::sort(work.begin(), work.end(), [&](ColorId a, ColorId b) {
      return block[a] != block[b] ? block[a] < block[b] : a < b;
    });
    for (std::size_t i = 0; i < work.size();) {
      const std::uint32_t b = block[work[i]];
      std::size_t j = i;
      while (j < work.size() && block[work[j]] == b) ++j;
      std::vector<std::pair<Sig, ColorId>> group;
      for (std::size_t k = i; k < j; ++k) {
        dirty[work[k]] = 0;
        in_group[work[k]] = 1;
      }
      for (std::size_t k = i; k < j; ++k) group.emplace_back(signature(work[k]), work[k]);
      std::optional<Sig> stay;
      if (j - i < members[b].size()) {
        // Clean members outside the group share one signature.
        for (ColorId q : members[b])
          if (!in_group[q] && !dirty[q]) {
            stay = signature(q);
            break;
          }
      }
      for (std::size_t k = i; k < j; ++k) in_group[work[k]] = 0;
      std::sort(group.begin(), group.end());
      std::vector<std::pair<std::size_t, std::size_t>> runs;
      for (std::size_t a = 0; a < group.size();) {
        std::size_t c = a;
        while (c < group.size() && group[c].first == group[a].first) ++c;
        runs.push_back({a, c});
        a = c;
      }
      std::size_t keep = runs.size();
      if (stay) {
        for (std::size_t r = 0; r < runs.size(); ++r)
          if (group[runs[r].first].first == *stay) keep = r;
      } else {
        keep = 0;
        for (std::size_t r = 1; r < runs.size(); ++r)
          if (runs[r].second - runs[r].first > runs[keep].second - runs[keep].first) keep = r;
      }
      for (std::size_t r = 0; r < runs.size(); ++r) {
        if (r == keep) continue;
        const auto fresh = static_cast<std::uint32_t>(members.size());
        members.emplace_back();
        for (std::size_t k = runs[r].first; k < runs[r].second; ++k)
          move_to(group[k].second, fresh);
      }
      i = j;
    }
    work.swap(next_work);
    next_work.clear();
  }

  // Renumber blocks by smallest member so results are canonical.
  std::vector<std::uint32_t> renum(members.size(), kNone);
  std::uint32_t fresh = 0;
  for (ColorId q = 0; q < h; ++q) {
    if (renum[block[q]] == kNone) renum[block[q]] = fresh++;
    block[q] = renum[block[q]];
  }
  return block;
}

Transducer quotient(const Transducer& t, const Partition& p) {
  if (p.size() != t.h_count()) throw WangError("partition size mismatch");
  std::size_t blocks = 0;
  for (auto b : p) blocks = std::max<std::size_t>(blocks, b + 1);
  std::vector<Tile> tiles;
  tiles.reserve(t.size());
  for (const Tile& x : t.tiles()) tiles.push_back({p[x.w], p[x.e], x.s, x.n});
  std::vector<std::string> names;
  if (t.has_names()) {
    names.resize(blocks);
    for (ColorId q = 0; q < t.h_count(); ++q) {
      std::string& nm = names[p[q]];
      if (!nm.empty()) nm += '+';
      nm += t.names()[q];
    }
  }
  return Transducer::merged(blocks, t.v_count(), std::move(tiles), std::move(names));
}

Transducer minimize_bisim(const Transducer& t) {
  Transducer cur = t;
  bool first = true;
  while (true) {
    std::size_t before = cur.h_count();
    cur = quotient(cur, forward_bisimulation(cur));
    bool forward_changed = cur.h_count() != before;
    if (!first && !forward_changed) return cur;
    first = false;
    before = cur.h_count();
    cur = quotient(cur, forward_bisimulation(reverse(cur)));
    if (cur.h_count() == before) return cur;
  }
}

Strategy parse_strategy(std::string_view text) {
  if (text == "plain") return Strategy::plain;
  if (text == "trim_each" || text == "trim") return Strategy::trim_each;
  if (text == "trim_and_minimize" || text == "minimize") return Strategy::trim_and_minimize;
  throw WangError("unknown strategy '" + std::string(text) + "'");
}

std::string_view to_string(Strategy s) {
  switch (s) {
    case Strategy::plain: return "plain";
    case Strategy::trim_each: return "trim_each";
    case Strategy::trim_and_minimize: return "trim_and_minimize";
  }
  return "?";
}

Transducer reduce(const Transducer& t, Strategy s) {
  switch (s) {
    case Strategy::plain: return t;
    case Strategy::trim_each: return trim(t);
    case Strategy::trim_and_minimize: return minimize_bisim(trim(t));
  }
  return t;
}

Transducer power(const Transducer& t, std::size_t k, Strategy strategy,
                 const Budget& budget) {
  if (k == 0) throw WangError("power requires k >= 1");
  if (k > budget.max_k) throw BudgetExceeded("k exceeds the budget", 0);
  Deadline deadline(budget);
  Transducer acc = reduce(t, strategy);
  for (std::size_t i = 2; i <= k; ++i) {
    try {
      acc = reduce(compose(acc, t, budget), strategy);
    } catch (const BudgetExceeded& e) {
      throw BudgetExceeded(e.what(), i - 1);
    }
    if (deadline.expired()) throw BudgetExceeded("time budget exhausted", i);
  }
  return acc;
}

bool is_empty(const Transducer& t) { return trim(t).empty(); }

std::optional<PeriodicWitness> has_periodic_point(const Transducer& t) {
  Transducer diag = trim(filter_tiles(t, [](const Tile& x) { return x.s == x.n; }));
  if (diag.empty()) return std::nullopt;
  const std::size_t h = diag.h_count();
  // Shortest cycle through BFS from each state while that stays cheap,
  // otherwise any cycle reached by walking from state 0.
  std::optional<std::vector<std::size_t>> best;
  auto tile_index = [&](const Tile& x) {
    return static_cast<std::size_t>(&x - diag.tiles().data());
  };
  if (h * diag.size() <= 4'000'000) {
    std::vector<long> parent(h);
    std::vector<std::size_t> dist(h);
    for (ColorId root = 0; root < h; ++root) {
      std::fill(parent.begin(), parent.end(), -2);
      std::deque<ColorId> queue{root};
      dist[root] = 0;
      parent[root] = -1;
      bool done = false;
      while (!queue.empty() && !done) {
        ColorId q = queue.front();
        queue.pop_front();
        if (best && dist[q] + 1 >= best->size()) break;
        for (const Tile& x : diag.outgoing(q)) {
          if (x.e == root) {
            std::vector<std::size_t> path{tile_index(x)};
            for (ColorId v = q; parent[v] >= 0;) {
              path.push_back(static_cast<std::size_t>(parent[v]));
              v = diag.tiles()[parent[v]].w;
            }
            std::reverse(path.begin(), path.end());
            best = std::move(path);
            done = true;
            break;
          }
          if (parent[x.e] == -2) {
            parent[x.e] = static_cast<long>(tile_index(x));
            dist[x.e] = dist[q] + 1;
            queue.push_back(x.e);
          }
        }
      }
    }
  } else {
    std::vector<long> seen_at(h, -1);
    std::vector<std::size_t> path;
    ColorId q = 0;
    while (seen_at[q] < 0) {
      seen_at[q] = static_cast<long>(path.size());
      const Tile& x = diag.outgoing(q)[0];
      path.push_back(tile_index(x));
      q = x.e;
    }
    best = std::vector<std::size_t>(path.begin() + seen_at[q], path.end());
  }
  PeriodicWitness w;
  w.period = best->size();
  for (std::size_t i : *best) w.cycle.push_back(diag.tiles()[i]);
  return w;
}

std::set<RunWindow> window_language(const Transducer& t, std::size_t L) {
  std::set<RunWindow> out;
  Transducer tt = trim(t);
  if (tt.empty() || L == 0) return out;
  std::vector<ColorId> all(tt.h_count());
  std::iota(all.begin(), all.end(), 0);
  RunWindow cur;
  // Depth-first over label words, tracking the set of reachable end states.
  auto dfs = [&](auto&& self, const std::vector<ColorId>& states) -> void {
    std::map<Label, std::vector<ColorId>> next;
    for (ColorId q : states)
      for (const Tile& x : tt.outgoing(q)) next[{x.s, x.n}].push_back(x.e);
    for (auto& [label, targets] : next) {
      std::sort(targets.begin(), targets.end());
      targets.erase(std::unique(targets.begin(), targets.end()), targets.end());
      cur.word.push_back(label);
      out.insert(cur);
      if (cur.word.size() < L) self(self, targets);
      cur.word.pop_back();
    }
  };
  dfs(dfs, all);
  return out;
}

bool equivalent_upto(const Transducer& a, const Transducer& b, std::size_t L) {
  if (a.v_count() != b.v_count()) throw IncompatibleAlphabets();
  return window_language(a, L) == window_language(b, L);
}

namespace {

// Per-state adjacency with labels, used by the isomorphism and embedding
// searches.
struct LabeledGraph {
  struct Edge {
    ColorId other;
    ColorId s, n;
  };
  std::vector<std::vector<Edge>> out, in;
  std::vector<char> active;

  explicit LabeledGraph(const Transducer& t)
      : out(t.h_count()), in(t.h_count()), active(t.h_count(), 0) {
    for (const Tile& x : t.tiles()) {
      out[x.w].push_back({x.e, x.s, x.n});
      in[x.e].push_back({x.w, x.s, x.n});
      active[x.w] = active[x.e] = 1;
    }
  }
};

std::uint64_t label_key(ColorId s, ColorId n) {
  return (static_cast<std::uint64_t>(s) << 32) | n;
}

// Color refinement over both graphs at once, so colors are comparable.
std::pair<std::vector<std::uint64_t>, std::vector<std::uint64_t>> refine_colors(
    const LabeledGraph& a, const LabeledGraph& b) {
  auto init = [](const LabeledGraph& g) {
    std::vector<std::uint64_t> c(g.out.size(), 0);
    for (std::size_t q = 0; q < g.out.size(); ++q) {
      std::vector<std::uint64_t> o, i;
      for (auto& e : g.out[q]) o.push_back(mix(label_key(e.s, e.n) + (e.other == q)));
      for (auto& e : g.in[q]) i.push_back(mix(label_key(e.s, e.n) ^ 0x5555));
      std::sort(o.begin(), o.end());
      std::sort(i.begin(), i.end());
      std::uint64_t h = mix(o.size() * 1315423911ULL + i.size());
      for (auto v : o) h = mix(h ^ v);
      h = mix(h ^ 0xabcdef);
      for (auto v : i) h = mix(h ^ v);
      c[q] = h;
    }
    return c;
  };
  auto step = [](const LabeledGraph& g, const std::vector<std::uint64_t>& c) {
    std::vector<std::uint64_t> next(c.size());
    for (std::size_t q = 0; q < c.size(); ++q) {
      std::vector<std::uint64_t> o, i;
      for (auto& e : g.out[q]) o.push_back(mix(label_key(e.s, e.n) ^ c[e.other]));
      for (auto& e : g.in[q]) i.push_back(mix(label_key(e.s, e.n) ^ ~c[e.other]));
      std::sort(o.begin(), o.end());
      std::sort(i.begin(), i.end());
      std::uint64_t h = mix(c[q]);
      for (auto v : o) h = mix(h ^ v);
      h = mix(h ^ 0x1234567);
      for (auto v : i) h = mix(h ^ v);
      next[q] = h;
    }
    return next;
  };
  auto classes = [](const std::vector<std::uint64_t>& x, const std::vector<std::uint64_t>& y) {
    std::vector<std::uint64_t> all = x;
    all.insert(all.end(), y.begin(), y.end());
    std::sort(all.begin(), all.end());
    return std::unique(all.begin(), all.end()) - all.begin();
  };
  auto ca = init(a), cb = init(b);
  auto count = classes(ca, cb);
  for (std::size_t round = 0; round < ca.size() + cb.size() + 1; ++round) {
    auto na = step(a, ca), nb = step(b, cb);
    auto ncount = classes(na, nb);
    ca = std::move(na);
    cb = std::move(nb);
    if (ncount == count) break;
    count = ncount;
  }
  return {ca, cb};
}

// Backtracking search for a label-preserving map from a's active states
// into b. With `bijective`, b's transitions must be covered exactly.
class MapSearch {
 public:
  MapSearch(const Transducer& a, const Transducer& b, bool bijective)
      : ta_(a), tb_(b), ga_(a), gb_(b), bijective_(bijective) {
    for (const Tile& x : b.tiles()) tiles_b_.insert(x);
    for (ColorId q = 0; q < a.h_count(); ++q)
      if (ga_.active[q]) order_.push_back(q);
    if (bijective_) {
      auto [ca, cb] = refine_colors(ga_, gb_);
      color_a_ = std::move(ca);
      color_b_ = std::move(cb);
    }
    sort_order();
    map_.assign(a.h_count(), -1);
    used_.assign(b.h_count(), 0);
  }

  std::optional<StateMap> run() {
    if (bijective_) {
      if (ta_.size() != tb_.size()) return std::nullopt;
      std::size_t active_b = 0;
      for (char c : gb_.active) active_b += c;
      if (active_b != order_.size()) return std::nullopt;
      std::vector<std::uint64_t> x, y;
      for (ColorId q = 0; q < ta_.h_count(); ++q)
        if (ga_.active[q]) x.push_back(color_a_[q]);
      for (ColorId q = 0; q < tb_.h_count(); ++q)
        if (gb_.active[q]) y.push_back(color_b_[q]);
      std::sort(x.begin(), x.end());
      std::sort(y.begin(), y.end());
      if (x != y) return std::nullopt;
    }
    if (search(0)) return map_;
    return std::nullopt;
  }

 private:
  void sort_order() {
    // Connected order: each next state is adjacent to an earlier one when
    // possible, starting from the most constrained state.
    std::vector<ColorId> remaining = order_;
    std::vector<ColorId> result;
    std::vector<char> placed(ta_.h_count(), 0);
    auto degree = [&](ColorId q) { return ga_.out[q].size() + ga_.in[q].size(); };
    while (!remaining.empty()) {
      std::size_t best = 0;
      long best_score = -1;
      for (std::size_t i = 0; i < remaining.size(); ++i) {
        ColorId q = remaining[i];
        long links = 0;
        for (auto& e : ga_.out[q]) links += placed[e.other];
        for (auto& e : ga_.in[q]) links += placed[e.other];
        long score = links * 1000 + static_cast<long>(degree(q));
        if (score > best_score) {
          best_score = score;
          best = i;
        }
      }
      ColorId q = remaining[best];
      placed[q] = 1;
      result.push_back(q);
      remaining.erase(remaining.begin() + static_cast<long>(best));
    }
    order_ = std::move(result);
  }

  bool compatible(ColorId q, ColorId image) const {
    if (bijective_) {
      if (color_a_[q] != color_b_[image]) return false;
    } else {
      if (gb_.out[image].size() < ga_.out[q].size() ||
          gb_.in[image].size() < ga_.in[q].size())
        return false;
    }
    for (auto& e : ga_.out[q]) {
      long other = e.other == q ? static_cast<long>(image) : map_[e.other];
      if (other < 0) continue;
      if (!tiles_b_.count({image, static_cast<ColorId>(other), e.s, e.n})) return false;
    }
    for (auto& e : ga_.in[q]) {
      long other = map_[e.other];
      if (other < 0 || e.other == q) continue;
      if (!tiles_b_.count({static_cast<ColorId>(other), image, e.s, e.n})) return false;
    }
    return true;
  }

  bool search(std::size_t depth) {
    if (depth == order_.size()) return true;
    ColorId q = order_[depth];
    // Candidates: neighbours of an already-mapped neighbour when one exists.
    std::vector<ColorId> candidates;
    bool anchored = false;
    for (auto& e : ga_.in[q]) {
      if (map_[e.other] < 0 || e.other == q) continue;
      for (auto& f : gb_.out[map_[e.other]])
        if (f.s == e.s && f.n == e.n) candidates.push_back(f.other);
      anchored = true;
      break;
    }
    if (!anchored) {
      for (auto& e : ga_.out[q]) {
        if (map_[e.other] < 0 || e.other == q) continue;
        for (auto& f : gb_.in[map_[e.other]])
          if (f.s == e.s && f.n == e.n) candidates.push_back(f.other);
        anchored = true;
        break;
      }
    }
    if (!anchored)
      for (ColorId r = 0; r < tb_.h_count(); ++r)
        if (gb_.active[r]) candidates.push_back(r);
    std::sort(candidates.begin(), candidates.end());
    candidates.erase(std::unique(candidates.begin(), candidates.end()), candidates.end());
    for (ColorId r : candidates) {
      if (used_[r] || !compatible(q, r)) continue;
      map_[q] = r;
      used_[r] = 1;
      if (search(depth + 1)) return true;
      map_[q] = -1;
      used_[r] = 0;
    }
    return false;
  }

  const Transducer& ta_;
  const Transducer& tb_;
  LabeledGraph ga_, gb_;
  bool bijective_;
  std::set<Tile> tiles_b_;
  std::vector<ColorId> order_;
  std::vector<std::uint64_t> color_a_, color_b_;
  StateMap map_;
  std::vector<char> used_;
};

}  // namespace

std::optional<StateMap> isomorphic(const Transducer& a, const Transducer& b) {
  if (a.v_count() != b.v_count()) return std::nullopt;
  return MapSearch(a, b, true).run();
}

std::optional<StateMap> embeds_in(const Transducer& a, const Transducer& b) {
  if (a.v_count() != b.v_count()) throw IncompatibleAlphabets();
  return MapSearch(a, b, false).run();
}

Transducer forbid_succession(const Transducer& t, std::size_t first,
                             std::size_t second, SplitSide side) {
  const auto& tiles = t.tiles();
  if (first >= tiles.size() || second >= tiles.size())
    throw WangError("transition index out of range");
  const ColorId mid = tiles[first].e;
  if (tiles[second].w != mid) throw WangError("transitions are not consecutive");
  if (tiles[first].w == mid || tiles[second].e == mid)
    throw WangError("cannot split around a self-loop");
  const auto copy = static_cast<ColorId>(t.h_count());
  std::vector<Tile> out;
  for (std::size_t i = 0; i < tiles.size(); ++i) {
    Tile x = tiles[i];
    if (side == SplitSide::incoming) {
      // The copy receives `first` and every outgoing edge but `second`.
      if (i == first) {
        x.e = copy;
      } else if (x.w == mid && i != second) {
        Tile c = x;
        c.w = copy;
        out.push_back(c);
      }
    } else {
      // The copy sends `second` and receives every incoming edge but `first`.
      if (i == second) {
        x.w = copy;
      } else if (x.e == mid && i != first) {
        Tile c = x;
        c.e = copy;
        out.push_back(c);
      }
    }
    out.push_back(x);
  }
  std::vector<std::string> names;
  if (t.has_names()) {
    names = t.names();
    names.push_back(t.names()[mid] + "'");
  }
  return Transducer::merged(t.h_count() + 1, t.v_count(), std::move(out), std::move(names));
}

}  // namespace wangforge
