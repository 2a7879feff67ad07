#include "wangforge/transducer.hpp"

#include <algorithm>
#include <numeric>
#include <string>

namespace wangforge {

namespace {

void check_bounds(std::size_t h_count, std::size_t v_count,
                  const std::vector<Tile>& tiles) {
  for (const Tile& t : tiles) {
    if (t.w >= h_count || t.e >= h_count)
      throw WangError("tile horizontal color out of range (hcolors = " +
                      std::to_string(h_count) + ")");
    if (t.s >= v_count || t.n >= v_count)
      throw WangError("tile vertical color out of range (vcolors = " +
                      std::to_string(v_count) + ")");
  }
}

void check_names(std::size_t h_count, const std::vector<std::string>& names) {
  if (!names.empty() && names.size() != h_count)
    throw WangError("state name count does not match hcolors");
}

}  // namespace

Transducer::Transducer(std::size_t h_count, std::size_t v_count,
                       std::vector<Tile> tiles, std::vector<std::string> names)
    : h_count_(h_count), v_count_(v_count), tiles_(std::move(tiles)),
      names_(std::move(names)) {
  check_bounds(h_count_, v_count_, tiles_);
  check_names(h_count_, names_);
  std::sort(tiles_.begin(), tiles_.end());
  if (std::adjacent_find(tiles_.begin(), tiles_.end()) != tiles_.end())
    throw WangError("duplicate tile");
  build_offsets();
}

Transducer::Transducer(Unchecked, std::size_t h_count, std::size_t v_count,
                       std::vector<Tile> tiles, std::vector<std::string> names)
    : h_count_(h_count), v_count_(v_count), tiles_(std::move(tiles)),
      names_(std::move(names)) {
  build_offsets();
}

Transducer Transducer::merged(std::size_t h_count, std::size_t v_count,
                              std::vector<Tile> tiles,
                              std::vector<std::string> names) {
  check_bounds(h_count, v_count, tiles);
  check_names(h_count, names);
  std::sort(tiles.begin(), tiles.end());
  tiles.erase(std::unique(tiles.begin(), tiles.end()), tiles.end());
  return Transducer(Unchecked{}, h_count, v_count, std::move(tiles),
                    std::move(names));
}

void Transducer::build_offsets() {
  offsets_.assign(h_count_ + 1, 0);
  for (const Tile& t : tiles_) ++offsets_[t.w + 1];
  std::partial_sum(offsets_.begin(), offsets_.end(), offsets_.begin());
}

std::string Transducer::name(ColorId state) const {
  if (names_.empty()) return std::to_string(state);
  return names_.at(state);
}

long Transducer::find_state(const std::string& name) const {
  if (names_.empty()) {
    try {
      std::size_t pos = 0;
      unsigned long v = std::stoul(name, &pos);
      if (pos == name.size() && v < h_count_) return static_cast<long>(v);
    } catch (const std::exception&) {
    }
    return -1;
  }
  auto it = std::find(names_.begin(), names_.end(), name);
  return it == names_.end() ? -1 : static_cast<long>(it - names_.begin());
}

Transducer Transducer::with_names(std::vector<std::string> names) const {
  check_names(h_count_, names);
  Transducer copy = *this;
  copy.names_ = std::move(names);
  return copy;
}

Transducer Transducer::without_names() const {
  Transducer copy = *this;
  copy.names_.clear();
  return copy;
}

std::size_t Transducer::active_state_count() const {
  std::vector<char> used(h_count_, 0);
  for (const Tile& t : tiles_) used[t.w] = used[t.e] = 1;
  return static_cast<std::size_t>(std::count(used.begin(), used.end(), 1));
}

std::span<const Tile> Transducer::outgoing(ColorId state) const {
  return {tiles_.data() + offsets_[state], offsets_[state + 1] - offsets_[state]};
}

ReverseIndex::ReverseIndex(const Transducer& t) {
  offsets.assign(t.h_count() + 1, 0);
  for (const Tile& tile : t.tiles()) ++offsets[tile.e + 1];
  std::partial_sum(offsets.begin(), offsets.end(), offsets.begin());
  tile_ids.resize(t.size());
  std::vector<std::size_t> fill(offsets.begin(), offsets.end() - 1);
  for (std::size_t i = 0; i < t.size(); ++i)
    tile_ids[fill[t.tiles()[i].e]++] = static_cast<std::uint32_t>(i);
}

Transducer identity(std::size_t v_count) {
  std::vector<Tile> tiles;
  for (ColorId a = 0; a < v_count; ++a) tiles.push_back({0, 0, a, a});
  return Transducer(1, v_count, std::move(tiles));
}

Transducer constant_row(std::size_t v_count, ColorId letter) {
  return Transducer(1, v_count, {{0, 0, letter, letter}});
}

Transducer shift(std::size_t v_count, int amount) {
  if (amount == 0) return identity(v_count);
  // States remember the last |amount| letters read (delay) or the next
  // |amount| letters to be read (advance), encoded in base v_count.
  const std::size_t d = static_cast<std::size_t>(amount < 0 ? -amount : amount);
  std::size_t h = 1;
  for (std::size_t i = 0; i < d; ++i) h *= v_count;
  std::vector<Tile> tiles;
  for (std::size_t q = 0; q < h; ++q) {
    // q encodes a buffer b_1..b_d with b_1 the most significant digit.
    ColorId oldest = static_cast<ColorId>(q / (h / v_count));
    for (ColorId a = 0; a < v_count; ++a) {
      ColorId next = static_cast<ColorId>((q % (h / v_count)) * v_count + a);
      if (amount > 0)
        tiles.push_back({static_cast<ColorId>(q), next, a, oldest});
      else
        tiles.push_back({static_cast<ColorId>(q), next, oldest, a});
    }
  }
  return Transducer(h, v_count, std::move(tiles));
}

Transducer map_vertical(const Transducer& t, std::span<const ColorId> map,
                        std::size_t new_v_count) {
  if (map.size() != t.v_count())
    throw WangError("vertical color map has the wrong size");
  std::vector<Tile> tiles;
  tiles.reserve(t.size());
  for (Tile tile : t.tiles()) {
    tile.s = map[tile.s];
    tile.n = map[tile.n];
    tiles.push_back(tile);
  }
  return Transducer::merged(t.h_count(), new_v_count, std::move(tiles), t.names());
}

std::vector<Transducer> components(const Transducer& t) {
  std::vector<ColorId> parent(t.h_count());
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](ColorId x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  std::vector<char> used(t.h_count(), 0);
  for (const Tile& tile : t.tiles()) {
    used[tile.w] = used[tile.e] = 1;
    ColorId a = find(tile.w), b = find(tile.e);
    if (a != b) parent[std::max(a, b)] = std::min(a, b);
  }
  std::vector<long> comp_of_root(t.h_count(), -1);
  std::vector<std::vector<ColorId>> members;
  for (ColorId q = 0; q < t.h_count(); ++q) {
    if (!used[q]) continue;
    ColorId r = find(q);
    if (comp_of_root[r] < 0) {
      comp_of_root[r] = static_cast<long>(members.size());
      members.emplace_back();
    }
    members[comp_of_root[r]].push_back(q);
  }
  std::vector<ColorId> local(t.h_count(), 0);
  std::vector<std::vector<Tile>> tiles(members.size());
  for (const auto& m : members)
    for (std::size_t i = 0; i < m.size(); ++i) local[m[i]] = static_cast<ColorId>(i);
  for (const Tile& tile : t.tiles())
    tiles[comp_of_root[find(tile.w)]].push_back(
        {local[tile.w], local[tile.e], tile.s, tile.n});
  std::vector<Transducer> out;
  for (std::size_t c = 0; c < members.size(); ++c) {
    std::vector<std::string> names;
    if (t.has_names())
      for (ColorId q : members[c]) names.push_back(t.names()[q]);
    out.emplace_back(members[c].size(), t.v_count(), std::move(tiles[c]),
                     std::move(names));
  }
  return out;
}

}  // namespace wangforge
