#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "wangforge/budget.hpp"

namespace wangforge {

/// Index of a color on one axis (horizontal colors are states, vertical
/// colors are the input/output alphabet).
using ColorId = std::uint32_t;

/// A Wang tile (west, east, south, north).
///
/// Read as a transition it runs from state `w` to state `e`, reading the
/// south color and writing the north color: the row above a row is its
/// image under the transducer.
struct Tile {
  ColorId w = 0;
  ColorId e = 0;
  ColorId s = 0;
  ColorId n = 0;

  friend auto operator<=>(const Tile&, const Tile&) = default;
};

/// A Wang set (H, V, T) seen as a letter-to-letter transducer without
/// initial or final states.
///
/// Tiles are kept sorted lexicographically by (w, e, s, n) and are unique,
/// so outgoing transitions of a state form a contiguous range. Optional
/// state names are carried for debugging and for matching published
/// figures; they never affect equality.
class Transducer {
 public:
  Transducer() = default;

  /// Validates bounds and rejects duplicate tiles.
  Transducer(std::size_t h_count, std::size_t v_count, std::vector<Tile> tiles,
             std::vector<std::string> names = {});

  /// Like the constructor, but silently merges duplicate tiles.
  static Transducer merged(std::size_t h_count, std::size_t v_count,
                           std::vector<Tile> tiles,
                           std::vector<std::string> names = {});

  std::size_t h_count() const noexcept { return h_count_; }
  std::size_t v_count() const noexcept { return v_count_; }
  const std::vector<Tile>& tiles() const noexcept { return tiles_; }
  std::size_t size() const noexcept { return tiles_.size(); }
  bool empty() const noexcept { return tiles_.empty(); }

  bool has_names() const noexcept { return !names_.empty(); }
  const std::vector<std::string>& names() const noexcept { return names_; }
  /// Name of a state; its decimal id when the transducer is unnamed.
  std::string name(ColorId state) const;
  /// Index of the state with this name, or -1.
  long find_state(const std::string& name) const;

  Transducer with_names(std::vector<std::string> names) const;
  Transducer without_names() const;

  /// Number of states that carry at least one transition.
  std::size_t active_state_count() const;

  /// Outgoing transitions of a state.
  std::span<const Tile> outgoing(ColorId state) const;

  friend bool operator==(const Transducer& a, const Transducer& b) {
    return a.h_count_ == b.h_count_ && a.v_count_ == b.v_count_ &&
           a.tiles_ == b.tiles_;
  }

 private:
  struct Unchecked {};
  Transducer(Unchecked, std::size_t h_count, std::size_t v_count,
             std::vector<Tile> tiles, std::vector<std::string> names);
  void build_offsets();

  std::size_t h_count_ = 0;
  std::size_t v_count_ = 0;
  std::vector<Tile> tiles_;
  std::vector<std::string> names_;
  std::vector<std::size_t> offsets_{0};
};

/// Incoming-transition index (tile ids grouped by east state).
struct ReverseIndex {
  std::vector<std::size_t> offsets;
  std::vector<std::uint32_t> tile_ids;

  explicit ReverseIndex(const Transducer& t);
  std::span<const std::uint32_t> incoming(ColorId state) const {
    return {tile_ids.data() + offsets[state], offsets[state + 1] - offsets[state]};
  }
};

/// One-state transducer with a transition a|a for every letter.
Transducer identity(std::size_t v_count);

/// One-state transducer with the single transition letter|letter; it
/// reads and writes a constant row.
Transducer constant_row(std::size_t v_count, ColorId letter);

/// Shift by `amount` positions over a `v_count` alphabet. Positive values
/// delay the output (output[i] = input[i - amount]); negative values
/// advance it.
Transducer shift(std::size_t v_count, int amount);

/// Keeps the tiles matching `keep`, leaving the state set untouched.
template <class Pred>
Transducer filter_tiles(const Transducer& t, Pred keep) {
  std::vector<Tile> kept;
  for (const Tile& tile : t.tiles())
    if (keep(tile)) kept.push_back(tile);
  return Transducer::merged(t.h_count(), t.v_count(), std::move(kept), t.names());
}

/// Renames vertical colors through `map` (size v_count); the result has
/// `new_v_count` vertical colors. Tiles that become equal are merged.
Transducer map_vertical(const Transducer& t, std::span<const ColorId> map,
                        std::size_t new_v_count);

/// Weakly connected components, each renumbered densely and keeping
/// names. Components are ordered by their smallest original state id.
std::vector<Transducer> components(const Transducer& t);

}  // namespace wangforge
