#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "wangforge/algebra.hpp"
#include "wangforge/budget.hpp"
#include "wangforge/transducer.hpp"

namespace wangforge {

/// A rectangle of tiles. Row 0 is the bottom row; cells are indices into
/// the tile list of the transducer that produced the grid.
struct TilingGrid {
  std::size_t width = 0;
  std::size_t height = 0;
  std::vector<std::uint32_t> cells;  // row-major, height * width

  std::uint32_t at(std::size_t x, std::size_t y) const { return cells[y * width + x]; }
  std::uint32_t& at(std::size_t x, std::size_t y) { return cells[y * width + x]; }

  friend bool operator==(const TilingGrid&, const TilingGrid&) = default;
};

/// First adjacency violation of a grid, as a message; nullopt when valid.
std::optional<std::string> grid_violation(const std::vector<Tile>& tiles,
                                          const TilingGrid& grid);

/// Additionally requires the top and bottom rows to match and the left
/// and right columns to match.
std::optional<std::string> torus_violation(const std::vector<Tile>& tiles,
                                           const TilingGrid& grid);

/// t^height trimmed after every step, with provenance to decode columns.
class TracedPower {
 public:
  TracedPower(const Transducer& t, std::size_t height, const Budget& budget);

  std::size_t height() const { return levels_.size(); }
  const Transducer& top() const { return levels_.back(); }

  /// The `height` tiles (bottom to top, as indices into t) of the column
  /// represented by a transition of top().
  std::vector<std::uint32_t> decode(const Tile& column) const;

  /// Lays the given transitions of top() side by side.
  TilingGrid decode_path(const std::vector<Tile>& path) const;

 private:
  Transducer base_;
  std::vector<Transducer> levels_;
  std::vector<std::vector<std::pair<ColorId, ColorId>>> origin_;
};

struct RectangleResult {
  std::optional<TilingGrid> grid;
  /// True when the search space was exhausted without a solution.
  bool proven_impossible = false;
  /// Widest prefix reached by the column search.
  std::size_t columns_reached = 0;
};

/// Searches a width x height rectangle: first through a strip of the
/// trimmed power over the shorter side (rotating the set when that side is
/// the width), then by breadth-first search over column boundary
/// vectors (capped at budget.max_states vectors per layer, keeping the
/// lexicographically smallest).
RectangleResult tile_rectangle(const Transducer& t, std::size_t width, std::size_t height,
                               const Budget& budget = Budget{});

enum class RenderStyle { svg, text };

/// SVG draws each tile as four triangles meeting at the center, colored
/// through a fixed palette starting white, red, blue, green.
std::string render_svg(const std::vector<Tile>& tiles, const TilingGrid& grid,
                       std::size_t cell = 40);

/// One line per row (top row first), cells written "W,E,S,N".
std::string render_text(const std::vector<Tile>& tiles, const TilingGrid& grid);

std::string render(const std::vector<Tile>& tiles, const TilingGrid& grid, RenderStyle style);

/// "grid v1", "width W height H", then `height` lines of tile indices,
/// bottom row first.
std::string write_grid(const TilingGrid& grid);
TilingGrid read_grid(const std::string& text);

/// Per-row component label: tile_label[i] names the component of tile i.
/// Throws when a row mixes labels.
std::string row_type_sequence(const TilingGrid& grid, const std::string& tile_label);

}  // namespace wangforge
