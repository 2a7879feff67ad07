#include "wangforge/tiler.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <sstream>

#include "wangforge/text_format.hpp"

namespace wangforge {

namespace {

long find_tile(const std::vector<Tile>& tiles, const Tile& x) {
  auto it = std::lower_bound(tiles.begin(), tiles.end(), x);
  if (it == tiles.end() || *it != x) return -1;
  return it - tiles.begin();
}

}  // namespace

std::optional<std::string> grid_violation(const std::vector<Tile>& tiles,
                                          const TilingGrid& grid) {
  if (grid.cells.size() != grid.width * grid.height) return "cell count mismatch";
  for (std::size_t y = 0; y < grid.height; ++y) {
    for (std::size_t x = 0; x < grid.width; ++x) {
      std::uint32_t id = grid.at(x, y);
      if (id >= tiles.size())
        return "unknown tile at (" + std::to_string(x) + "," + std::to_string(y) + ")";
      const Tile& here = tiles[id];
      if (x + 1 < grid.width && grid.at(x + 1, y) < tiles.size() &&
          here.e != tiles[grid.at(x + 1, y)].w)
        return "east/west mismatch at (" + std::to_string(x) + "," + std::to_string(y) + ")";
      if (y + 1 < grid.height && grid.at(x, y + 1) < tiles.size() &&
          here.n != tiles[grid.at(x, y + 1)].s)
        return "north/south mismatch at (" + std::to_string(x) + "," + std::to_string(y) + ")";
    }
  }
  return std::nullopt;
}

std::optional<std::string> torus_violation(const std::vector<Tile>& tiles,
                                           const TilingGrid& grid) {
  if (auto v = grid_violation(tiles, grid)) return v;
  for (std::size_t y = 0; y < grid.height; ++y)
    if (tiles[grid.at(grid.width - 1, y)].e != tiles[grid.at(0, y)].w)
      return "horizontal wrap mismatch in row " + std::to_string(y);
  for (std::size_t x = 0; x < grid.width; ++x)
    if (tiles[grid.at(x, grid.height - 1)].n != tiles[grid.at(x, 0)].s)
      return "vertical wrap mismatch in column " + std::to_string(x);
  return std::nullopt;
}

TracedPower::TracedPower(const Transducer& t, std::size_t height, const Budget& budget)
    : base_(t.without_names()) {
  if (height == 0) throw WangError("power height must be positive");
  Deadline deadline(budget);
  auto first = trim_traced(base_);
  origin_.emplace_back();
  for (ColorId q : first.kept) origin_.back().push_back({q, 0});
  levels_.push_back(std::move(first.result));
  for (std::size_t j = 2; j <= height; ++j) {
    auto composed = compose_traced(levels_.back(), base_, budget);
    auto trimmed = trim_traced(composed.result);
    std::vector<std::pair<ColorId, ColorId>> origin;
    origin.reserve(trimmed.kept.size());
    for (ColorId q : trimmed.kept) origin.push_back(composed.origin[q]);
    levels_.push_back(std::move(trimmed.result));
    origin_.push_back(std::move(origin));
    if (levels_.back().h_count() > budget.max_states)
      throw BudgetExceeded("power exceeds the state budget", j - 1);
    if (deadline.expired()) throw BudgetExceeded("time budget exhausted", j - 1);
  }
}

std::vector<std::uint32_t> TracedPower::decode(const Tile& column) const {
  std::vector<std::uint32_t> out(levels_.size());
  Tile cur = column;
  for (std::size_t j = levels_.size(); j-- > 0;) {
    auto [wa, wb] = origin_[j][cur.w];
    auto [ea, eb] = origin_[j][cur.e];
    if (j == 0) {
      long id = find_tile(base_.tiles(), {wa, ea, cur.s, cur.n});
      if (id < 0) throw WangError("column decoding failed");
      out[0] = static_cast<std::uint32_t>(id);
      break;
    }
    bool found = false;
    for (ColorId m = 0; m < base_.v_count() && !found; ++m) {
      long top = find_tile(base_.tiles(), {wb, eb, m, cur.n});
      if (top < 0) continue;
      Tile below{wa, ea, cur.s, m};
      if (find_tile(levels_[j - 1].tiles(), below) < 0) continue;
      out[j] = static_cast<std::uint32_t>(top);
      cur = below;
      found = true;
    }
    if (!found) throw WangError("column decoding failed");
  }
  return out;
}

TilingGrid TracedPower::decode_path(const std::vector<Tile>& path) const {
  TilingGrid grid;
  grid.width = path.size();
  grid.height = levels_.size();
  grid.cells.assign(grid.width * grid.height, 0);
  for (std::size_t x = 0; x < path.size(); ++x) {
    auto column = decode(path[x]);
    for (std::size_t y = 0; y < grid.height; ++y) grid.at(x, y) = column[y];
  }
  return grid;
}

namespace {

// A strip read off any path of the trimmed power; every state of a trimmed
// transducer has a successor, so the walk never gets stuck.
std::optional<TilingGrid> strip_from_power(const Transducer& t, std::size_t width,
                                           std::size_t height, const Budget& budget) {
  TracedPower power(t, height, budget);
  const Transducer& top = power.top();
  if (top.empty()) return std::nullopt;
  std::vector<Tile> path;
  ColorId q = top.tiles().front().w;
  for (std::size_t x = 0; x < width; ++x) {
    const Tile& step = top.outgoing(q).front();
    path.push_back(step);
    q = step.e;
  }
  return power.decode_path(path);
}

// The same strip built from the quarter-turned set, so that the power is
// taken over `width` rows, then turned back.
std::optional<TilingGrid> strip_from_rotated_power(const Transducer& t, std::size_t width,
                                                   std::size_t height, const Budget& budget) {
  const Transducer r = rotate(t);
  auto turned = strip_from_power(r, height, width, budget);
  if (!turned) return std::nullopt;
  // rotate maps (w,e,s,n) to (s,n,e,w).
  std::map<Tile, std::uint32_t> index;
  for (std::uint32_t i = 0; i < t.size(); ++i) index[t.tiles()[i]] = i;
  TilingGrid grid;
  grid.width = width;
  grid.height = height;
  grid.cells.assign(width * height, 0);
  for (std::size_t x = 0; x < width; ++x)
    for (std::size_t y = 0; y < height; ++y) {
      const Tile& q = r.tiles()[turned->at(y, width - 1 - x)];
      grid.at(x, y) = index.at(Tile{q.n, q.s, q.w, q.e});
    }
  return grid;
}

// Enumerates the columns whose west boundary is `west` (or any boundary
// when `west` is empty), calling fn(tile ids, east boundary).
template <class Fn>
void for_each_column(const Transducer& t, std::size_t height,
                     const std::vector<ColorId>* west, Fn&& fn) {
  std::vector<std::uint32_t> ids(height);
  std::vector<ColorId> east(height);
  auto rec = [&](auto&& self, std::size_t row, long below_n) -> bool {
    if (row == height) return fn(ids, east);
    auto try_tile = [&](std::size_t i) -> bool {
      const Tile& x = t.tiles()[i];
      if (below_n >= 0 && x.s != static_cast<ColorId>(below_n)) return true;
      ids[row] = static_cast<std::uint32_t>(i);
      east[row] = x.e;
      return self(self, row + 1, x.n);
    };
    if (west) {
      auto out = t.outgoing((*west)[row]);
      std::size_t base = static_cast<std::size_t>(out.data() - t.tiles().data());
      for (std::size_t i = 0; i < out.size(); ++i)
        if (!try_tile(base + i)) return false;
    } else {
      for (std::size_t i = 0; i < t.size(); ++i)
        if (!try_tile(i)) return false;
    }
    return true;
  };
  rec(rec, 0, -1);
}

}  // namespace

RectangleResult tile_rectangle(const Transducer& t, std::size_t width, std::size_t height,
                               const Budget& budget) {
  if (width == 0 || height == 0) throw WangError("rectangle sides must be positive");
  RectangleResult result;
  // The power is taken over the shorter side first.
  for (bool turned : {width < height, width >= height}) {
    try {
      auto strip = turned ? strip_from_rotated_power(t, width, height, budget)
                          : strip_from_power(t, width, height, budget);
      if (strip) {
        result.grid = std::move(strip);
        result.columns_reached = width;
        return result;
      }
    } catch (const BudgetExceeded&) {
    }
  }

  // Breadth-first search over east boundaries, one layer per column.
  struct Node {
    std::vector<ColorId> east;
    std::uint32_t parent;
    std::vector<std::uint32_t> column;
  };
  std::vector<std::vector<Node>> layers;
  Deadline deadline(budget);
  bool truncated = false;
  const std::size_t cap = std::max<std::size_t>(budget.max_states, 1);
  for (std::size_t x = 0; x < width; ++x) {
    std::map<std::vector<ColorId>, Node> next;
    auto add = [&](std::uint32_t parent) {
      return [&, parent](const std::vector<std::uint32_t>& ids,
                         const std::vector<ColorId>& east) {
        if (next.count(east)) return true;
        if (next.size() >= cap) {
          // Keep the lexicographically smallest boundaries.
          truncated = true;
          auto last = std::prev(next.end());
          if (!(east < last->first)) return true;
          next.erase(last);
        }
        next.emplace(east, Node{east, parent, ids});
        return !deadline.expired();
      };
    };
    if (x == 0) {
      for_each_column(t, height, nullptr, add(0));
    } else {
      const auto& prev = layers.back();
      for (std::size_t i = 0; i < prev.size(); ++i)
        for_each_column(t, height, &prev[i].east, add(static_cast<std::uint32_t>(i)));
    }
    if (deadline.expired()) truncated = true;
    if (next.empty()) {
      result.proven_impossible = !truncated;
      return result;
    }
    std::vector<Node> layer;
    layer.reserve(next.size());
    for (auto& [key, node] : next) layer.push_back(std::move(node));
    layers.push_back(std::move(layer));
    result.columns_reached = x + 1;
    if (deadline.expired()) return result;
  }
  TilingGrid grid;
  grid.width = width;
  grid.height = height;
  grid.cells.assign(width * height, 0);
  std::uint32_t idx = 0;
  for (std::size_t x = width; x-- > 0;) {
    const Node& node = layers[x][idx];
    for (std::size_t y = 0; y < height; ++y) grid.at(x, y) = node.column[y];
    idx = node.parent;
  }
  result.grid = std::move(grid);
  return result;
}

namespace {

const char* palette(ColorId c) {
  static const char* const colors[] = {"white",  "red",    "blue",   "green",
                                       "yellow", "orange", "purple", "cyan",
                                       "gray",   "brown",  "pink",   "olive"};
  return colors[c % (sizeof(colors) / sizeof(colors[0]))];
}

}  // namespace

std::string render_svg(const std::vector<Tile>& tiles, const TilingGrid& grid,
                       std::size_t cell) {
  std::ostringstream out;
  const std::size_t W = grid.width * cell, H = grid.height * cell;
  out << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"" << W
      << "\" height=\"" << H << "\" viewBox=\"0 0 " << W << ' ' << H << "\">\n";
  const std::size_t half = cell / 2;
  for (std::size_t y = 0; y < grid.height; ++y) {
    for (std::size_t x = 0; x < grid.width; ++x) {
      const Tile& t = tiles.at(grid.at(x, y));
      // SVG y grows downward; row 0 is drawn at the bottom.
      const std::size_t x0 = x * cell, y0 = (grid.height - 1 - y) * cell;
      const std::size_t x1 = x0 + cell, y1 = y0 + cell, cx = x0 + half, cy = y0 + half;
      auto tri = [&](std::size_t ax, std::size_t ay, std::size_t bx, std::size_t by,
                     ColorId c, const char* side) {
        out << "  <polygon class=\"" << side << "\" points=\"" << ax << ',' << ay << ' '
            << bx << ',' << by << ' ' << cx << ',' << cy << "\" fill=\"" << palette(c)
            << "\" stroke=\"black\" stroke-width=\"1\"/>\n";
      };
      tri(x0, y0, x0, y1, t.w, "w");
      tri(x1, y0, x1, y1, t.e, "e");
      tri(x0, y1, x1, y1, t.s, "s");
      tri(x0, y0, x1, y0, t.n, "n");
      auto label = [&](std::size_t lx, std::size_t ly, ColorId c) {
        out << "  <text x=\"" << lx << "\" y=\"" << ly
            << "\" font-size=\"" << cell / 5 << "\" text-anchor=\"middle\" "
            << "dominant-baseline=\"middle\">" << c << "</text>\n";
      };
      label(x0 + cell / 6, cy, t.w);
      label(x1 - cell / 6, cy, t.e);
      label(cx, y1 - cell / 6, t.s);
      label(cx, y0 + cell / 6, t.n);
    }
  }
  out << "</svg>\n";
  return out.str();
}

std::string render_text(const std::vector<Tile>& tiles, const TilingGrid& grid) {
  std::ostringstream out;
  for (std::size_t y = grid.height; y-- > 0;) {
    for (std::size_t x = 0; x < grid.width; ++x) {
      const Tile& t = tiles.at(grid.at(x, y));
      std::string cell = std::to_string(t.w) + "," + std::to_string(t.e) + "," +
                         std::to_string(t.s) + "," + std::to_string(t.n);
      if (x) out << ' ';
      out << cell;
      if (x + 1 < grid.width && cell.size() < 7) out << std::string(7 - cell.size(), ' ');
    }
    out << "\n";
  }
  return out.str();
}

std::string render(const std::vector<Tile>& tiles, const TilingGrid& grid, RenderStyle style) {
  return style == RenderStyle::svg ? render_svg(tiles, grid) : render_text(tiles, grid);
}

std::string write_grid(const TilingGrid& grid) {
  std::ostringstream out;
  out << "grid v1\n";
  out << "width " << grid.width << " height " << grid.height << "\n";
  for (std::size_t y = 0; y < grid.height; ++y) {
    for (std::size_t x = 0; x < grid.width; ++x) out << (x ? " " : "") << grid.at(x, y);
    out << "\n";
  }
  return out.str();
}

TilingGrid read_grid(const std::string& text) {
  TilingGrid grid;
  int stage = 0;
  std::size_t row = 0;
  for_each_content_line(text, [&](std::size_t line, std::string_view content) {
    std::istringstream in{std::string(content)};
    if (stage == 0) {
      std::string a, b;
      in >> a >> b;
      if (a != "grid" || b != "v1") throw ParseError(line, "expected header 'grid v1'");
      stage = 1;
      return;
    }
    if (stage == 1) {
      std::string w, h;
      if (!(in >> w >> grid.width >> h >> grid.height) || w != "width" || h != "height")
        throw ParseError(line, "expected 'width W height H'");
      grid.cells.assign(grid.width * grid.height, 0);
      stage = 2;
      return;
    }
    if (row >= grid.height) throw ParseError(line, "too many rows");
    for (std::size_t x = 0; x < grid.width; ++x) {
      long v;
      if (!(in >> v) || v < 0) throw ParseError(line, "expected " + std::to_string(grid.width) + " tile indices");
      grid.at(x, row) = static_cast<std::uint32_t>(v);
    }
    std::string extra;
    if (in >> extra) throw ParseError(line, "too many tile indices");
    ++row;
  });
  if (stage < 2) throw ParseError(0, "truncated grid file");
  if (row != grid.height) throw ParseError(0, "expected " + std::to_string(grid.height) + " rows");
  return grid;
}

std::string row_type_sequence(const TilingGrid& grid, const std::string& tile_label) {
  std::string word;
  for (std::size_t y = 0; y < grid.height; ++y) {
    char label = 0;
    for (std::size_t x = 0; x < grid.width; ++x) {
      std::uint32_t id = grid.at(x, y);
      if (id >= tile_label.size()) throw WangError("tile without a component label");
      if (label && tile_label[id] != label)
        throw WangError("row " + std::to_string(y) + " mixes components");
      label = tile_label[id];
    }
    word += label;
  }
  return word;
}

}  // namespace wangforge
