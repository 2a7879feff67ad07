#include "wangforge/text_format.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <sstream>
#include <vector>

namespace wangforge {

namespace {

std::vector<std::string_view> split_words(std::string_view line) {
  std::vector<std::string_view> words;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && (line[i] == ' ' || line[i] == '\t')) ++i;
    std::size_t j = i;
    while (j < line.size() && line[j] != ' ' && line[j] != '\t') ++j;
    if (j > i) words.push_back(line.substr(i, j - i));
    i = j;
  }
  return words;
}

std::size_t parse_count(std::string_view word, std::size_t line) {
  std::size_t value = 0;
  auto [ptr, ec] = std::from_chars(word.data(), word.data() + word.size(), value);
  if (ec != std::errc() || ptr != word.data() + word.size())
    throw ParseError(line, "expected a non-negative integer, got '" + std::string(word) + "'");
  return value;
}

}  // namespace

std::string write_wang(const Transducer& t) {
  std::ostringstream out;
  out << "wang v1\n";
  out << "hcolors " << t.h_count() << "\n";
  out << "vcolors " << t.v_count() << "\n";
  for (const Tile& x : t.tiles())
    out << "tile " << x.w << ' ' << x.e << ' ' << x.s << ' ' << x.n << "\n";
  return out.str();
}

Transducer read_wang(const std::string& text) {
  enum class Stage { header, hcolors, vcolors, tiles } stage = Stage::header;
  std::size_t h = 0, v = 0;
  std::vector<Tile> tiles;
  std::vector<std::size_t> tile_lines;
  for_each_content_line(text, [&](std::size_t line, std::string_view content) {
    auto words = split_words(content);
    switch (stage) {
      case Stage::header:
        if (words.size() != 2 || words[0] != "wang" || words[1] != "v1")
          throw ParseError(line, "expected header 'wang v1'");
        stage = Stage::hcolors;
        return;
      case Stage::hcolors:
        if (words.size() != 2 || words[0] != "hcolors")
          throw ParseError(line, "expected 'hcolors N'");
        h = parse_count(words[1], line);
        stage = Stage::vcolors;
        return;
      case Stage::vcolors:
        if (words.size() != 2 || words[0] != "vcolors")
          throw ParseError(line, "expected 'vcolors M'");
        v = parse_count(words[1], line);
        stage = Stage::tiles;
        return;
      case Stage::tiles: {
        if (words.size() != 5 || words[0] != "tile")
          throw ParseError(line, "expected 'tile W E S N'");
        std::size_t c[4];
        for (int i = 0; i < 4; ++i) c[i] = parse_count(words[i + 1], line);
        if (c[0] >= h || c[1] >= h)
          throw ParseError(line, "horizontal color out of range");
        if (c[2] >= v || c[3] >= v)
          throw ParseError(line, "vertical color out of range");
        tiles.push_back({static_cast<ColorId>(c[0]), static_cast<ColorId>(c[1]),
                         static_cast<ColorId>(c[2]), static_cast<ColorId>(c[3])});
        tile_lines.push_back(line);
        return;
      }
    }
  });
  if (stage != Stage::tiles) throw ParseError(0, "truncated wang file");
  std::vector<std::size_t> order(tiles.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return tiles[a] < tiles[b]; });
  for (std::size_t i = 1; i < order.size(); ++i)
    if (tiles[order[i]] == tiles[order[i - 1]])
      throw ParseError(std::max(tile_lines[order[i]], tile_lines[order[i - 1]]),
                       "duplicate tile");
  return Transducer(h, v, std::move(tiles));
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw WangError("cannot open '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_file(const std::string& path, const std::string& contents) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw WangError("cannot write '" + path + "'");
  out << contents;
}

Transducer read_wang_file(const std::string& path) { return read_wang(read_file(path)); }

void write_wang_file(const Transducer& t, const std::string& path) {
  write_file(path, write_wang(t));
}

}  // namespace wangforge
