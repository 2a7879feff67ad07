#pragma once

#include <cstddef>
#include <iosfwd>
#include <string>

#include "wangforge/budget.hpp"
#include "wangforge/transducer.hpp"

namespace wangforge {

/// Malformed input; `line` is 1-based (0 when not tied to a line).
class ParseError : public WangError {
 public:
  ParseError(std::size_t line, const std::string& message)
      : WangError(line ? "line " + std::to_string(line) + ": " + message : message),
        line_(line) {}
  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

/// Wang set text format:
///
///     # comment
///     wang v1
///     hcolors N
///     vcolors M
///     tile W E S N
///
/// Tiles are written sorted by (w, e, s, n). State names are not stored.
std::string write_wang(const Transducer& t);
Transducer read_wang(const std::string& text);
Transducer read_wang_file(const std::string& path);
void write_wang_file(const Transducer& t, const std::string& path);

/// Whole file contents; throws WangError when unreadable.
std::string read_file(const std::string& path);
void write_file(const std::string& path, const std::string& contents);

/// Splits `text` into lines, strips '#' comments and surrounding blanks,
/// and calls `fn(line_number, content)` for every non-empty line.
template <class Fn>
void for_each_content_line(const std::string& text, Fn fn);

}  // namespace wangforge

#include "wangforge/detail/text_lines.hpp"
