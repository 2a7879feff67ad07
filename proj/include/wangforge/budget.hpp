#pragma once

#include <chrono>
#include <cstddef>
#include <limits>
#include <stdexcept>
#include <string>

namespace wangforge {

/// Base class for every error raised by the library.
class WangError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Raised when two transducers do not share the same vertical alphabet.
class IncompatibleAlphabets : public WangError {
 public:
  IncompatibleAlphabets() : WangError("incompatible vertical alphabets") {}
};

/// Resource limits for iterative operations.
///
/// Exceeding a limit is reported through BudgetExceeded and never through
/// a truncated result.
struct Budget {
  std::size_t max_states = std::size_t{1} << 22;
  std::size_t max_transitions = std::size_t{1} << 24;
  std::size_t max_k = 64;
  std::chrono::milliseconds wall_time{60'000};

  static Budget unlimited() {
    Budget b;
    b.max_states = std::numeric_limits<std::size_t>::max();
    b.max_transitions = std::numeric_limits<std::size_t>::max();
    b.max_k = std::numeric_limits<std::size_t>::max();
    b.wall_time = std::chrono::milliseconds::max();
    return b;
  }
};

/// Thrown when a Budget limit is hit. `reached` records how far the
/// operation got (e.g. the last completed power k).
class BudgetExceeded : public WangError {
 public:
  BudgetExceeded(std::string what, std::size_t reached)
      : WangError(std::move(what)), reached_(reached) {}
  std::size_t reached() const noexcept { return reached_; }

 private:
  std::size_t reached_;
};

/// Wall-clock deadline derived from a Budget at construction time.
class Deadline {
 public:
  explicit Deadline(const Budget& budget)
      : start_(std::chrono::steady_clock::now()), limit_(budget.wall_time) {}

  bool expired() const {
    if (limit_ == std::chrono::milliseconds::max()) return false;
    return elapsed() > limit_;
  }

  std::chrono::milliseconds elapsed() const {
    return std::chrono::duration_cast<std::chrono::milliseconds>(
        std::chrono::steady_clock::now() - start_);
  }

 private:
  std::chrono::steady_clock::time_point start_;
  std::chrono::milliseconds limit_;
};

}  // namespace wangforge
