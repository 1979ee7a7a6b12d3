#pragma once

#include <stdexcept>
#include <string>

namespace qucc {

/// Input parsing failure carrying the 1-based line number of the offending line.
class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& what, long line)
      : std::runtime_error("line " + std::to_string(line) + ": " + what), line_(line) {}

  long line() const noexcept { return line_; }

 private:
  long line_;
};

/// Refusal to diagonalize a CI space larger than the configured cap.
class DimensionCapError : public std::runtime_error {
 public:
  DimensionCapError(const std::string& dimension_text, std::size_t cap)
      : std::runtime_error("CI dimension " + dimension_text + " exceeds cap " +
                           std::to_string(cap)),
        dimension_text_(dimension_text) {}

  const std::string& dimension_text() const noexcept { return dimension_text_; }

 private:
  std::string dimension_text_;
};

}  // namespace qucc
