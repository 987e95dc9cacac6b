#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace treegram {

// Malformed input file (CoNLL-U row, lexicon row). Carries the 1-based line
// of the offending input.
class ParseError : public std::runtime_error {
 public:
  ParseError(std::size_t line, const std::string& reason)
      : std::runtime_error("line " + std::to_string(line) + ": " + reason),
        line_(line) {}

  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

// Invalid configuration: bad config file, unknown task/relation/attribute,
// contradictory flags. Maps to exit code 2 in the CLI.
class ConfigError : public std::runtime_error {
  using std::runtime_error::runtime_error;
};

// A pipeline stage received zero usable instances. Maps to exit code 3.
class EmptyDataError : public std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace treegram
