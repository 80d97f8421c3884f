#pragma once

#include <stdexcept>
#include <string>

namespace advnet {

// An API was called with arguments that violate its contract: bad parameter
// ranges, elements from mismatched fields, references to unknown ids, etc.
struct UsageError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// An input file (network, adversary sets, attack scenario) could not be
// parsed.  Carries the 1-based line number when one is known.
struct ParseError : std::runtime_error {
  ParseError(const std::string& msg, int line)
      : std::runtime_error(msg + " (line " + std::to_string(line) + ")"),
        line_no(line) {}
  explicit ParseError(const std::string& msg)
      : std::runtime_error(msg), line_no(0) {}
  int line_no;
};

// The configuration is well-formed but names a computation that cannot be
// carried out (no achievable rate, attack sets that fit no known pattern...).
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace advnet
