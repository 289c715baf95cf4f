#pragma once

#include <stdexcept>
#include <string>

namespace evoflow {

struct Error : std::runtime_error {
  explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

// Grammar file problems: syntax errors carry a 1-based line (0 = whole file).
struct GrammarError : Error {
  int line = 0;
  explicit GrammarError(const std::string& msg, int line_no = 0)
      : Error(line_no > 0 ? "line " + std::to_string(line_no) + ": " + msg : msg),
        line(line_no) {}
};

struct ConfigError : Error {
  using Error::Error;
};

struct DataError : Error {
  using Error::Error;
};

// Thrown by workflow steps when fitting/transforming fails on the given data
// (e.g. every feature dropped). Evaluation folds these into fitness 0.
struct StepFailure : Error {
  using Error::Error;
};

}  // namespace evoflow
