#pragma once

#include <stdexcept>
#include <string>

namespace recaudit {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Input file rejected. line/column are 1-based; 0 means not applicable.
// column counts delimiter-separated fields, not characters.
struct ParseError : Error {
  ParseError(const std::string& msg, int line_ = 0, int column_ = 0)
      : Error(msg), line(line_), column(column_) {}
  int line;
  int column;
};

struct ConfigError : Error {
  using Error::Error;
};

// Training diverged or reached an invalid numeric state.
struct TrainError : Error {
  using Error::Error;
};

}  // namespace recaudit
