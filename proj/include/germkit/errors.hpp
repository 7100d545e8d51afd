#pragma once

#include <stdexcept>
#include <string>

namespace germkit {

// Domain errors carry a short machine-readable kind.
class Error : public std::runtime_error {
public:
  Error(std::string kind, const std::string &msg)
      : std::runtime_error(msg), kind_(std::move(kind)) {}
  const std::string &kind() const { return kind_; }

private:
  std::string kind_;
};

class ParseError : public Error {
public:
  ParseError(const std::string &msg, int line, int col)
      : Error("ParseError", msg + " at line " + std::to_string(line) +
                                ", column " + std::to_string(col)),
        line_(line), col_(col) {}
  int line() const { return line_; }
  int column() const { return col_; }

private:
  int line_, col_;
};

inline Error invalid(const std::string &msg) { return Error("InvalidElement", msg); }
inline Error not_fixed(const std::string &msg) { return Error("NotFixed", msg); }
inline Error internal_error(const std::string &msg) { return Error("InternalError", msg); }

} // namespace germkit
