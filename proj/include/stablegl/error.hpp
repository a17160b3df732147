#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace stablegl {

// Base class for every error raised by the toolkit.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class DegreeOutOfRange : public Error {
 public:
  using Error::Error;
};

class ReducibleModulus : public Error {
 public:
  ReducibleModulus(const std::string& what, unsigned factor)
      : Error(what), factor_(factor) {}
  // Nontrivial factor, bit-packed (bit i = coefficient of x^i).
  unsigned factor() const { return factor_; }

 private:
  unsigned factor_;
};

class FieldMismatch : public Error {
 public:
  using Error::Error;
};

class DivisionByZero : public Error {
 public:
  using Error::Error;
};

class SingularMatrix : public Error {
 public:
  using Error::Error;
};

class SupportTooSmall : public Error {
 public:
  using Error::Error;
};

class NotOrder3 : public Error {
 public:
  using Error::Error;
};

class NotCommuting : public Error {
 public:
  using Error::Error;
};

class BudgetExceeded : public Error {
 public:
  using Error::Error;
};

class UnknownName : public Error {
 public:
  using Error::Error;
};

class UnboundParameter : public Error {
 public:
  using Error::Error;
};

class UnknownMacro : public Error {
 public:
  using Error::Error;
};

class SyntaxError : public Error {
 public:
  SyntaxError(const std::string& message, int line, int column,
              std::vector<std::string> expected)
      : Error(format(message, line, column, expected)),
        line_(line),
        column_(column),
        expected_(std::move(expected)) {}

  int line() const { return line_; }
  int column() const { return column_; }
  const std::vector<std::string>& expected() const { return expected_; }

 private:
  static std::string format(const std::string& message, int line, int column,
                            const std::vector<std::string>& expected) {
    std::string s = std::to_string(line) + ":" + std::to_string(column) +
                    ": " + message;
    if (!expected.empty()) {
      s += " (expected one of:";
      for (const auto& e : expected) s += " " + e;
      s += ")";
    }
    return s;
  }

  int line_;
  int column_;
  std::vector<std::string> expected_;
};

}  // namespace stablegl
