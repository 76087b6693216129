#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace bvdyn {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class InvalidArgument : public Error {
 public:
  using Error::Error;
};

/// Two objects live on different sequence spaces.
class SpaceMismatch : public Error {
 public:
  SpaceMismatch() : Error("space mismatch") {}
  explicit SpaceMismatch(const std::string& what) : Error("space mismatch: " + what) {}
};

/// An enumeration or search ran past its declared budget. Never silently truncated.
class BudgetExceeded : public Error {
 public:
  using Error::Error;
};

class ParseError : public Error {
 public:
  ParseError(std::size_t line, std::size_t column, const std::string& message)
      : Error(std::to_string(line) + ":" + std::to_string(column) + ": " + message),
        line_(line),
        column_(column),
        message_(message) {}

  std::size_t line() const noexcept { return line_; }
  std::size_t column() const noexcept { return column_; }
  const std::string& message() const noexcept { return message_; }

 private:
  std::size_t line_;
  std::size_t column_;
  std::string message_;
};

}  // namespace bvdyn
