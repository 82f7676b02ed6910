#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <utility>

namespace lexchoice {

// 1-based line and byte column within a source text.
struct SourcePos {
  std::size_t line = 0;
  std::size_t column = 0;

  bool known() const { return line != 0; }
  std::string str() const {
    return std::to_string(line) + ":" + std::to_string(column);
  }
  friend bool operator==(const SourcePos&, const SourcePos&) = default;
};

// Base of every error thrown by the library.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

// Malformed input text. Always carries a position.
class ParseError : public Error {
 public:
  ParseError(SourcePos pos, const std::string& message)
      : Error(pos.str() + ": " + message), pos_(pos), message_(message) {}

  SourcePos pos() const { return pos_; }
  const std::string& message() const { return message_; }

 private:
  SourcePos pos_;
  std::string message_;
};

}  // namespace lexchoice
