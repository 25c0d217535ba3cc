#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace ttpsig {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed input file. Carries the 1-based line of the offending record.
class ParseError : public Error {
 public:
  ParseError(std::string source, std::size_t line, const std::string& what)
      : Error(source + ":" + std::to_string(line) + ": " + what),
        source_(std::move(source)),
        line_(line) {}

  const std::string& source() const noexcept { return source_; }
  std::size_t line() const noexcept { return line_; }

 private:
  std::string source_;
  std::size_t line_;
};

/// A precondition on caller-supplied data does not hold.
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

/// Lookup of an identifier (document, actor, file) that does not exist.
class NotFound : public Error {
 public:
  using Error::Error;
};

}  // namespace ttpsig
