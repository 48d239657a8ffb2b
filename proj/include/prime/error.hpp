#ifndef PRIME_ERROR_HPP
#define PRIME_ERROR_HPP

#include <stdexcept>
#include <string>

namespace prime {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A malformed input file. `line` is 1-based; 0 when not line-addressable.
class ParseError : public Error {
 public:
  ParseError(const std::string& source, std::size_t line, const std::string& what)
      : Error(source + ":" + std::to_string(line) + ": " + what), line_(line) {}

  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

}  // namespace prime

#endif  // PRIME_ERROR_HPP
