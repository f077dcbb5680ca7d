#ifndef STRIKEBENCH_ERROR_H_
#define STRIKEBENCH_ERROR_H_

#include <cstddef>
#include <stdexcept>
#include <string>

namespace strikebench {

/// Base class of every error thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed input file content. Carries the 1-based line number.
class ParseError : public Error {
 public:
  ParseError(const std::string& file, std::size_t line, const std::string& what)
      : Error(file + ":" + std::to_string(line) + ": " + what), line_(line) {}

  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

/// Well-formed input that violates a data invariant (chronology, ranges).
class ValidationError : public Error {
 public:
  using Error::Error;
};

/// Invalid hyperparameters or option combinations.
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// Missing or unreadable/unwritable files.
class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace strikebench

#endif  // STRIKEBENCH_ERROR_H_
