#ifndef SHIFTSPLIT_ERRORS_HPP
#define SHIFTSPLIT_ERRORS_HPP

#include <cstddef>
#include <stdexcept>
#include <string>

namespace shiftsplit {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Shapes or lengths do not agree.
class DimensionError : public Error {
 public:
  using Error::Error;
};

/// Malformed Matrix Market (or spectrum CSV) input.
class ParseError : public Error {
 public:
  ParseError(std::size_t line, const std::string& what)
      : Error("line " + std::to_string(line) + ": " + what), line_(line) {}

  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

/// Zero pivot encountered in a dense factorization.
class SingularMatrixError : public Error {
 public:
  using Error::Error;
};

/// An iterative dense kernel (e.g. the QR eigensolver) failed to converge.
class NumericalFailure : public Error {
 public:
  using Error::Error;
};

/// Saddle point block structure is violated.
class StructureError : public Error {
 public:
  using Error::Error;
};

/// Request exceeds the dense ("desk scale") limits or is otherwise invalid.
class ConfigError : public Error {
 public:
  using Error::Error;
};

}  // namespace shiftsplit

#endif  // SHIFTSPLIT_ERRORS_HPP
