#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace cpsparse {

/* Base class of every error raised by the library. */
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/* Field shapes do not match the graph or each other. */
class ConformanceError : public Error {
 public:
  using Error::Error;
};

/* A parameter is outside its admissible range (p < 1, negative capacity, ...). */
class DomainError : public Error {
 public:
  using Error::Error;
};

/* A p-Laplacian term would raise a zero difference to a negative power. */
class SingularEdgeError : public Error {
 public:
  using Error::Error;
};

/* The requested combination is valid mathematically but not implemented. */
class CapabilityError : public Error {
 public:
  using Error::Error;
};

/* Primal-dual iterates blew up; step sizes are too large. */
class StepSizeError : public Error {
 public:
  using Error::Error;
};

/* Non-finite energy or similar breakdown during an outer iteration. */
class NumericalError : public Error {
 public:
  using Error::Error;
};

/* Exhaustive oracle refused an instance that is too large. */
class RefusalError : public Error {
 public:
  using Error::Error;
};

class IoError : public Error {
 public:
  using Error::Error;
};

class ParseError : public IoError {
 public:
  ParseError(std::size_t line, const std::string& what)
      : IoError("line " + std::to_string(line) + ": " + what), line_(line) {}
  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

}  // namespace cpsparse
