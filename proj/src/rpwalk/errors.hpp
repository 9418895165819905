#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace rpwalk {

// Base of every exception thrown by the core. The C API maps each subclass
// onto a distinct status code.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Operands disagree on alphabet size or truncation depth.
class DimensionError : public Error {
 public:
  using Error::Error;
};

// Argument outside the domain of a map (e.g. log of a series whose scalar
// part is not one).
class DomainError : public Error {
 public:
  using Error::Error;
};

// Index or time outside the admissible range.
class RangeError : public Error {
 public:
  using Error::Error;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

class ParseError : public Error {
 public:
  using Error::Error;
};

// Non-finite state produced while integrating.
class DivergenceError : public Error {
 public:
  DivergenceError(const std::string& what, std::size_t step)
      : Error(what + " (step " + std::to_string(step) + ")"), detail_(what), step_(step) {}
  std::size_t step() const noexcept { return step_; }
  // The message without the step suffix.
  const std::string& detail() const noexcept { return detail_; }

 private:
  std::string detail_;
  std::size_t step_;
};

// A moment needed by the T operator is absent from the oracle or exceeds its
// declared degree.
class UnresolvedMomentError : public Error {
 public:
  UnresolvedMomentError(const std::string& multi_index)
      : Error("unresolved moment E[" + multi_index + "]"), multi_index_(multi_index) {}
  const std::string& multi_index() const noexcept { return multi_index_; }

 private:
  std::string multi_index_;
};

}  // namespace rpwalk
