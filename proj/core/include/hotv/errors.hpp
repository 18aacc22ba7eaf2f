#pragma once

#include <stdexcept>
#include <string>

namespace hotv {

/// Argument outside the mathematical domain of an operation.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Vector or image dimensions inconsistent with the operator they are fed to.
class ShapeError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Non-finite value produced inside an iterative method.
class NumericalError : public std::runtime_error {
 public:
  NumericalError(const std::string& what, int iteration)
      : std::runtime_error(what), iteration_(iteration) {}

  int iteration() const noexcept { return iteration_; }

 private:
  int iteration_;
};

}  // namespace hotv
