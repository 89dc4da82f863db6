#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace fnls {

// Argument outside the mathematical domain of an operation (s <= 0, eps
// outside its admissible range, unsupported Lebesgue exponent, ...).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// Shape or size mismatch between collaborating objects.
class StructuralError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// NaN or Inf appeared in the solution.
class NumericalBlowup : public std::runtime_error {
 public:
  NumericalBlowup(std::size_t step, const std::string& what)
      : std::runtime_error(what), step_(step) {}

  std::size_t step() const noexcept { return step_; }

 private:
  std::size_t step_;
};

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace fnls
