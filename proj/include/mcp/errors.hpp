#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace mcp {

// Argument outside the mathematical domain of an operation.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

class DimensionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// A search or enumeration would exceed the caller's cap.
class BudgetError : public std::runtime_error {
 public:
  BudgetError(const std::string& what, double count)
      : std::runtime_error(what), count_(count) {}
  double count() const { return count_; }

 private:
  double count_;
};

class UnrepresentableError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class DecodeError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// No grid point satisfies the program's constraint. Carries the smallest
// residual seen so the caller can relax z_n or the budget.
class InfeasibleError : public std::runtime_error {
 public:
  InfeasibleError(const std::string& what, double min_residual)
      : std::runtime_error(what), min_residual_(min_residual) {}
  double min_residual() const { return min_residual_; }

 private:
  double min_residual_;
};

class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace mcp
