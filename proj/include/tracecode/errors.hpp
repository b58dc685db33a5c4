#pragma once

#include <stdexcept>

namespace tracecode {

// Base type for all library-specific failures.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Field division by zero.
class DivisionByZeroError : public Error {
 public:
  using Error::Error;
};

// A cyclotomic integer was expected to collapse to a rational integer but
// still carries zeta terms.
class NotRationalError : public Error {
 public:
  using Error::Error;
};

// Checked integer arithmetic overflowed.
class OverflowError : public Error {
 public:
  using Error::Error;
};

// A brute-force path would exceed the configured operation budget.
class BudgetExceededError : public Error {
 public:
  using Error::Error;
};

// The requested (p, m) lies outside the hypotheses of a closed-form result.
class HypothesisError : public Error {
 public:
  using Error::Error;
};

}  // namespace tracecode
