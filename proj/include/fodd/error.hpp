#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace fodd {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// mk_node called with a label that does not precede its children's labels.
class OrderError : public Error {
 public:
  using Error::Error;
};

/// Unbound variable or unmapped constant during evaluation.
class EvaluationError : public Error {
 public:
  using Error::Error;
};

/// A substitution target would be captured by a variable already in the diagram.
class CaptureError : public Error {
 public:
  using Error::Error;
};

/// Enumeration refused because the ground-atom count exceeds the budget.
class BudgetError : public Error {
 public:
  BudgetError(const std::string& what, std::size_t atoms, std::size_t budget)
      : Error(what), atoms_(atoms), budget_(budget) {}

  std::size_t atoms() const { return atoms_; }
  std::size_t budget() const { return budget_; }

 private:
  std::size_t atoms_;
  std::size_t budget_;
};

}  // namespace fodd
