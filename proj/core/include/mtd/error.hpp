#pragma once

#include <stdexcept>
#include <string>

namespace mtd {

/// Raised when inputs violate an operation's preconditions or the data
/// cannot support the requested computation.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Raised when a configured resource guard (row budget, candidate budget,
/// step cap) would be exceeded.
class BudgetExceeded : public Error {
 public:
  using Error::Error;
};

}  // namespace mtd
