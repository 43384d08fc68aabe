#pragma once

#include <stdexcept>
#include <string>

namespace copinfo {

// Base class for all library errors.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

// A numeric argument is outside the domain of the requested quantity
// (correlation out of range, non-positive degrees of freedom, probability
// outside (0,1), ...).  The CLI maps this to exit code 4.
class DomainError : public Error {
 public:
  explicit DomainError(const std::string& what) : Error(what) {}
};

// Input data is too degenerate for the requested statistic (all values
// tied, zero variance, duplicate points under the raw KSG transform).
class DegenerateInputError : public DomainError {
 public:
  explicit DegenerateInputError(const std::string& what) : DomainError(what) {}
};

// A file could not be parsed: malformed CSV, non-numeric fields, wrong
// column counts, non-positive prices.  The CLI maps this to exit code 3.
class DataError : public Error {
 public:
  explicit DataError(const std::string& what) : Error(what) {}
};

}  // namespace copinfo
