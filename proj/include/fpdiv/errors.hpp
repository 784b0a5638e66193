#pragma once

#include <stdexcept>

namespace fpdiv {

/// Thrown for a zero divisor. The algorithms are only defined for b != 0.
class DivisionByZero : public std::domain_error {
 public:
  DivisionByZero() : std::domain_error("fpdiv: division by zero") {}
};

}  // namespace fpdiv
