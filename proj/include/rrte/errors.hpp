#pragma once

#include <stdexcept>
#include <string>

namespace rrte {

// Failure of a numerical procedure (eigensolver, linear solve, quadrature).
class numeric_error : public std::runtime_error {
 public:
  explicit numeric_error(const std::string& what) : std::runtime_error(what) {}
};

// Basis/conditioning failure carrying the condition estimate.
class conditioning_error : public numeric_error {
 public:
  conditioning_error(const std::string& what, double cond)
      : numeric_error(what), condition(cond) {}
  double condition = 0.0;
};

}  // namespace rrte
