#pragma once

#include <stdexcept>
#include <string>

namespace countstat {

// Thrown when an iterative scheme fails to converge or a numerical
// precondition (bracketing, truncation mass, ...) cannot be met.
class numerical_error : public std::runtime_error {
  public:
    explicit numerical_error(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace countstat
