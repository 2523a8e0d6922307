#pragma once

#include <stdexcept>
#include <string>

namespace skyserve {

// Input data that fails structural or semantic validation (bad file, bad field,
// user inside a building, ...).  CLI maps this to exit code 1.
class ValidationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Well-formed input with no feasible answer (user with an empty service area,
// no tour within the mission deadline, ...).  CLI maps this to exit code 2.
class InfeasibleError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace skyserve
