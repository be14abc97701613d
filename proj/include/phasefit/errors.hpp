#pragma once

#include <stdexcept>
#include <string>

namespace phasefit {

// Thrown when a model or dataset violates a structural constraint
// (e.g. initial probabilities not summing to one).
class validation_error : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Thrown when a numerical routine cannot deliver a trustworthy result
// (singular solve, ill-conditioned eigenbasis, non-finite intermediates).
class numeric_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Thrown when an input file or text payload cannot be parsed.
class parse_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace phasefit
