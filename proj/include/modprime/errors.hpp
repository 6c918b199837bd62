#pragma once

#include <stdexcept>
#include <string>

namespace modprime {

// Argument outside the mathematical domain of an operation (x < 2, u outside [0,1], ...).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// Caller broke a documented precondition (degree mismatch, odd order, bad grid).
class ContractError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Argument outside the envelope where error control has been validated.
class RangeError : public std::out_of_range {
 public:
  using std::out_of_range::out_of_range;
};

// Work or memory budget exceeded.
class ResourceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Evaluation too close to a zero of J_0 for a logarithm to be meaningful.
class NearSingularError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace modprime
