#pragma once

#include <stdexcept>
#include <string>

namespace credal {

// Shape problems: length mismatches, bad indices, frames that do not fit.
class StructuralError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Input is well-formed but outside an operation's domain
// (incoherent interval, empty subset, bad interval handed to the SGM, ...).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

class InfeasibleError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class TotalConflictError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class SolverError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace credal
