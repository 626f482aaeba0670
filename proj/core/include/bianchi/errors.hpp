#pragma once

#include <stdexcept>
#include <string>

namespace bianchi {

/// Argument outside the mathematical domain of an operation.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// An iterative method failed to reach its tolerance.
class ConvergenceError : public std::runtime_error {
 public:
  ConvergenceError(const std::string& what, double achieved)
      : std::runtime_error(what), achieved_(achieved) {}

  /// Best accuracy reached before giving up.
  double achieved() const noexcept { return achieved_; }

 private:
  double achieved_;
};

/// Work or memory budget exceeded.
class ResourceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A lattice or quadratic form lacks the rotational symmetry asked for.
class SymmetryError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class DegenerateLatticeError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Initial data that does not satisfy the constraint it is declared against.
class ConsistencyError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class SampleSizeError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

}  // namespace bianchi
