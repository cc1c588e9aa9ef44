#pragma once

#include <stdexcept>
#include <string>

namespace lsm {

/// Caller supplied an invalid argument, flag or configuration key.
class UsageError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Physical parameter outside the range the bond models are defined for.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// A stiffness set whose anisotropy factor is undefined.
class DegenerateStiffnessError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// The (reduced) stiffness matrix could not be factorized or the solve
/// did not reach the residual target.
class SingularSystemError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace lsm
