#pragma once

#include <stdexcept>
#include <string>

namespace awbm {

// Base of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed input: wrong arity, unparsable data, mismatched ranks.
class InputError : public Error {
 public:
  using Error::Error;
};

class ContextError : public InputError {
 public:
  using InputError::InputError;
};

// Well-formed input that violates a stated precondition.
class PreconditionError : public Error {
 public:
  using Error::Error;
};

class ArgumentError : public PreconditionError {
 public:
  using PreconditionError::PreconditionError;
};

class RegularityError : public PreconditionError {
 public:
  using PreconditionError::PreconditionError;
};

class GenericityError : public PreconditionError {
 public:
  using PreconditionError::PreconditionError;
};

class CompatibilityError : public PreconditionError {
 public:
  using PreconditionError::PreconditionError;
};

class DepthError : public PreconditionError {
 public:
  using PreconditionError::PreconditionError;
};

class MembershipError : public PreconditionError {
 public:
  using PreconditionError::PreconditionError;
};

class IntegralityError : public PreconditionError {
 public:
  using PreconditionError::PreconditionError;
};

class ConvergenceError : public PreconditionError {
 public:
  using PreconditionError::PreconditionError;
};

class CapacityError : public PreconditionError {
 public:
  using PreconditionError::PreconditionError;
};

class OracleError : public PreconditionError {
 public:
  using PreconditionError::PreconditionError;
};

// Vanishing pivot in the monodromy solver; names the root (i, j) meaning
// e_i - e_j (0-based) and the coefficient index.
class ZeroDivisorError : public PreconditionError {
 public:
  ZeroDivisorError(int root_i, int root_j, int index, const std::string& what)
      : PreconditionError(what), root_i_(root_i), root_j_(root_j), index_(index) {}
  int root_i() const { return root_i_; }
  int root_j() const { return root_j_; }
  int index() const { return index_; }

 private:
  int root_i_;
  int root_j_;
  int index_;
};

// An internal consistency check failed.
class InvariantError : public Error {
 public:
  using Error::Error;
};

}  // namespace awbm
