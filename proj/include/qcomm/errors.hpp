#pragma once

#include <stdexcept>
#include <string>

namespace qcomm {

// Invalid input or configuration. CLI maps these to exit code 1.
class UserError : public std::invalid_argument {
 public:
  explicit UserError(const std::string& msg) : std::invalid_argument(msg) {}
};

// Numerical breakdown during computation. CLI maps these to exit code 2.
class NumericalError : public std::runtime_error {
 public:
  explicit NumericalError(const std::string& msg) : std::runtime_error(msg) {}
};

class NonSquareError : public UserError {
 public:
  using UserError::UserError;
};

class AsymmetryError : public UserError {
 public:
  using UserError::UserError;
};

class EigensolverError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

class NonPositiveTimeError : public UserError {
 public:
  using UserError::UserError;
};

class OverlappingCommunitiesError : public UserError {
 public:
  using UserError::UserError;
};

class EmptyCommunityError : public UserError {
 public:
  using UserError::UserError;
};

class NegativeEntriesError : public UserError {
 public:
  using UserError::UserError;
};

class DegenerateTotalWeightError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

class MismatchedNodeSetsError : public UserError {
 public:
  using UserError::UserError;
};

class InfeasibleDegreeError : public UserError {
 public:
  using UserError::UserError;
};

class NegativeSigmaError : public UserError {
 public:
  using UserError::UserError;
};

class ParseError : public UserError {
 public:
  using UserError::UserError;
};

class HermiticityError : public UserError {
 public:
  using UserError::UserError;
};

}  // namespace qcomm
