#pragma once

#include <stdexcept>
#include <string>

namespace adiabloch {

// Base for failures of a numerical procedure on valid input. The CLI maps
// these to exit code 1; std::invalid_argument maps to exit code 2.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class SingularMatrixError : public NumericalError {
 public:
  SingularMatrixError(const std::string& what, double condition)
      : NumericalError(what), condition_(condition) {}
  double condition() const noexcept { return condition_; }

 private:
  double condition_;
};

class SpectraOverlapError : public NumericalError {
 public:
  SpectraOverlapError(const std::string& what, double separation)
      : NumericalError(what), separation_(separation) {}
  double separation() const noexcept { return separation_; }

 private:
  double separation_;
};

class BranchCutError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

class ClusterAmbiguityError : public NumericalError {
 public:
  ClusterAmbiguityError(const std::string& what, double gap)
      : NumericalError(what), gap_(gap) {}
  double gap() const noexcept { return gap_; }

 private:
  double gap_;
};

class ConvergenceError : public NumericalError {
 public:
  ConvergenceError(const std::string& what, double residual, int iterations)
      : NumericalError(what), residual_(residual), iterations_(iterations) {}
  double residual() const noexcept { return residual_; }
  int iterations() const noexcept { return iterations_; }

 private:
  double residual_;
  int iterations_;
};

// An iterate left the Kantorovich uniqueness ball around the initial guess.
class BranchEscapeError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

class PreconditionError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

}  // namespace adiabloch
