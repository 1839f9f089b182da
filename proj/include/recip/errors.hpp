#pragma once

#include <Eigen/Core>

#include <stdexcept>
#include <string>

namespace recip {

using Index = Eigen::Index;

/// Violated precondition or malformed input. The CLI maps these to exit code 2.
class InvalidArgument : public std::invalid_argument {
public:
  using std::invalid_argument::invalid_argument;
};

/// Numerical breakdown. The CLI maps these to exit code 3.
class NumericalFailure : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// The iteration cap was reached before the residual target.
class SolverFailure : public NumericalFailure {
public:
  SolverFailure(const std::string& what, double best_residual, Index iterations)
      : NumericalFailure(what), best_residual_(best_residual), iterations_(iterations) {}

  double best_residual() const { return best_residual_; }
  Index iterations() const { return iterations_; }

private:
  double best_residual_;
  Index iterations_;
};

/// Negative or zero curvature met during CG: the operator is not SPD.
class InvalidOperator : public NumericalFailure {
public:
  using NumericalFailure::NumericalFailure;
};

/// A flux coefficient too close to zero to divide by.
class DegenerateAlpha : public NumericalFailure {
public:
  using NumericalFailure::NumericalFailure;
};

}  // namespace recip
