#pragma once

#include "recip/discrete_operator.hpp"

#include <Eigen/Core>

#include <cmath>
#include <limits>
#include <ostream>

namespace recip {

struct SolveOptions {
  double tol = 1e-10;          ///< relative residual target
  Index max_iterations = 0;    ///< 0 selects 20 x unknowns
  std::ostream* trace = nullptr;  ///< one JSON object per iteration when set
};

struct SolveResult {
  Potential potential;
  double residual_norm = 0.0;
  Index iterations = 0;
};

struct CgStats {
  Index iterations = 0;
  double residual = 0.0;
  bool converged = false;
};

/// Jacobi-preconditioned conjugate gradients on an SPD operator, starting from
/// x = 0. Convergence is declared on the true residual ||b - A x|| / ||b||; when
/// the recurrence drifts the residual is recomputed and iteration continues.
/// Throws InvalidOperator on non-positive curvature.
template <typename MatrixType, typename VectorType>
CgStats jacobi_cg(const MatrixType& a, const VectorType& b, VectorType& x, double tol, Index max_iterations,
                  std::ostream* trace = nullptr) {
  using Scalar = typename VectorType::Scalar;
  CgStats stats;
  x.setZero(b.size());
  const Scalar b_norm = b.norm();
  if (b_norm == Scalar(0)) {
    stats.converged = true;
    return stats;
  }

  const VectorType inv_diag = a.diagonal().cwiseInverse();
  VectorType r = b;
  VectorType z = inv_diag.cwiseProduct(r);
  VectorType p = z;
  VectorType q(b.size());
  Scalar rz = r.dot(z);
  Scalar best = Scalar(1);
  stats.residual = 1.0;

  for (Index it = 0; it < max_iterations; ++it) {
    q.noalias() = a * p;
    const Scalar curvature = p.dot(q);
    if (!(curvature > Scalar(0))) throw InvalidOperator("non-positive curvature in CG: operator is not SPD");
    const Scalar step = rz / curvature;
    x += step * p;
    r -= step * q;
    stats.iterations = it + 1;

    Scalar rel = r.norm() / b_norm;
    if (rel <= tol) {
      r = b - a * x;
      rel = r.norm() / b_norm;
    }
    best = std::min(best, rel);
    stats.residual = static_cast<double>(rel);
    if (trace) *trace << "{\"iteration\":" << stats.iterations << ",\"residual\":" << stats.residual << "}\n";
    if (rel <= tol) {
      stats.converged = true;
      return stats;
    }

    z = inv_diag.cwiseProduct(r);
    const Scalar rz_next = r.dot(z);
    p = z + (rz_next / rz) * p;
    rz = rz_next;
  }
  stats.residual = static_cast<double>(best);
  return stats;
}

/// Solves K u = rhs over interior nodes; boundary values of the result are 0.
/// Throws SolverFailure when the iteration cap is hit.
SolveResult solve_dirichlet(const DiscreteOperator& op, const Eigen::VectorXd& rhs, const SolveOptions& options = {});

}  // namespace recip
