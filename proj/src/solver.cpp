#include "recip/solver.hpp"

#include <sstream>

namespace recip {

SolveResult solve_dirichlet(const DiscreteOperator& op, const Eigen::VectorXd& rhs, const SolveOptions& options) {
  const Index n = op.grid().interior_count();
  if (rhs.size() != n) throw InvalidArgument("load vector does not match the interior node count");
  if (!(options.tol > 0.0 && options.tol < 1.0)) throw InvalidArgument("solver tolerance must lie in (0, 1)");
  if (!rhs.allFinite()) throw InvalidArgument("load vector has non-finite entries");

  const Index cap = options.max_iterations > 0 ? options.max_iterations : 20 * n;
  Eigen::VectorXd x;
  const CgStats stats = jacobi_cg(op.matrix(), rhs, x, options.tol, cap, options.trace);
  if (!stats.converged) {
    std::ostringstream msg;
    msg << "CG reached " << stats.iterations << " iterations; best relative residual " << stats.residual;
    throw SolverFailure(msg.str(), stats.residual, stats.iterations);
  }
  return SolveResult{Potential::from_interior(op.grid(), x), stats.residual, stats.iterations};
}

}  // namespace recip
