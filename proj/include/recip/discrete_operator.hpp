#pragma once

#include "recip/fields.hpp"

#include <Eigen/SparseCore>

#include <iosfwd>
#include <vector>

namespace recip {

using SparseMatrix = Eigen::SparseMatrix<double, Eigen::RowMajor>;

/// Discrete -(a_ij u_{x_i})_{x_j} with homogeneous Dirichlet data, in flux-balance
/// form: row i of `matrix()` is the net current (amperes) leaving node i.
///
/// Each cell contributes V/2^N * sum over its corners of g^T A g, where g is the
/// one-sided gradient built from the cell edges meeting at that corner. The full
/// `stencil()` couples every node, boundary included, and annihilates constants;
/// `matrix()` is its restriction to interior nodes.
class DiscreteOperator {
public:
  DiscreteOperator(Grid grid, SparseMatrix stencil, SparseMatrix matrix);

  const Grid& grid() const { return grid_; }
  const SparseMatrix& matrix() const { return matrix_; }
  const SparseMatrix& stencil() const { return stencil_; }

  /// Conductance of the stencil edge between two lattice nodes (-stencil_ij).
  double transmissivity(Index from, Index to) const;

  /// Stencil applied to a full-lattice field.
  Eigen::VectorXd apply_full(const Eigen::VectorXd& u) const { return stencil_ * u; }

  /// Load vector that imposes the given boundary values: -K_IB * u_B.
  Eigen::VectorXd boundary_lift(const Eigen::VectorXd& full_values) const;

private:
  Grid grid_;
  SparseMatrix stencil_;
  SparseMatrix matrix_;
};

DiscreteOperator assemble(const ConductivityField& field);
DiscreteOperator assemble(const Grid& grid, const ConductivityField& field);

/// Max |A_ij - A_ji| over stored entries.
double symmetry_defect(const SparseMatrix& m);

/// Coordinate triplets "row col value", one per line, interior numbering.
void write_triplets(std::ostream& out, const DiscreteOperator& op);

struct CrossingEdge {
  Index inside = 0;   // lattice node inside the box
  Index outside = 0;  // lattice node outside the box
  double transmissivity = 0.0;
};

/// Closed surface around an axis-aligned box of lattice nodes.
class FluxSurface {
public:
  FluxSurface(const DiscreteOperator& op, const IndexTuple& lo, const IndexTuple& hi);

  const Grid& grid() const { return grid_; }
  const IndexTuple& lo() const { return lo_; }
  const IndexTuple& hi() const { return hi_; }
  const std::vector<CrossingEdge>& edges() const { return edges_; }

  bool encloses(const IndexTuple& t) const;
  Index enclosed_count() const;

private:
  Grid grid_;
  IndexTuple lo_;
  IndexTuple hi_;
  std::vector<CrossingEdge> edges_;
};

/// Box of half-width `radius` nodes centred on `center`.
FluxSurface box_surface(const DiscreteOperator& op, const NodeRef& center, Index radius);

/// True when the two boxes share no node and no stencil edge joins them.
bool boxes_disjoint(const FluxSurface& a, const FluxSurface& b);

/// Net current leaving the box: sum of T * (u_inside - u_outside) over crossing
/// edges. Equals the enclosed load for any u with K u = load.
double flux_through_surface(const DiscreteOperator& op, const Potential& u, const FluxSurface& s);

/// Discrete counterpart of the conormal integral of a_ij u_{x_i} n_j over the
/// surface; the negative of flux_through_surface.
double conormal_flux(const DiscreteOperator& op, const Potential& u, const FluxSurface& s);

}  // namespace recip
