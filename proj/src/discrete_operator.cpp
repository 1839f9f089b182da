#include "recip/discrete_operator.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>

namespace recip {

DiscreteOperator::DiscreteOperator(Grid grid, SparseMatrix stencil, SparseMatrix matrix)
    : grid_(std::move(grid)), stencil_(std::move(stencil)), matrix_(std::move(matrix)) {}

double DiscreteOperator::transmissivity(Index from, Index to) const { return -stencil_.coeff(from, to); }

Eigen::VectorXd DiscreteOperator::boundary_lift(const Eigen::VectorXd& full_values) const {
  if (full_values.size() != grid_.node_count()) throw InvalidArgument("boundary data has the wrong size");
  Eigen::VectorXd boundary_only = Eigen::VectorXd::Zero(grid_.node_count());
  for (Index n = 0; n < grid_.node_count(); ++n)
    if (grid_.is_boundary(n)) boundary_only[n] = full_values[n];
  const Eigen::VectorXd coupled = stencil_ * boundary_only;
  Eigen::VectorXd rhs(grid_.interior_count());
  for (Index i = 0; i < rhs.size(); ++i) rhs[i] = -coupled[grid_.linear_index(grid_.interior_tuple(i))];
  return rhs;
}

namespace {

// Local stiffness of one cell over its 2^dim vertices (bit k of the vertex id
// selects the upper node along axis k).
Eigen::MatrixXd cell_stiffness(const Grid& grid, const Tensor& tensor) {
  const int dim = grid.dim();
  const int corners = 1 << dim;
  const Eigen::MatrixXd a = tensor.block(dim);
  Eigen::MatrixXd local = Eigen::MatrixXd::Zero(corners, corners);
  Eigen::MatrixXd gradient(dim, corners);
  const double weight = grid.cell_volume() / corners;
  for (int v = 0; v < corners; ++v) {
    gradient.setZero();
    for (int k = 0; k < dim; ++k) {
      const int lower = v & ~(1 << k);
      const int upper = v | (1 << k);
      gradient(k, upper) += 1.0 / grid.spacing(k);
      gradient(k, lower) -= 1.0 / grid.spacing(k);
    }
    local.noalias() += weight * gradient.transpose() * a * gradient;
  }
  return local;
}

}  // namespace

DiscreteOperator assemble(const Grid& grid, const ConductivityField& field) {
  if (!(field.grid() == grid)) throw InvalidArgument("conductivity field belongs to a different grid");

  const int dim = grid.dim();
  const int corners = 1 << dim;
  std::vector<Eigen::Triplet<double>> upper;
  upper.reserve(static_cast<std::size_t>(grid.cell_count() * corners * (corners + 1) / 2));

  std::vector<Index> vertex(static_cast<std::size_t>(corners));
  for (Index c = 0; c < grid.cell_count(); ++c) {
    const IndexTuple ct = grid.cell_tuple(c);
    for (int v = 0; v < corners; ++v) {
      IndexTuple nt = ct;
      for (int k = 0; k < dim; ++k) nt[k] += (v >> k) & 1;
      vertex[static_cast<std::size_t>(v)] = grid.linear_index(nt);
    }
    const Eigen::MatrixXd local = cell_stiffness(grid, field.tensor(c));
    for (int p = 0; p < corners; ++p)
      for (int q = 0; q < corners; ++q) {
        const Index i = vertex[static_cast<std::size_t>(p)];
        const Index j = vertex[static_cast<std::size_t>(q)];
        // Only the upper triangle is kept; the lower one is mirrored below.
        if (i > j) continue;
        const double value = i == j ? local(p, q) : 0.5 * (local(p, q) + local(q, p));
        if (value != 0.0) upper.emplace_back(i, j, value);
      }
  }

  SparseMatrix upper_part(grid.node_count(), grid.node_count());
  upper_part.setFromTriplets(upper.begin(), upper.end());
  SparseMatrix stencil = upper_part.selfadjointView<Eigen::Upper>();
  stencil.makeCompressed();

  std::vector<Eigen::Triplet<double>> interior;
  for (Index row = 0; row < stencil.outerSize(); ++row) {
    const Index ri = grid.interior_index(grid.index_tuple(row));
    if (ri < 0) continue;
    for (SparseMatrix::InnerIterator it(stencil, row); it; ++it) {
      const Index ci = grid.interior_index(grid.index_tuple(it.col()));
      if (ci >= 0) interior.emplace_back(ri, ci, it.value());
    }
  }
  SparseMatrix matrix(grid.interior_count(), grid.interior_count());
  matrix.setFromTriplets(interior.begin(), interior.end());
  matrix.makeCompressed();

  return DiscreteOperator(grid, std::move(stencil), std::move(matrix));
}

DiscreteOperator assemble(const ConductivityField& field) { return assemble(field.grid(), field); }

double symmetry_defect(const SparseMatrix& m) {
  double defect = 0.0;
  for (Index row = 0; row < m.outerSize(); ++row)
    for (SparseMatrix::InnerIterator it(m, row); it; ++it)
      defect = std::max(defect, std::abs(it.value() - m.coeff(it.col(), row)));
  return defect;
}

void write_triplets(std::ostream& out, const DiscreteOperator& op) {
  out.precision(17);
  const auto& m = op.matrix();
  for (Index row = 0; row < m.outerSize(); ++row)
    for (SparseMatrix::InnerIterator it(m, row); it; ++it)
      out << row << " " << it.col() << " " << it.value() << "\n";
}

FluxSurface::FluxSurface(const DiscreteOperator& op, const IndexTuple& lo, const IndexTuple& hi)
    : grid_(op.grid()), lo_(lo), hi_(hi) {
  for (int axis = 0; axis < 3; ++axis) {
    if (lo[axis] > hi[axis]) throw InvalidArgument("flux box has an empty range");
    if (axis < grid_.dim()) {
      if (lo[axis] < 1 || hi[axis] > grid_.resolution(axis))
        throw InvalidArgument("flux box must not touch the domain boundary");
    } else if (lo[axis] != 0 || hi[axis] != 0) {
      throw InvalidArgument("flux box extends along an inactive axis");
    }
  }
  const auto& stencil = op.stencil();
  for (Index k = lo[2]; k <= hi[2]; ++k)
    for (Index j = lo[1]; j <= hi[1]; ++j)
      for (Index i = lo[0]; i <= hi[0]; ++i) {
        const Index inside = grid_.linear_index({i, j, k});
        for (SparseMatrix::InnerIterator it(stencil, inside); it; ++it) {
          if (it.col() == inside || encloses(grid_.index_tuple(it.col()))) continue;
          edges_.push_back({inside, it.col(), -it.value()});
        }
      }
}

bool FluxSurface::encloses(const IndexTuple& t) const {
  for (int axis = 0; axis < 3; ++axis)
    if (t[axis] < lo_[axis] || t[axis] > hi_[axis]) return false;
  return true;
}

Index FluxSurface::enclosed_count() const {
  Index n = 1;
  for (int axis = 0; axis < 3; ++axis) n *= hi_[axis] - lo_[axis] + 1;
  return n;
}

FluxSurface box_surface(const DiscreteOperator& op, const NodeRef& center, Index radius) {
  if (radius < 0) throw InvalidArgument("box radius must be non-negative");
  IndexTuple lo = center.index;
  IndexTuple hi = center.index;
  for (int axis = 0; axis < op.grid().dim(); ++axis) {
    lo[axis] -= radius;
    hi[axis] += radius;
  }
  return FluxSurface(op, lo, hi);
}

bool boxes_disjoint(const FluxSurface& a, const FluxSurface& b) {
  // Stencil edges reach at most one node per axis, so a gap of one node keeps
  // the boxes from sharing crossing edges.
  for (int axis = 0; axis < a.grid().dim(); ++axis)
    if (a.hi()[axis] + 1 < b.lo()[axis] || b.hi()[axis] + 1 < a.lo()[axis]) return true;
  return false;
}

double flux_through_surface(const DiscreteOperator& op, const Potential& u, const FluxSurface& s) {
  if (!(u.grid == op.grid()) || !(s.grid() == op.grid()))
    throw InvalidArgument("potential, surface and operator must share a grid");
  double flux = 0.0;
  for (const auto& e : s.edges()) flux += e.transmissivity * (u.values[e.inside] - u.values[e.outside]);
  return flux;
}

double conormal_flux(const DiscreteOperator& op, const Potential& u, const FluxSurface& s) {
  return -flux_through_surface(op, u, s);
}

}  // namespace recip
