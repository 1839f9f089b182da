#include "recip/fields.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>
#include <limits>
#include <ostream>

namespace recip {

ConductivityField::ConductivityField(Grid grid, std::vector<Tensor> tensors, double lambda)
    : grid_(std::move(grid)), tensors_(std::move(tensors)), lambda_(lambda) {
  if (static_cast<Index>(tensors_.size()) != grid_.cell_count())
    throw InvalidArgument("conductivity field needs one tensor per cell");
  if (!(lambda_ > 0.0) || !std::isfinite(lambda_))
    throw InvalidArgument("ellipticity constant must be positive");
}

bool ConductivityField::is_diagonal() const {
  for (const auto& t : tensors_)
    if (!t.is_diagonal(grid_.dim())) return false;
  return true;
}

ConductivityField ConductivityField::scaled(double factor) const {
  if (!(factor > 0.0)) throw InvalidArgument("scale factor must be positive");
  auto tensors = tensors_;
  for (auto& t : tensors)
    for (auto& v : t.upper()) v *= factor;
  return ConductivityField(grid_, std::move(tensors), lambda_ * factor);
}

ConductivityField make_scalar_field(const Grid& grid, std::span<const double> sigma) {
  if (static_cast<Index>(sigma.size()) != grid.cell_count())
    throw InvalidArgument("scalar conductivity needs one value per cell");
  std::vector<Tensor> tensors;
  tensors.reserve(sigma.size());
  double lambda = std::numeric_limits<double>::infinity();
  for (double s : sigma) {
    if (!(s > 0.0) || !std::isfinite(s)) throw InvalidArgument("scalar conductivity must be positive");
    tensors.push_back(Tensor::identity(s));
    lambda = std::min(lambda, s);
  }
  return ConductivityField(grid, std::move(tensors), lambda);
}

ConductivityField make_scalar_field(const Grid& grid, const std::function<double(const Point&)>& sigma) {
  std::vector<double> values(static_cast<std::size_t>(grid.cell_count()));
  for (Index c = 0; c < grid.cell_count(); ++c)
    values[static_cast<std::size_t>(c)] = sigma(grid.cell_center(grid.cell_tuple(c)));
  return make_scalar_field(grid, values);
}

ConductivityField make_uniform_field(const Grid& grid, const Tensor& tensor, double lambda) {
  return ConductivityField(grid, std::vector<Tensor>(static_cast<std::size_t>(grid.cell_count()), tensor),
                           lambda);
}

double min_eigenvalue(const Tensor& t, int dim) {
  if (dim == 1) return t(0, 0);
  if (dim == 2) {
    // Closed form keeps the 2x2 case exact enough for the slack below.
    const double mean = 0.5 * (t(0, 0) + t(1, 1));
    const double half_diff = 0.5 * (t(0, 0) - t(1, 1));
    return mean - std::hypot(half_diff, t(0, 1));
  }
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d> solver(t.block(3).eval(), Eigen::EigenvaluesOnly);
  return solver.eigenvalues()[0];
}

ValidationReport validate_tensor(const ConductivityField& field) {
  ValidationReport report;
  const int dim = field.grid().dim();
  report.min_eigenvalue = std::numeric_limits<double>::infinity();
  report.cell_min_eigenvalues.reserve(field.tensors().size());
  const double threshold = field.lambda() * (1.0 - kEigenvalueSlack);
  for (const auto& t : field.tensors()) {
    bool cell_finite = true;
    for (double v : t.upper()) cell_finite = cell_finite && std::isfinite(v);
    report.finite = report.finite && cell_finite;
    const double ev = cell_finite ? min_eigenvalue(t, dim) : std::numeric_limits<double>::quiet_NaN();
    report.cell_min_eigenvalues.push_back(ev);
    if (!cell_finite || !(ev >= threshold)) ++report.failing_cells;
    if (cell_finite) report.min_eigenvalue = std::min(report.min_eigenvalue, ev);
  }
  report.passed = report.symmetric && report.finite && report.failing_cells == 0;
  return report;
}

namespace {

std::vector<double> hat_weights(double width, double h) {
  const double support = width + h;
  const auto reach = static_cast<Index>(std::floor(support / h));
  std::vector<double> w;
  for (Index m = -reach; m <= reach; ++m) {
    const double v = 1.0 - std::abs(static_cast<double>(m)) * h / support;
    w.push_back(v > 0.0 ? v : 0.0);
  }
  return w;
}

}  // namespace

ConductivityField mollify(const ConductivityField& field, double width) {
  if (!(width >= 0.0) || !std::isfinite(width)) throw InvalidArgument("mollifier width must be non-negative");
  if (width == 0.0) return field;

  const Grid& grid = field.grid();
  std::vector<Tensor> current = field.tensors();
  for (int axis = 0; axis < grid.dim(); ++axis) {
    const auto weights = hat_weights(width, grid.spacing(axis));
    const auto reach = static_cast<Index>(weights.size() / 2);
    std::vector<Tensor> next(current.size());
    for (Index c = 0; c < grid.cell_count(); ++c) {
      const IndexTuple ct = grid.cell_tuple(c);
      std::array<double, 6> acc{};
      double total = 0.0;
      for (Index m = -reach; m <= reach; ++m) {
        IndexTuple nt = ct;
        nt[axis] += m;
        if (nt[axis] < 0 || nt[axis] >= grid.cells_along(axis)) continue;
        const double w = weights[static_cast<std::size_t>(m + reach)];
        if (w == 0.0) continue;
        const auto& src = current[static_cast<std::size_t>(grid.cell_linear_index(nt))].upper();
        for (int k = 0; k < 6; ++k) acc[k] += w * src[k];
        total += w;
      }
      auto& dst = next[static_cast<std::size_t>(c)].upper();
      for (int k = 0; k < 6; ++k) dst[k] = acc[k] / total;
    }
    current = std::move(next);
  }
  return ConductivityField(grid, std::move(current), field.lambda());
}

Potential Potential::from_interior(const Grid& g, const Eigen::VectorXd& interior) {
  if (interior.size() != g.interior_count()) throw InvalidArgument("interior vector has the wrong size");
  Potential u = zero(g);
  for (Index i = 0; i < interior.size(); ++i) u.values[g.linear_index(g.interior_tuple(i))] = interior[i];
  return u;
}

Eigen::VectorXd Potential::interior() const {
  Eigen::VectorXd v(grid.interior_count());
  for (Index i = 0; i < v.size(); ++i) v[i] = values[grid.linear_index(grid.interior_tuple(i))];
  return v;
}

void write_potential_csv(std::ostream& out, const Potential& u) {
  static constexpr const char* names[3] = {"x", "y", "z"};
  for (int axis = 0; axis < u.grid.dim(); ++axis) out << names[axis] << ",";
  out << "value\n";
  out.precision(17);
  for (Index n = 0; n < u.grid.node_count(); ++n) {
    const Point p = u.grid.coordinates(n);
    for (int axis = 0; axis < u.grid.dim(); ++axis) out << p[axis] << ",";
    out << u.values[n] << "\n";
  }
}

void write_field_csv(std::ostream& out, const ConductivityField& field) {
  static constexpr const char* cell_names[3] = {"i", "j", "k"};
  const int dim = field.grid().dim();
  for (int axis = 0; axis < dim; ++axis) out << cell_names[axis] << ",";
  bool first = true;
  for (int i = 0; i < dim; ++i)
    for (int j = i; j < dim; ++j) {
      out << (first ? "" : ",") << "a_" << i + 1 << j + 1;
      first = false;
    }
  out << "\n";
  out.precision(17);
  for (Index c = 0; c < field.grid().cell_count(); ++c) {
    const IndexTuple ct = field.grid().cell_tuple(c);
    for (int axis = 0; axis < dim; ++axis) out << ct[axis] << ",";
    const Tensor& t = field.tensor(c);
    first = true;
    for (int i = 0; i < dim; ++i)
      for (int j = i; j < dim; ++j) {
        out << (first ? "" : ",") << t(i, j);
        first = false;
      }
    out << "\n";
  }
}

}  // namespace recip
