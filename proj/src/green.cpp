#include "recip/green.hpp"

#include <cmath>
#include <ostream>

namespace recip {

GreenColumn green_column(const DiscreteOperator& op, const NodeRef& y, const SolveOptions& options) {
  const Index row = op.grid().interior_index(y.index);
  if (row < 0) throw InvalidArgument("Green's function source must be an interior node");
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(op.grid().interior_count());
  rhs[row] = 1.0;
  SolveResult solved = solve_dirichlet(op, rhs, options);
  return GreenColumn{y, std::move(solved.potential), solved.residual_norm};
}

SymmetryReport check_symmetry(const DiscreteOperator& op, std::span<const NodeRef> points,
                              const SolveOptions& options) {
  if (points.size() < 2) throw InvalidArgument("symmetry check needs at least two points");
  for (std::size_t i = 0; i < points.size(); ++i)
    for (std::size_t j = i + 1; j < points.size(); ++j)
      if (points[i] == points[j]) throw InvalidArgument("symmetry check points must be distinct");

  std::vector<GreenColumn> columns;
  columns.reserve(points.size());
  for (const auto& p : points) columns.push_back(green_column(op, p, options));

  SymmetryReport report;
  for (const auto& c : columns) report.max_abs_green = std::max(report.max_abs_green, c.values.values.cwiseAbs().maxCoeff());
  for (std::size_t i = 0; i < points.size(); ++i)
    for (std::size_t j = 0; j < points.size(); ++j) {
      if (i == j) continue;
      // columns[j] is g(., y_j), so g(x_i, y_j) = columns[j].at(points[i]).
      const double gij = columns[j].at(points[i]);
      const double gji = columns[i].at(points[j]);
      report.max_defect = std::max(report.max_defect, std::abs(gij - gji));
    }
  return report;
}

PositivityReport check_positivity(const GreenColumn& column, FieldKind kind) {
  PositivityReport report;
  report.min_value = column.values.values.minCoeff();
  report.threshold = -10.0 * column.residual_norm;
  report.asserted = kind == FieldKind::diagonal;
  report.passed = !report.asserted || report.min_value >= report.threshold;
  return report;
}

Potential represent(const DiscreteOperator& op, const MeasureData& m, const SolveOptions& options) {
  if (!(m.grid() == op.grid())) throw InvalidArgument("measure belongs to a different grid");
  Potential sum = Potential::zero(op.grid());
  for (const auto& c : m.charges()) {
    if (c.weight == 0.0) continue;
    sum.values += c.weight * green_column(op, c.location, options).values.values;
  }
  return sum;
}

Potential represent_continuous(const DiscreteOperator& op, const Potential& psi, const SolveOptions& options) {
  if (!(psi.grid == op.grid())) throw InvalidArgument("density belongs to a different grid");
  if (!psi.values.allFinite()) throw InvalidArgument("density must be finite");
  const Eigen::VectorXd load = psi.interior() * op.grid().cell_volume();
  return solve_dirichlet(op, load, options).potential;
}

double l2_distance(const Potential& u, const Potential& v) {
  if (!(u.grid == v.grid)) throw InvalidArgument("potentials live on different grids");
  return std::sqrt((u.values - v.values).squaredNorm() * u.grid.cell_volume());
}

std::vector<SmoothingEntry> smoothing_convergence(const ConductivityField& rough_field,
                                                  std::span<const double> widths, const MeasureData& m,
                                                  const SolveOptions& options) {
  std::vector<SmoothingEntry> table;
  if (widths.empty()) return table;
  for (std::size_t i = 0; i < widths.size(); ++i) {
    if (widths[i] < 0.0) throw InvalidArgument("mollifier widths must be non-negative");
    if (i > 0 && widths[i] > widths[i - 1]) throw InvalidArgument("mollifier widths must be descending");
  }
  if (!validate_tensor(rough_field).passed) throw InvalidArgument("rough field fails the ellipticity check");

  const Grid& grid = rough_field.grid();
  const Eigen::VectorXd rhs = to_rhs(grid, m);
  const SolveResult reference = solve_dirichlet(assemble(rough_field), rhs, options);
  for (double w : widths) {
    const SolveResult smoothed = solve_dirichlet(assemble(mollify(rough_field, w)), rhs, options);
    table.push_back({w, l2_distance(smoothed.potential, reference.potential), smoothed.residual_norm});
  }
  return table;
}

bool strictly_decreasing(std::span<const SmoothingEntry> table) {
  for (std::size_t i = 1; i < table.size(); ++i)
    if (!(table[i].distance < table[i - 1].distance)) return false;
  return true;
}

void write_green_csv(std::ostream& out, const GreenColumn& column) { write_potential_csv(out, column.values); }

}  // namespace recip
