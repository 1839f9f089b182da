#pragma once

#include "recip/measures.hpp"
#include "recip/solver.hpp"

#include <iosfwd>
#include <span>
#include <vector>

namespace recip {

/// Column g(., y) of the discrete Green's function: K g = e_y, zero on the boundary.
struct GreenColumn {
  NodeRef source;
  Potential values;
  double residual_norm = 0.0;

  double at(const NodeRef& x) const { return values.at(x); }
};

GreenColumn green_column(const DiscreteOperator& op, const NodeRef& y, const SolveOptions& options = {});

struct SymmetryReport {
  double max_defect = 0.0;     ///< max |g(x,y) - g(y,x)|
  double max_abs_green = 0.0;  ///< max |g| over the computed columns
  double relative_defect() const { return max_abs_green > 0.0 ? max_defect / max_abs_green : max_defect; }
};

/// Computes g(x,y) and g(y,x) for every ordered pair of the given points.
SymmetryReport check_symmetry(const DiscreteOperator& op, std::span<const NodeRef> points,
                              const SolveOptions& options = {});

enum class FieldKind { diagonal, full };

struct PositivityReport {
  double min_value = 0.0;
  double threshold = 0.0;  ///< -10 * residual
  bool asserted = false;   ///< only diagonal fields carry a verdict
  bool passed = true;
};

PositivityReport check_positivity(const GreenColumn& column, FieldKind kind);

/// sum over charges of weight * g(., location).
Potential represent(const DiscreteOperator& op, const MeasureData& m, const SolveOptions& options = {});

/// Solves with psi(x) * cell volume as nodal load; psi is read at interior nodes.
Potential represent_continuous(const DiscreteOperator& op, const Potential& psi, const SolveOptions& options = {});

/// sqrt(sum over nodes of (u - v)^2 * cell volume).
double l2_distance(const Potential& u, const Potential& v);

struct SmoothingEntry {
  double width = 0.0;
  double distance = 0.0;
  double residual_norm = 0.0;
};

/// For each width: solve with mollify(field, width) and record the L2 distance to
/// the solve with the unmollified field.
std::vector<SmoothingEntry> smoothing_convergence(const ConductivityField& rough_field,
                                                  std::span<const double> widths, const MeasureData& m,
                                                  const SolveOptions& options = {});

/// True when the distances strictly decrease along the table.
bool strictly_decreasing(std::span<const SmoothingEntry> table);

void write_green_csv(std::ostream& out, const GreenColumn& column);

}  // namespace recip
