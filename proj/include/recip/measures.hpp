#pragma once

#include "recip/grid.hpp"

#include <Eigen/Core>

#include <vector>

namespace recip {

struct Charge {
  NodeRef location;
  double weight = 0.0;  ///< amperes
};

/// Finite signed combination of point charges on interior nodes.
class MeasureData {
public:
  explicit MeasureData(Grid grid) : grid_(std::move(grid)) {}
  MeasureData(Grid grid, std::vector<Charge> charges);

  const Grid& grid() const { return grid_; }
  const std::vector<Charge>& charges() const { return charges_; }
  bool empty() const { return charges_.empty(); }

  double total_weight() const;
  double total_variation() const;

private:
  Grid grid_;
  std::vector<Charge> charges_;
};

/// Single charge at the node nearest to `point`.
MeasureData dirac(const Grid& grid, const Point& point, double weight);
MeasureData dirac(const Grid& grid, const NodeRef& node, double weight);

/// c1*m1 + c2*m2 with co-located charges merged. Zero-weight charges are kept.
MeasureData combine(const MeasureData& m1, const MeasureData& m2, double c1, double c2);

/// Nodal load vector over interior unknowns: each charge deposits its full weight
/// on its node.
Eigen::VectorXd to_rhs(const Grid& grid, const MeasureData& m);

}  // namespace recip
