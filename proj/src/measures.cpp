#include "recip/measures.hpp"

#include <cmath>

namespace recip {

MeasureData::MeasureData(Grid grid, std::vector<Charge> charges) : grid_(std::move(grid)) {
  for (auto& c : charges) {
    if (grid_.is_boundary(c.location.index)) throw InvalidArgument("charges must sit on interior nodes");
    if (!std::isfinite(c.weight)) throw InvalidArgument("charge weight must be finite");
    bool merged = false;
    for (auto& existing : charges_)
      if (existing.location == c.location) {
        existing.weight += c.weight;
        merged = true;
        break;
      }
    if (!merged) charges_.push_back(c);
  }
}

double MeasureData::total_weight() const {
  double s = 0.0;
  for (const auto& c : charges_) s += c.weight;
  return s;
}

double MeasureData::total_variation() const {
  double s = 0.0;
  for (const auto& c : charges_) s += std::abs(c.weight);
  return s;
}

MeasureData dirac(const Grid& grid, const Point& point, double weight) {
  return dirac(grid, nearest_node(grid, point), weight);
}

MeasureData dirac(const Grid& grid, const NodeRef& node, double weight) {
  return MeasureData(grid, {Charge{node, weight}});
}

MeasureData combine(const MeasureData& m1, const MeasureData& m2, double c1, double c2) {
  if (!(m1.grid() == m2.grid())) throw InvalidArgument("measures live on different grids");
  std::vector<Charge> charges;
  for (const auto& c : m1.charges()) charges.push_back({c.location, c1 * c.weight});
  for (const auto& c : m2.charges()) charges.push_back({c.location, c2 * c.weight});
  return MeasureData(m1.grid(), std::move(charges));
}

Eigen::VectorXd to_rhs(const Grid& grid, const MeasureData& m) {
  if (!(m.grid() == grid)) throw InvalidArgument("measure belongs to a different grid");
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(grid.interior_count());
  for (const auto& c : m.charges()) rhs[grid.interior_index(c.location.index)] += c.weight;
  return rhs;
}

}  // namespace recip
