#include "recip/grid.hpp"

#include "recip/detail/text.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace recip {

Grid Grid::build(int dim, std::span<const double> extents, std::span<const Index> resolution) {
  if (dim < 1 || dim > 3) throw InvalidArgument("grid dimension must be 1, 2 or 3");
  if (extents.size() != static_cast<std::size_t>(dim) ||
      resolution.size() != static_cast<std::size_t>(dim))
    throw InvalidArgument("grid needs exactly one extent and one resolution per axis");

  Grid g;
  g.dim_ = dim;
  for (int axis = 0; axis < dim; ++axis) {
    if (!(extents[axis] > 0.0) || !std::isfinite(extents[axis]))
      throw InvalidArgument("grid extents must be positive and finite");
    if (resolution[axis] < 3) throw InvalidArgument("grid resolution must be at least 3 per axis");
    g.extents_[axis] = extents[axis];
    g.resolution_[axis] = resolution[axis];
    g.spacing_[axis] = extents[axis] / static_cast<double>(resolution[axis] + 1);
  }
  return g;
}

Index Grid::interior_count() const {
  Index n = 1;
  for (int axis = 0; axis < dim_; ++axis) n *= resolution_[axis];
  return n;
}

double Grid::cell_volume() const {
  double v = 1.0;
  for (int axis = 0; axis < dim_; ++axis) v *= spacing_[axis];
  return v;
}

IndexTuple Grid::index_tuple(Index linear) const {
  IndexTuple t{0, 0, 0};
  t[0] = linear % nodes_along(0);
  linear /= nodes_along(0);
  t[1] = linear % nodes_along(1);
  t[2] = linear / nodes_along(1);
  return t;
}

Point Grid::coordinates(const IndexTuple& t) const {
  Point p = Point::Zero();
  for (int axis = 0; axis < dim_; ++axis) {
    // Exact at both ends: the last node lands on the extent itself.
    p[axis] = t[axis] == resolution_[axis] + 1 ? extents_[axis]
                                               : static_cast<double>(t[axis]) * spacing_[axis];
  }
  return p;
}

bool Grid::is_boundary(const IndexTuple& t) const {
  for (int axis = 0; axis < dim_; ++axis)
    if (t[axis] == 0 || t[axis] == resolution_[axis] + 1) return true;
  return false;
}

Index Grid::interior_index(const IndexTuple& t) const {
  if (is_boundary(t)) return -1;
  Index idx = 0;
  for (int axis = dim_ - 1; axis >= 0; --axis) idx = idx * resolution_[axis] + (t[axis] - 1);
  return idx;
}

IndexTuple Grid::interior_tuple(Index interior) const {
  IndexTuple t{0, 0, 0};
  for (int axis = 0; axis < dim_; ++axis) {
    t[axis] = interior % resolution_[axis] + 1;
    interior /= resolution_[axis];
  }
  return t;
}

IndexTuple Grid::cell_tuple(Index linear) const {
  IndexTuple c{0, 0, 0};
  c[0] = linear % cells_along(0);
  linear /= cells_along(0);
  c[1] = linear % cells_along(1);
  c[2] = linear / cells_along(1);
  return c;
}

Point Grid::cell_center(const IndexTuple& c) const {
  Point p = Point::Zero();
  for (int axis = 0; axis < dim_; ++axis)
    p[axis] = (static_cast<double>(c[axis]) + 0.5) * spacing_[axis];
  return p;
}

bool Grid::contains_strictly(const Point& p) const {
  for (int axis = 0; axis < dim_; ++axis)
    if (!(p[axis] > 0.0 && p[axis] < extents_[axis])) return false;
  return true;
}

std::string Grid::to_key_value() const {
  std::ostringstream out;
  out.precision(17);
  out << "dim = " << dim_ << "\nextents = ";
  for (int axis = 0; axis < dim_; ++axis) out << (axis ? "," : "") << extents_[axis];
  out << "\nresolution = ";
  for (int axis = 0; axis < dim_; ++axis) out << (axis ? "," : "") << resolution_[axis];
  out << "\n";
  return out.str();
}

Grid Grid::from_key_value(const std::map<std::string, std::string>& kv) {
  auto get = [&](const std::string& key) -> const std::string& {
    auto it = kv.find(key);
    if (it == kv.end()) throw InvalidArgument("grid block is missing '" + key + "'");
    return it->second;
  };
  const auto dim = detail::parse_integer(get("dim"));
  const auto extents = detail::parse_doubles(get("extents"));
  const auto counts = detail::parse_integers(get("resolution"));
  std::vector<Index> resolution(counts.begin(), counts.end());
  return build(static_cast<int>(dim), extents, resolution);
}

NodeRef node_ref(const Grid& grid, const IndexTuple& t) {
  for (int axis = 0; axis < 3; ++axis)
    if (t[axis] < 0 || t[axis] >= grid.nodes_along(axis))
      throw InvalidArgument("node index outside the grid");
  return NodeRef{t, grid.linear_index(t), grid.coordinates(t)};
}

NodeRef node_ref(const Grid& grid, Index linear) {
  if (linear < 0 || linear >= grid.node_count()) throw InvalidArgument("node index outside the grid");
  return node_ref(grid, grid.index_tuple(linear));
}

NodeRef nearest_node(const Grid& grid, const Point& point) {
  if (!grid.contains_strictly(point))
    throw InvalidArgument("point must lie strictly inside the domain");
  IndexTuple t{0, 0, 0};
  for (int axis = 0; axis < grid.dim(); ++axis) {
    const double s = point[axis] / grid.spacing(axis);
    // ceil(s - 1/2) rounds half-way cases down.
    auto i = static_cast<Index>(std::ceil(s - 0.5));
    t[axis] = std::clamp<Index>(i, 1, grid.resolution(axis));
  }
  return node_ref(grid, t);
}

Point make_point(std::span<const double> coords) {
  if (coords.empty() || coords.size() > 3) throw InvalidArgument("a point has 1 to 3 coordinates");
  Point p = Point::Zero();
  for (std::size_t i = 0; i < coords.size(); ++i) p[static_cast<Index>(i)] = coords[i];
  return p;
}

Index index_distance(const IndexTuple& a, const IndexTuple& b) {
  Index d = 0;
  for (int axis = 0; axis < 3; ++axis) d = std::max(d, std::abs(a[axis] - b[axis]));
  return d;
}

}  // namespace recip
