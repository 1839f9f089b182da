#pragma once

#include "recip/errors.hpp"

#include <Eigen/Core>

#include <array>
#include <map>
#include <span>
#include <string>

namespace recip {

using IndexTuple = std::array<Index, 3>;
using Point = Eigen::Vector3d;

/// Structured rectilinear grid on the box (0, extent_0) x ... in 1, 2 or 3 dimensions.
///
/// Nodes are numbered 0..resolution+1 along each active axis, so indices 0 and
/// resolution+1 are boundary nodes. Inactive axes (axis >= dim) carry a single
/// node and a single cell at index 0. Cells sit between consecutive nodes.
class Grid {
public:
  Grid() = default;

  static Grid build(int dim, std::span<const double> extents, std::span<const Index> resolution);

  int dim() const { return dim_; }
  double extent(int axis) const { return extents_[axis]; }
  Index resolution(int axis) const { return resolution_[axis]; }
  double spacing(int axis) const { return spacing_[axis]; }

  Index nodes_along(int axis) const { return axis < dim_ ? resolution_[axis] + 2 : 1; }
  Index cells_along(int axis) const { return axis < dim_ ? resolution_[axis] + 1 : 1; }

  Index node_count() const { return nodes_along(0) * nodes_along(1) * nodes_along(2); }
  Index cell_count() const { return cells_along(0) * cells_along(1) * cells_along(2); }
  Index interior_count() const;

  /// Product of spacings over active axes.
  double cell_volume() const;

  Index linear_index(const IndexTuple& t) const {
    return t[0] + nodes_along(0) * (t[1] + nodes_along(1) * t[2]);
  }
  IndexTuple index_tuple(Index linear) const;

  Point coordinates(const IndexTuple& t) const;
  Point coordinates(Index linear) const { return coordinates(index_tuple(linear)); }

  bool is_boundary(const IndexTuple& t) const;
  bool is_boundary(Index linear) const { return is_boundary(index_tuple(linear)); }

  /// Position of an interior node in the unknown vector, or -1 for boundary nodes.
  Index interior_index(const IndexTuple& t) const;
  IndexTuple interior_tuple(Index interior) const;

  Index cell_linear_index(const IndexTuple& c) const {
    return c[0] + cells_along(0) * (c[1] + cells_along(1) * c[2]);
  }
  IndexTuple cell_tuple(Index linear) const;
  Point cell_center(const IndexTuple& c) const;

  /// Strictly inside the open box on every active axis.
  bool contains_strictly(const Point& p) const;

  /// Flat key-value block: dim, extents, resolution.
  std::string to_key_value() const;
  static Grid from_key_value(const std::map<std::string, std::string>& kv);

  friend bool operator==(const Grid&, const Grid&) = default;

private:
  int dim_ = 0;
  std::array<double, 3> extents_{0.0, 0.0, 0.0};
  std::array<Index, 3> resolution_{0, 0, 0};
  std::array<double, 3> spacing_{0.0, 0.0, 0.0};
};

struct NodeRef {
  IndexTuple index{0, 0, 0};
  Index linear = 0;
  Point coords = Point::Zero();

  friend bool operator==(const NodeRef& a, const NodeRef& b) { return a.linear == b.linear; }
};

NodeRef node_ref(const Grid& grid, const IndexTuple& t);
NodeRef node_ref(const Grid& grid, Index linear);

/// Interior node closest to `point`; ties go to the lower index on each axis.
/// Throws InvalidArgument when the point is on or outside the boundary.
NodeRef nearest_node(const Grid& grid, const Point& point);

/// Builds a Point from 1..3 coordinates; missing trailing ones are zero.
Point make_point(std::span<const double> coords);

/// Chebyshev distance between index tuples.
Index index_distance(const IndexTuple& a, const IndexTuple& b);

}  // namespace recip
