#include "oracles.hpp"
#include "recip/grid.hpp"

#include <doctest.h>

using namespace recip;
using recip::test::grid1;
using recip::test::grid2;
using recip::test::grid3;

TEST_CASE("build_grid: uniform subdivision in 1D") {
  const Grid g = grid1(3);
  CHECK(g.dim() == 1);
  CHECK(g.spacing(0) == 0.25);
  CHECK(g.interior_count() == 3);
  CHECK(g.coordinates(IndexTuple{1, 0, 0})[0] == 0.25);
  CHECK(g.coordinates(IndexTuple{2, 0, 0})[0] == 0.5);
  CHECK(g.coordinates(IndexTuple{3, 0, 0})[0] == 0.75);
  CHECK(g.is_boundary(IndexTuple{0, 0, 0}));
  CHECK(g.is_boundary(IndexTuple{4, 0, 0}));
  CHECK(g.coordinates(IndexTuple{4, 0, 0})[0] == 1.0);
}

TEST_CASE("build_grid: interior count is the product of resolutions") {
  CHECK(grid2(31, 31).interior_count() == 961);
  CHECK(grid3(5).interior_count() == 125);
  CHECK(grid2(4, 7).interior_count() == 28);
}

TEST_CASE("build_grid: preconditions") {
  const std::array<double, 1> e{1.0};
  const std::array<Index, 1> two{2};
  CHECK_THROWS_AS(Grid::build(1, e, two), InvalidArgument);
  const std::array<double, 1> neg{-1.0};
  const std::array<Index, 1> three{3};
  CHECK_THROWS_AS(Grid::build(1, neg, three), InvalidArgument);
  const std::array<double, 4> e4{1, 1, 1, 1};
  const std::array<Index, 4> r4{3, 3, 3, 3};
  CHECK_THROWS_AS(Grid::build(4, e4, r4), InvalidArgument);
  CHECK_THROWS_AS(Grid::build(0, std::span<const double>{}, std::span<const Index>{}), InvalidArgument);
  CHECK_THROWS_AS(Grid::build(2, e, three), InvalidArgument);
}

TEST_CASE("nearest_node: nearest and tie-break low") {
  const Grid g = grid1(3);
  CHECK(nearest_node(g, recip::test::pt(0.26)).coords[0] == 0.25);
  CHECK(nearest_node(g, recip::test::pt(0.375)).coords[0] == 0.25);
  CHECK(nearest_node(g, recip::test::pt(0.376)).coords[0] == 0.5);
  CHECK(nearest_node(g, recip::test::pt(0.01)).coords[0] == 0.25);
  CHECK_THROWS_AS(nearest_node(g, recip::test::pt(0.0)), InvalidArgument);
  CHECK_THROWS_AS(nearest_node(g, recip::test::pt(1.0)), InvalidArgument);
  CHECK_THROWS_AS(nearest_node(g, recip::test::pt(-0.3)), InvalidArgument);
}

TEST_CASE("nearest_node: 2D tie-break on each axis") {
  const Grid g = grid2(3, 3);
  const NodeRef n = nearest_node(g, recip::test::pt(0.375, 0.625));
  CHECK(n.index[0] == 1);
  CHECK(n.index[1] == 2);
}

TEST_CASE("index <-> coordinates round trip over every node") {
  for (const Grid& g : {grid1(7), grid2(5, 6), grid3(4)}) {
    for (Index n = 0; n < g.node_count(); ++n) {
      const IndexTuple t = g.index_tuple(n);
      REQUIRE(g.linear_index(t) == n);
      const NodeRef ref = node_ref(g, n);
      CHECK(ref.linear == n);
      if (!g.is_boundary(t)) {
        CHECK(nearest_node(g, g.coordinates(t)) == ref);
        CHECK(g.interior_tuple(g.interior_index(t)) == t);
      } else {
        CHECK(g.interior_index(t) == -1);
      }
    }
  }
}

TEST_CASE("boundary nodes are exactly those on a face") {
  const Grid g = grid2(4, 5);
  for (Index n = 0; n < g.node_count(); ++n) {
    const Point p = g.coordinates(n);
    const bool on_face = p[0] == 0.0 || p[0] == 1.0 || p[1] == 0.0 || p[1] == 1.0;
    CHECK(g.is_boundary(n) == on_face);
    if (!on_face) CHECK(g.contains_strictly(p));
  }
}

TEST_CASE("key-value round trip") {
  const std::array<double, 2> e{2.0, 0.5};
  const std::array<Index, 2> r{9, 4};
  const Grid g = Grid::build(2, e, r);
  std::map<std::string, std::string> kv;
  std::istringstream in(g.to_key_value());
  std::string line;
  while (std::getline(in, line)) {
    const auto eq = line.find('=');
    kv[line.substr(0, eq - 1)] = line.substr(eq + 2);
  }
  CHECK(Grid::from_key_value(kv) == g);
  kv.erase("resolution");
  CHECK_THROWS_AS(Grid::from_key_value(kv), InvalidArgument);
}
