#include "oracles.hpp"
#include "recip/measures.hpp"

#include <doctest.h>

using namespace recip;
using recip::test::grid1;
using recip::test::grid2;
using recip::test::pt;

TEST_CASE("dirac snaps to the nearest node") {
  const Grid g = grid2(9, 9);
  const auto m = dirac(g, pt(0.3, 0.52), 1.0);
  REQUIRE(m.charges().size() == 1);
  CHECK(m.charges()[0].location.index == IndexTuple{3, 5, 0});
  CHECK(m.charges()[0].weight == 1.0);
}

TEST_CASE("zero-weight dirac is kept and loads nothing") {
  const Grid g = grid1(9);
  const auto m = dirac(g, pt(0.5), 0.0);
  CHECK(m.charges().size() == 1);
  CHECK(to_rhs(g, m).isZero(0.0));
}

TEST_CASE("dirac outside or on the boundary is rejected") {
  const Grid g = grid1(9);
  CHECK_THROWS_AS(dirac(g, pt(0.0), 1.0), InvalidArgument);
  CHECK_THROWS_AS(dirac(g, pt(1.2), 1.0), InvalidArgument);
  CHECK_THROWS_AS(dirac(g, pt(0.5), std::nan("")), InvalidArgument);
}

TEST_CASE("combine merges co-located charges") {
  const Grid g = grid1(9);
  const auto da = dirac(g, pt(0.3), 1.0);
  const auto cancel = combine(da, da, 1.0, -1.0);
  REQUIRE(cancel.charges().size() == 1);
  CHECK(cancel.charges()[0].weight == 0.0);

  const auto db = dirac(g, pt(0.7), 1.0);
  const auto zero = combine(da, db, 0.0, 0.0);
  CHECK(zero.total_variation() == 0.0);
  CHECK(to_rhs(g, zero).isZero(0.0));
}

TEST_CASE("combine rejects measures on different grids") {
  CHECK_THROWS_AS(combine(dirac(grid1(9), pt(0.5), 1.0), dirac(grid1(11), pt(0.5), 1.0), 1.0, 1.0),
                  InvalidArgument);
}

TEST_CASE("to_rhs: +I at a and -I at b") {
  const Grid g = grid1(9);
  const double current = 2.5;
  const auto m = combine(dirac(g, pt(0.25), 1.0), dirac(g, pt(0.75), 1.0), current, -current);
  const Eigen::VectorXd rhs = to_rhs(g, m);
  Eigen::VectorXd expected = Eigen::VectorXd::Zero(9);
  const Index ia = g.interior_index(nearest_node(g, pt(0.25)).index);
  const Index ib = g.interior_index(nearest_node(g, pt(0.75)).index);
  expected[ia] = current;
  expected[ib] = -current;
  CHECK(rhs == expected);
  CHECK(m.total_weight() == 0.0);
  CHECK(m.total_variation() == 2 * current);
}

TEST_CASE("empty measure gives a zero load") {
  const Grid g = grid2(5, 5);
  const MeasureData m(g);
  CHECK(m.empty());
  CHECK(to_rhs(g, m).isZero(0.0));
}

TEST_CASE("to_rhs is linear and preserves total weight") {
  const Grid g = grid2(11, 7);
  const MeasureData m1(g, {Charge{nearest_node(g, pt(0.2, 0.3)), 0.5}, Charge{nearest_node(g, pt(0.6, 0.6)), -1.25}});
  const MeasureData m2(g, {Charge{nearest_node(g, pt(0.2, 0.3)), 2.0}, Charge{nearest_node(g, pt(0.8, 0.1)), 0.75}});
  const double c1 = 3.0, c2 = -0.5;
  const Eigen::VectorXd lhs = to_rhs(g, combine(m1, m2, c1, c2));
  const Eigen::VectorXd rhs = c1 * to_rhs(g, m1) + c2 * to_rhs(g, m2);
  CHECK(lhs == rhs);
  CHECK(to_rhs(g, m1).sum() == m1.total_weight());
}

TEST_CASE("charges on boundary nodes are rejected") {
  const Grid g = grid1(5);
  CHECK_THROWS_AS(MeasureData(g, {Charge{node_ref(g, IndexTuple{0, 0, 0}), 1.0}}), InvalidArgument);
}
