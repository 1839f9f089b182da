#include "oracles.hpp"
#include "recip/discrete_operator.hpp"
#include "recip/scenarios.hpp"
#include "recip/solver.hpp"

#include <Eigen/Eigenvalues>
#include <doctest.h>

#include <sstream>

using namespace recip;
using recip::test::grid1;
using recip::test::grid2;
using recip::test::grid3;

namespace {

Tensor tensor2(double a11, double a12, double a22) {
  Tensor t;
  t.set(0, 0, a11);
  t.set(0, 1, a12);
  t.set(1, 1, a22);
  return t;
}

}  // namespace

TEST_CASE("assemble: 1D unit conductivity row pattern") {
  const Grid g = grid1(3);
  const auto op = assemble(make_uniform_field(g, Tensor::identity(1.0), 1.0));
  const Eigen::MatrixXd m(op.matrix());
  Eigen::MatrixXd expected(3, 3);
  expected << 8, -4, 0, -4, 8, -4, 0, -4, 8;
  CHECK(m == expected);
}

TEST_CASE("assemble: 1D variable conductivity matches hand assembly") {
  const Grid g = grid1(6);
  const std::vector<double> sigma{1.0, 2.0, 0.5, 3.0, 1.5, 4.0, 2.5};
  const auto op = assemble(make_scalar_field(g, sigma));
  const double h = g.spacing(0);
  const Eigen::MatrixXd m(op.matrix());
  for (Index i = 0; i < 6; ++i) {
    CHECK(m(i, i) == doctest::Approx((sigma[i] + sigma[i + 1]) / h).epsilon(1e-14));
    if (i + 1 < 6) CHECK(m(i, i + 1) == doctest::Approx(-sigma[i + 1] / h).epsilon(1e-14));
  }
}

TEST_CASE("assemble: 2D identity tensors give the 5-point stencil") {
  const Grid g = grid2(5, 5);
  const auto op = assemble(make_uniform_field(g, Tensor::identity(1.0), 1.0));
  const Index center = g.interior_index({3, 3, 0});
  int neighbours = 0;
  for (SparseMatrix::InnerIterator it(op.matrix(), center); it; ++it) {
    if (it.col() == center) {
      CHECK(it.value() == doctest::Approx(4.0).epsilon(1e-15));
    } else {
      CHECK(it.value() == doctest::Approx(-1.0).epsilon(1e-15));
      ++neighbours;
    }
  }
  CHECK(neighbours == 4);
}

TEST_CASE("assemble: full tensors add corner couplings") {
  const Grid g = grid2(5, 5);
  const auto op = assemble(make_uniform_field(g, tensor2(2.0, 0.5, 1.0), 0.5));
  const Index center = g.interior_index({3, 3, 0});
  CHECK(op.matrix().row(center).nonZeros() == 9);
}

TEST_CASE("assemble: exact symmetry for random fields") {
  for (std::uint64_t seed = 0; seed < 4; ++seed) {
    CHECK(symmetry_defect(assemble(random_spd_field(grid2(9, 7), 0.3, 10.0, seed)).matrix()) == 0.0);
    CHECK(symmetry_defect(assemble(random_spd_field(grid3(4), 0.3, 10.0, seed)).stencil()) == 0.0);
  }
}

TEST_CASE("assemble: positive definite for validated random fields") {
  for (std::uint64_t seed = 0; seed < 3; ++seed) {
    for (const Grid& g : {grid2(6, 6), grid3(3)}) {
      const auto field = random_spd_field(g, 1.0, 50.0, seed);
      REQUIRE(validate_tensor(field).passed);
      const Eigen::MatrixXd dense(assemble(field).matrix());
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(dense, Eigen::EigenvaluesOnly);
      CHECK(es.eigenvalues()[0] > 0.0);
    }
  }
}

TEST_CASE("assemble: diagonal fields give an M-matrix") {
  const Grid g = grid2(7, 6);
  const auto field = make_scalar_field(g, [](const Point& p) { return p[0] < 0.5 ? 1.0 : 100.0; });
  const auto op = assemble(field);
  const auto& m = op.matrix();
  for (Index row = 0; row < m.outerSize(); ++row) {
    double diag = 0.0, off = 0.0;
    for (SparseMatrix::InnerIterator it(m, row); it; ++it) {
      if (it.col() == row) {
        diag = it.value();
      } else {
        CHECK(it.value() <= 0.0);
        off += -it.value();
      }
    }
    CHECK(diag >= off * (1.0 - 1e-14));
  }
}

TEST_CASE("stencil annihilates constants and interior row sums equal boundary transmissivities") {
  const Grid g = grid2(6, 5);
  const auto op = assemble(random_spd_field(g, 1.0, 10.0, 3));
  const Eigen::VectorXd ones = Eigen::VectorXd::Ones(g.node_count());
  CHECK(op.apply_full(ones).cwiseAbs().maxCoeff() < 1e-12);

  for (Index i = 0; i < g.interior_count(); ++i) {
    const Index node = g.linear_index(g.interior_tuple(i));
    double boundary_t = 0.0;
    for (SparseMatrix::InnerIterator it(op.stencil(), node); it; ++it)
      if (g.is_boundary(it.col())) boundary_t += op.transmissivity(node, it.col());
    CHECK(op.matrix().row(i).sum() == doctest::Approx(boundary_t).epsilon(1e-12).scale(10.0));
  }
}

TEST_CASE("stencil is exact on linear potentials for any uniform tensor") {
  const Grid g = grid3(4);
  Tensor t;
  t.set(0, 0, 3.0);
  t.set(1, 1, 2.0);
  t.set(2, 2, 1.5);
  t.set(0, 1, 0.7);
  t.set(1, 2, -0.4);
  t.set(0, 2, 0.2);
  const auto op = assemble(make_uniform_field(g, t, 0.5));
  Eigen::VectorXd u(g.node_count());
  for (Index n = 0; n < g.node_count(); ++n) u[n] = Point(1.0, -2.0, 0.5).dot(g.coordinates(n)) + 3.0;
  const Eigen::VectorXd ku = op.apply_full(u);
  for (Index n = 0; n < g.node_count(); ++n)
    if (!g.is_boundary(n)) CHECK(std::abs(ku[n]) < 1e-12);
}

TEST_CASE("assemble: grid mismatch") {
  const auto f = make_uniform_field(grid2(4, 4), Tensor::identity(1.0), 1.0);
  CHECK_THROWS_AS(assemble(grid2(5, 4), f), InvalidArgument);
}

TEST_CASE("flux_through_surface: zero potential, enclosing and non-enclosing boxes") {
  const Grid g = grid2(15, 15);
  const auto op = assemble(random_spd_field(g, 1.0, 10.0, 11));
  const NodeRef source = node_ref(g, IndexTuple{5, 6, 0});
  const FluxSurface around = box_surface(op, source, 2);
  const FluxSurface elsewhere = box_surface(op, node_ref(g, IndexTuple{11, 11, 0}), 2);

  CHECK(flux_through_surface(op, Potential::zero(g), around) == 0.0);

  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(g.interior_count());
  rhs[g.interior_index(source.index)] = 1.0;
  SolveOptions opt;
  opt.tol = 1e-12;
  const SolveResult u = solve_dirichlet(op, rhs, opt);
  CHECK(flux_through_surface(op, u.potential, around) == doctest::Approx(1.0).epsilon(1e-10));
  CHECK(std::abs(flux_through_surface(op, u.potential, elsewhere)) < 1e-10);
  CHECK(conormal_flux(op, u.potential, around) == -flux_through_surface(op, u.potential, around));

  // Same value from the direct edge sum over the box's enclosed loads.
  const Eigen::VectorXd ku = op.apply_full(u.potential.values);
  double enclosed = 0.0;
  for (Index n = 0; n < g.node_count(); ++n)
    if (around.encloses(g.index_tuple(n))) enclosed += ku[n];
  CHECK(flux_through_surface(op, u.potential, around) == doctest::Approx(enclosed).epsilon(1e-13));
}

TEST_CASE("flux surface: every stencil edge crosses at most once") {
  const Grid g = grid2(9, 9);
  const auto op = assemble(random_spd_field(g, 1.0, 4.0, 2));
  const FluxSurface s(op, {3, 2, 0}, {6, 5, 0});
  CHECK(s.enclosed_count() == 16);
  for (const auto& e : s.edges()) {
    CHECK(s.encloses(g.index_tuple(e.inside)));
    CHECK_FALSE(s.encloses(g.index_tuple(e.outside)));
  }
  for (std::size_t i = 0; i < s.edges().size(); ++i)
    for (std::size_t j = i + 1; j < s.edges().size(); ++j)
      CHECK_FALSE((s.edges()[i].inside == s.edges()[j].inside && s.edges()[i].outside == s.edges()[j].outside));
}

TEST_CASE("flux surface: boxes touching the boundary are rejected") {
  const Grid g = grid2(9, 9);
  const auto op = assemble(make_uniform_field(g, Tensor::identity(1.0), 1.0));
  CHECK_THROWS_AS(box_surface(op, node_ref(g, IndexTuple{2, 5, 0}), 2), InvalidArgument);
  CHECK_THROWS_AS(FluxSurface(op, {0, 3, 0}, {3, 3, 0}), InvalidArgument);
  CHECK_NOTHROW(box_surface(op, node_ref(g, IndexTuple{3, 7, 0}), 2));
}

TEST_CASE("boxes_disjoint needs a gap of one node") {
  const Grid g = grid1(20);
  const auto op = assemble(make_uniform_field(g, Tensor::identity(1.0), 1.0));
  const auto a = box_surface(op, node_ref(g, IndexTuple{5, 0, 0}), 2);
  CHECK_FALSE(boxes_disjoint(a, box_surface(op, node_ref(g, IndexTuple{10, 0, 0}), 2)));
  CHECK(boxes_disjoint(a, box_surface(op, node_ref(g, IndexTuple{11, 0, 0}), 2)));
}

TEST_CASE("triplet dump lists every stored entry") {
  const Grid g = grid1(3);
  const auto op = assemble(make_uniform_field(g, Tensor::identity(1.0), 1.0));
  std::ostringstream out;
  write_triplets(out, op);
  CHECK(out.str() == "0 0 8\n0 1 -4\n1 0 -4\n1 1 8\n1 2 -4\n2 1 -4\n2 2 8\n");
}

TEST_CASE("boundary lift reproduces a linear profile") {
  const Grid g = grid1(9);
  const auto op = assemble(make_uniform_field(g, Tensor::identity(1.0), 1.0));
  Eigen::VectorXd full = Eigen::VectorXd::Zero(g.node_count());
  full[g.node_count() - 1] = 2.0;
  SolveOptions opt;
  opt.tol = 1e-13;
  const auto u = solve_dirichlet(op, op.boundary_lift(full), opt);
  for (Index i = 1; i <= 9; ++i) CHECK(u.potential.values[i] == doctest::Approx(2.0 * i / 10.0).epsilon(1e-12));
}
