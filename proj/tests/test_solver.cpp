#include "oracles.hpp"
#include "recip/scenarios.hpp"
#include "recip/solver.hpp"

#include <doctest.h>

#include <random>
#include <sstream>

using namespace recip;
using recip::test::grid1;
using recip::test::grid2;

TEST_CASE("zero load gives zero potential in zero iterations") {
  const Grid g = grid2(8, 8);
  const auto op = assemble(random_spd_field(g, 1.0, 5.0, 1));
  const auto r = solve_dirichlet(op, Eigen::VectorXd::Zero(g.interior_count()));
  CHECK(r.iterations == 0);
  CHECK(r.potential.values.isZero(0.0));
}

TEST_CASE("unit load at the centre of a 1D grid: tent matching the tridiagonal oracle") {
  const Grid g = grid1(9);
  const auto op = assemble(make_uniform_field(g, Tensor::identity(1.0), 1.0));
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(9);
  rhs[4] = 1.0;
  SolveOptions opt;
  opt.tol = 1e-13;
  const auto r = solve_dirichlet(op, rhs, opt);
  std::vector<double> load(9, 0.0);
  load[4] = 1.0;
  const auto oracle = recip::test::tridiagonal_solve_1d(std::vector<double>(10, 1.0), g.spacing(0), load);
  for (Index i = 0; i < 9; ++i) CHECK(r.potential.values[i + 1] == doctest::Approx(oracle[i]).epsilon(1e-12));
  // Symmetric tent peaking at x = 1/2 with height x(1-x) = 1/4.
  CHECK(r.potential.values[5] == doctest::Approx(0.25).epsilon(1e-12));
  for (Index i = 1; i < 5; ++i) CHECK(r.potential.values[i] == doctest::Approx(r.potential.values[10 - i]).epsilon(1e-12));
  CHECK(r.potential.values[0] == 0.0);
  CHECK(r.potential.values[10] == 0.0);
}

TEST_CASE("variable 1D conductivity against the Thomas oracle") {
  const Grid g = grid1(31);
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> dist(0.1, 10.0);
  std::vector<double> sigma(32), load(31);
  for (auto& s : sigma) s = dist(rng);
  for (auto& l : load) l = dist(rng) - 5.0;
  const auto op = assemble(make_scalar_field(g, sigma));
  SolveOptions opt;
  opt.tol = 1e-13;
  const auto r = solve_dirichlet(op, Eigen::Map<const Eigen::VectorXd>(load.data(), 31), opt);
  const auto oracle = recip::test::tridiagonal_solve_1d(sigma, g.spacing(0), load);
  for (Index i = 0; i < 31; ++i) CHECK(r.potential.values[i + 1] == doctest::Approx(oracle[i]).epsilon(1e-10));
}

TEST_CASE("residual contract and boundary zeros") {
  const Grid g = grid2(12, 10);
  const auto op = assemble(random_spd_field(g, 0.5, 10.0, 4));
  Eigen::VectorXd rhs = Eigen::VectorXd::Random(g.interior_count());
  const auto r = solve_dirichlet(op, rhs);
  CHECK(r.residual_norm <= 1e-10);
  const Eigen::VectorXd true_residual = rhs - op.matrix() * r.potential.interior();
  CHECK(true_residual.norm() / rhs.norm() <= 1e-10);
  for (Index n = 0; n < g.node_count(); ++n)
    if (g.is_boundary(n)) CHECK(r.potential.values[n] == 0.0);
}

TEST_CASE("superposition and scaling") {
  const Grid g = grid2(10, 10);
  const auto field = random_spd_field(g, 1.0, 10.0, 9);
  const auto op = assemble(field);
  std::mt19937_64 rng(1);
  std::normal_distribution<double> n01;
  Eigen::VectorXd r1(g.interior_count()), r2(g.interior_count());
  for (Index i = 0; i < r1.size(); ++i) r1[i] = n01(rng), r2[i] = n01(rng);
  const double tol = 1e-10;
  SolveOptions opt;
  opt.tol = tol;

  const Eigen::VectorXd u1 = solve_dirichlet(op, r1, opt).potential.values;
  const Eigen::VectorXd u2 = solve_dirichlet(op, r2, opt).potential.values;
  const double alpha = 2.5, beta = -0.75;
  const Eigen::VectorXd u12 = solve_dirichlet(op, alpha * r1 + beta * r2, opt).potential.values;
  const double scale = u12.cwiseAbs().maxCoeff() + u1.cwiseAbs().maxCoeff() + u2.cwiseAbs().maxCoeff();
  CHECK((u12 - alpha * u1 - beta * u2).cwiseAbs().maxCoeff() <= (std::abs(alpha) + std::abs(beta) + 1) * tol * scale * 100);

  // K scales linearly with a_ij, so c * a gives u / c.
  const double c = 3.0;
  const Eigen::VectorXd uc = solve_dirichlet(assemble(field.scaled(c)), r1, opt).potential.values;
  CHECK((uc - u1 / c).cwiseAbs().maxCoeff() <= 2 * tol * u1.cwiseAbs().maxCoeff() * 100);
}

TEST_CASE("determinism: identical inputs give bitwise identical outputs") {
  const Grid g = grid2(14, 9);
  const auto op = assemble(random_spd_field(g, 1.0, 10.0, 21));
  const Eigen::VectorXd rhs = Eigen::VectorXd::LinSpaced(g.interior_count(), -1.0, 2.0);
  const auto a = solve_dirichlet(op, rhs);
  const auto b = solve_dirichlet(op, rhs);
  CHECK(a.iterations == b.iterations);
  CHECK(a.potential.values == b.potential.values);
}

TEST_CASE("iteration cap raises SolverFailure with the best residual") {
  const Grid g = grid2(20, 20);
  const auto op = assemble(make_uniform_field(g, Tensor::identity(1.0), 1.0));
  SolveOptions opt;
  opt.tol = 1e-30;
  opt.max_iterations = 3;
  try {
    solve_dirichlet(op, Eigen::VectorXd::Ones(g.interior_count()), opt);
    FAIL("expected SolverFailure");
  } catch (const SolverFailure& e) {
    CHECK(e.iterations() == 3);
    CHECK(e.best_residual() > 0.0);
    CHECK(e.best_residual() <= 1.0);
  }
}

TEST_CASE("negative curvature is reported as an invalid operator") {
  Eigen::SparseMatrix<double, Eigen::RowMajor> a(2, 2);
  a.insert(0, 0) = 1.0;
  a.insert(0, 1) = 3.0;
  a.insert(1, 0) = 3.0;
  a.insert(1, 1) = 1.0;
  Eigen::VectorXd b(2), x;
  b << 1.0, -1.0;
  CHECK_THROWS_AS(jacobi_cg(a, b, x, 1e-10, 10), InvalidOperator);
}

TEST_CASE("precondition errors") {
  const Grid g = grid1(5);
  const auto op = assemble(make_uniform_field(g, Tensor::identity(1.0), 1.0));
  CHECK_THROWS_AS(solve_dirichlet(op, Eigen::VectorXd::Ones(4)), InvalidArgument);
  SolveOptions bad;
  bad.tol = 1.0;
  CHECK_THROWS_AS(solve_dirichlet(op, Eigen::VectorXd::Ones(5), bad), InvalidArgument);
}

TEST_CASE("trace emits one JSON line per iteration") {
  const Grid g = grid1(7);
  const auto op = assemble(make_uniform_field(g, Tensor::identity(1.0), 1.0));
  std::ostringstream trace;
  SolveOptions opt;
  opt.trace = &trace;
  const auto r = solve_dirichlet(op, Eigen::VectorXd::Ones(7), opt);
  const std::string s = trace.str();
  CHECK(std::count(s.begin(), s.end(), '\n') == r.iterations);
  CHECK(s.rfind("{\"iteration\":1,\"residual\":", 0) == 0);
}

TEST_CASE("templated CG works in single precision") {
  Eigen::SparseMatrix<float> a(3, 3);
  a.insert(0, 0) = 4;
  a.insert(0, 1) = -1;
  a.insert(1, 0) = -1;
  a.insert(1, 1) = 4;
  a.insert(1, 2) = -1;
  a.insert(2, 1) = -1;
  a.insert(2, 2) = 4;
  Eigen::VectorXf b(3), x;
  b << 1, 2, 3;
  const auto stats = jacobi_cg(a, b, x, 1e-6, 10);
  CHECK(stats.converged);
  CHECK(((a * x - b).norm() / b.norm()) <= 1e-6f);
}
