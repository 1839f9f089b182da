#include "recip/analytic.hpp"

#include "recip/reciprocity.hpp"

#include <Eigen/Geometry>

#include <algorithm>
#include <array>
#include <random>

namespace recip {

void OneDimConfig::validate() const {
  if (!(length > 0.0)) throw InvalidArgument("domain length must be positive");
  if (!(0.0 < a && a < b && b < length)) throw InvalidArgument("charges must satisfy 0 < a < b < L");
  if (!std::isfinite(current)) throw InvalidArgument("current must be finite");
}

double phi_1d(double x, const OneDimConfig& cfg) {
  cfg.validate();
  if (!(x >= 0.0 && x <= cfg.length)) throw InvalidArgument("x must lie in [0, L]");
  return phi_1d(x, cfg.a, cfg.b, cfg.current, cfg.length);
}

double reciprocity_1d(double a, double b, double c, double d, double current, double length) {
  OneDimConfig{length, a, b, current}.validate();
  OneDimConfig{length, c, d, current}.validate();
  const std::array<double, 4> v{a, b, c, d};
  for (std::size_t i = 0; i < 4; ++i)
    for (std::size_t j = i + 1; j < 4; ++j)
      if (v[i] == v[j]) throw InvalidArgument("the four charge positions must be distinct");
  const auto phi = [&](double x, double p, double q) { return phi_1d(x, p, q, current, length); };
  return phi(d, a, b) - phi(c, a, b) - (phi(b, c, d) - phi(a, c, d));
}

double triangle_solid_angle(const Eigen::Vector3d& p, const Eigen::Vector3d& q, const Eigen::Vector3d& r) {
  // Van Oosterom & Strackee.
  const double lp = p.norm(), lq = q.norm(), lr = r.norm();
  const double numerator = p.dot(q.cross(r));
  const double denominator = lp * lq * lr + p.dot(q) * lr + p.dot(r) * lq + q.dot(r) * lp;
  return 2.0 * std::atan2(numerator, denominator);
}

double fundamental_box_flux(const Eigen::Vector3d& source, const Eigen::Vector3d& lo, const Eigen::Vector3d& hi) {
  const Eigen::Vector3d l = lo - source;
  const Eigen::Vector3d h = hi - source;
  auto corner = [&](int bits) {
    return Eigen::Vector3d((bits & 1) ? h.x() : l.x(), (bits & 2) ? h.y() : l.y(), (bits & 4) ? h.z() : l.z());
  };
  // Faces listed with outward (counter-clockwise seen from outside) vertex order.
  static constexpr int faces[6][4] = {
      {0, 4, 6, 2}, {1, 3, 7, 5},  // x = lo, x = hi
      {0, 1, 5, 4}, {2, 6, 7, 3},  // y = lo, y = hi
      {0, 2, 3, 1}, {4, 5, 7, 6},  // z = lo, z = hi
  };
  double omega = 0.0;
  for (const auto& f : faces) {
    const auto v0 = corner(f[0]), v1 = corner(f[1]), v2 = corner(f[2]), v3 = corner(f[3]);
    omega += triangle_solid_angle(v0, v1, v2) + triangle_solid_angle(v0, v2, v3);
  }
  return omega / (4.0 * std::numbers::pi);
}

RegularPartReport regular_part_check(const DiscreteOperator& op, const NodeRef& a, const SolveOptions& options,
                                     double exclusion_radius, Index box_radius) {
  const Grid& grid = op.grid();
  if (grid.dim() != 3) throw InvalidArgument("regular part decomposition needs a 3D grid");

  // Interior rows must be the 7-point identity-tensor stencil.
  for (Index row = 0; row < op.stencil().outerSize(); ++row) {
    const IndexTuple rt = grid.index_tuple(row);
    if (grid.is_boundary(rt)) continue;
    for (SparseMatrix::InnerIterator it(op.stencil(), row); it; ++it) {
      if (it.col() == row) continue;
      const IndexTuple ct = grid.index_tuple(it.col());
      int axis = -1, differing = 0;
      for (int k = 0; k < 3; ++k)
        if (rt[k] != ct[k]) {
          axis = k;
          ++differing;
        }
      if (differing != 1) throw InvalidArgument("regular part check requires the identity conductivity field");
      const double h = grid.spacing(axis);
      const double expected = grid.cell_volume() / (h * h);
      if (std::abs(-it.value() - expected) > 1e-12 * expected)
        throw InvalidArgument("regular part check requires the identity conductivity field");
    }
  }

  RegularPartReport report;
  report.exclusion_radius =
      exclusion_radius > 0.0
          ? exclusion_radius
          : 2.0 * std::max({grid.spacing(0), grid.spacing(1), grid.spacing(2)});

  const SolveResult zeta = unit_source_potential(op, a, options);
  report.residual_norm = zeta.residual_norm;

  Eigen::VectorXd eta(grid.node_count());
  for (Index n = 0; n < grid.node_count(); ++n)
    eta[n] = n == a.linear ? 0.0 : zeta.potential.values[n] - fundamental_3d((grid.coordinates(n) - a.coords).eval());

  for (Index n = 0; n < grid.node_count(); ++n)
    if (grid.is_boundary(n))
      report.boundary_defect =
          std::max(report.boundary_defect, std::abs(eta[n] + fundamental_3d((grid.coordinates(n) - a.coords).eval())));

  // Pointwise discrete Laplacian: -(K eta)_n / V. Every stencil neighbour of a
  // checked node must also avoid the source node.
  const double volume = grid.cell_volume();
  for (Index n = 0; n < grid.node_count(); ++n) {
    if (grid.is_boundary(n)) continue;
    if ((grid.coordinates(n) - a.coords).norm() < report.exclusion_radius) continue;
    double k_eta = 0.0;
    bool touches_source = false;
    for (SparseMatrix::InnerIterator it(op.stencil(), n); it; ++it) {
      if (it.col() == a.linear) touches_source = true;
      k_eta += it.value() * eta[it.col()];
    }
    if (touches_source) continue;
    report.max_laplacian_residual = std::max(report.max_laplacian_residual, std::abs(k_eta) / volume);
    ++report.nodes_checked;
  }

  const FluxSurface box = box_surface(op, a, box_radius);
  report.zeta_flux = conormal_flux(op, zeta.potential, box);
  Eigen::Vector3d lo, hi;
  for (int k = 0; k < 3; ++k) {
    lo[k] = (static_cast<double>(box.lo()[k]) - 0.5) * grid.spacing(k);
    hi[k] = (static_cast<double>(box.hi()[k]) + 0.5) * grid.spacing(k);
  }
  report.fundamental_flux = fundamental_box_flux(a.coords, lo, hi);
  report.eta_flux = report.zeta_flux - report.fundamental_flux;

  Potential eta_field{grid, eta};
  report.eta_flux_nodal = conormal_flux(op, eta_field, box);
  return report;
}

namespace {

AnalyticCheck make_check(std::string name, double value, double tolerance) {
  return AnalyticCheck{std::move(name), value, tolerance, value <= tolerance};
}

}  // namespace

std::vector<AnalyticCheck> analytic_check_table(std::uint64_t seed, int quadruples) {
  std::vector<AnalyticCheck> table;
  table.push_back(make_check("heaviside(1) = 1", std::abs(heaviside(1.0) - 1.0), 0.0));
  table.push_back(make_check("heaviside(-1) = 0", std::abs(heaviside(-1.0)), 0.0));
  table.push_back(make_check("heaviside(0) = 0", std::abs(heaviside(0.0)), 0.0));

  const OneDimConfig cfg{1.0, 0.25, 0.75, 1.0};
  table.push_back(make_check("phi_1d(0.5) = 0", std::abs(phi_1d(0.5, cfg)), 1e-15));
  table.push_back(make_check("phi_1d(0.25) = -0.125", std::abs(phi_1d(0.25, cfg) + 0.125), 1e-15));
  table.push_back(make_check("phi_1d boundary values", std::max(std::abs(phi_1d(0.0, cfg)), std::abs(phi_1d(1.0, cfg))), 1e-15));

  // Slope jumps of +I at a and -I at b, one-sided differences.
  const double eps = 1e-6;
  auto slope_jump = [&](double x) {
    const double right = (phi_1d(x + 2 * eps, cfg) - phi_1d(x + eps, cfg)) / eps;
    const double left = (phi_1d(x - eps, cfg) - phi_1d(x - 2 * eps, cfg)) / eps;
    return right - left;
  };
  table.push_back(make_check("slope jump at a = +I", std::abs(slope_jump(cfg.a) - cfg.current), 1e-6));
  table.push_back(make_check("slope jump at b = -I", std::abs(slope_jump(cfg.b) + cfg.current), 1e-6));
  table.push_back(make_check("continuity at a", std::abs(phi_1d(cfg.a + eps, cfg) - phi_1d(cfg.a - eps, cfg)), 4 * eps));

  table.push_back(make_check("reciprocity_1d (0.2,0.4),(0.6,0.8)",
                             std::abs(reciprocity_1d(0.2, 0.4, 0.6, 0.8, 1.0, 1.0)), 1e-15));

  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  double worst = 0.0;
  for (int i = 0; i < quadruples; ++i) {
    std::array<double, 4> v{};
    for (auto& x : v) x = unit(rng);
    if (v[0] > v[1]) std::swap(v[0], v[1]);
    if (v[2] > v[3]) std::swap(v[2], v[3]);
    if (v[0] == v[1] || v[2] == v[3] || v[0] == 0.0 || v[2] == 0.0) continue;
    worst = std::max(worst, std::abs(reciprocity_1d(v[0], v[1], v[2], v[3], 1.0, 1.0)));
  }
  table.push_back(make_check("reciprocity_1d random quadruples", worst, 1e-14));

  const double e1 = fundamental_3d(Eigen::Vector3d(1.0, 0.0, 0.0));
  table.push_back(make_check("E(|x|=1) = -1/(4 pi)", std::abs(e1 + 0.25 / std::numbers::pi), 1e-16));
  const Eigen::Vector3d x(0.3, -0.2, 0.7);
  table.push_back(make_check("E(2x) = E(x)/2", std::abs(fundamental_3d((2.0 * x).eval()) - 0.5 * fundamental_3d(x)), 1e-16));
  table.push_back(make_check("flux of grad E through a box = 1",
                             std::abs(fundamental_box_flux(Eigen::Vector3d(0.1, 0.2, 0.3), Eigen::Vector3d(-0.5, -0.4, 0.0),
                                                           Eigen::Vector3d(0.6, 0.5, 0.45)) - 1.0),
                             1e-13));

  // Discrete 1D solve against the closed form.
  const std::array<double, 1> extent{1.0};
  const std::array<Index, 1> count{1023};
  const Grid grid = Grid::build(1, extent, count);
  const DiscreteOperator op = assemble(make_uniform_field(grid, Tensor::identity(1.0), 1.0));
  const NodeRef a = nearest_node(grid, make_point(std::array<double, 1>{cfg.a}));
  const NodeRef b = nearest_node(grid, make_point(std::array<double, 1>{cfg.b}));
  const MeasureData source(grid, {Charge{a, cfg.current}, Charge{b, -cfg.current}});
  SolveOptions options;
  options.tol = 1e-13;
  const SolveResult u = solve_dirichlet(op, -to_rhs(grid, source), options);
  double nodal = 0.0;
  for (Index n = 0; n < grid.node_count(); ++n)
    nodal = std::max(nodal, std::abs(u.potential.values[n] - phi_1d(grid.coordinates(n)[0], cfg)));
  table.push_back(make_check("1D discrete solve = closed form (1023 nodes)", nodal, 1e-10));
  return table;
}

}  // namespace recip
