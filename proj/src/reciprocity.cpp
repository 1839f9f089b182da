#include "recip/reciprocity.hpp"

#include <algorithm>
#include <cmath>

namespace recip {

InjectionSpec make_injection_spec(const Grid& grid, const std::array<Point, 4>& points, double current,
                                  Index surface_radius) {
  InjectionSpec spec;
  spec.current = current;
  spec.surface_radius = surface_radius;
  for (std::size_t i = 0; i < 4; ++i) {
    spec.points[i] = nearest_node(grid, points[i]);
    spec.snap_distance[i] = (spec.points[i].coords - points[i]).norm();
  }
  return spec;
}

void validate_injection(const DiscreteOperator& op, const InjectionSpec& spec) {
  if (!std::isfinite(spec.current)) throw InvalidArgument("injected current must be finite");
  if (spec.surface_radius < 0) throw InvalidArgument("surface radius must be non-negative");
  for (std::size_t i = 0; i < 4; ++i)
    for (std::size_t j = i + 1; j < 4; ++j)
      if (spec.points[i] == spec.points[j]) throw InvalidArgument("injection points must be pairwise distinct");

  std::vector<FluxSurface> boxes;
  for (const auto& p : spec.points) boxes.push_back(box_surface(op, p, spec.surface_radius));
  for (std::size_t i = 0; i < 4; ++i)
    for (std::size_t j = i + 1; j < 4; ++j)
      if (!boxes_disjoint(boxes[i], boxes[j])) throw InvalidArgument("injection boxes overlap");
}

SolveResult unit_source_potential(const DiscreteOperator& op, const NodeRef& point, const SolveOptions& options) {
  const Index row = op.grid().interior_index(point.index);
  if (row < 0) throw InvalidArgument("source must be an interior node");
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(op.grid().interior_count());
  rhs[row] = -1.0;
  return solve_dirichlet(op, rhs, options);
}

namespace {

double checked_inverse(double a) {
  if (!(std::abs(a) >= kAlphaFloor)) throw DegenerateAlpha("flux coefficient alpha is degenerate");
  return 1.0 / a;
}

double alpha_tolerance(const DiscreteOperator& op, Index radius, double tol) {
  const double box_nodes = std::pow(2.0 * static_cast<double>(radius) + 1.0, op.grid().dim());
  return 10.0 * tol * std::sqrt(box_nodes);
}

}  // namespace

double alpha(const DiscreteOperator& op, const NodeRef& point, Index radius, const SolveOptions& options) {
  const FluxSurface box = box_surface(op, point, radius);
  const SolveResult zeta = unit_source_potential(op, point, options);
  return conormal_flux(op, zeta.potential, box);
}

TwoPointResult two_point_potential(const DiscreteOperator& op, const NodeRef& a, const NodeRef& b, double current,
                                   Index radius, const SolveOptions& options) {
  if (a == b) throw InvalidArgument("injection and extraction points must differ");
  const FluxSurface box_a = box_surface(op, a, radius);
  const FluxSurface box_b = box_surface(op, b, radius);
  if (!boxes_disjoint(box_a, box_b)) throw InvalidArgument("injection boxes overlap");

  SolveResult zeta_a = unit_source_potential(op, a, options);
  SolveResult zeta_b = unit_source_potential(op, b, options);

  TwoPointResult out;
  out.alpha_a = conormal_flux(op, zeta_a.potential, box_a);
  out.alpha_b = conormal_flux(op, zeta_b.potential, box_b);
  const double wa = current * checked_inverse(out.alpha_a);
  const double wb = current * checked_inverse(out.alpha_b);

  out.potential = Potential::zero(op.grid());
  out.potential.values = wa * zeta_a.potential.values - wb * zeta_b.potential.values;

  // Direct route: K phi = -(wa e_a - wb e_b).
  const auto& g = op.grid();
  const MeasureData source(g, {Charge{a, wa}, Charge{b, -wb}});
  SolveResult direct = solve_dirichlet(op, -to_rhs(g, source), options);
  out.direct = std::move(direct.potential);
  out.path_difference = (out.potential.values - out.direct.values).cwiseAbs().maxCoeff();
  out.max_residual = std::max({zeta_a.residual_norm, zeta_b.residual_norm, direct.residual_norm});
  out.zeta_a = std::move(zeta_a.potential);
  out.zeta_b = std::move(zeta_b.potential);
  return out;
}

InjectionCurrents verify_injection(const DiscreteOperator& op, const Potential& phi, const NodeRef& a,
                                   const NodeRef& b, Index radius) {
  const FluxSurface box_a = box_surface(op, a, radius);
  const FluxSurface box_b = box_surface(op, b, radius);
  if (!boxes_disjoint(box_a, box_b)) throw InvalidArgument("injection boxes overlap");
  return {conormal_flux(op, phi, box_a), conormal_flux(op, phi, box_b)};
}

bool ReciprocityReport::passed() const {
  if (variant == "unit-strength") return reciprocal;
  return identity_holds && implication_holds;
}

namespace {

struct Experiment {
  std::array<Potential, 4> zeta;  // unit-source potentials at a, b, c, d
  std::array<double, 4> alpha{};
  std::array<double, 4> residual{};
};

Experiment run_unit_sources(const DiscreteOperator& op, const InjectionSpec& spec, const SolveOptions& options) {
  Experiment e;
  for (std::size_t i = 0; i < 4; ++i) {
    SolveResult s = unit_source_potential(op, spec.points[i], options);
    e.alpha[i] = conormal_flux(op, s.potential, box_surface(op, spec.points[i], spec.surface_radius));
    e.residual[i] = s.residual_norm;
    e.zeta[i] = std::move(s.potential);
  }
  return e;
}

ReciprocityReport evaluate(const DiscreteOperator& op, const InjectionSpec& spec, const SolveOptions& options,
                           const Experiment& e, const std::array<double, 4>& weight, std::string variant) {
  const auto& [a, b, c, d] = spec.points;
  const double current = spec.current;
  ReciprocityReport r;
  r.variant = std::move(variant);
  r.current = current;
  r.alpha = e.alpha;
  r.snap_distance = spec.snap_distance;

  // weight[i] multiplies zeta_i: phi1 = w0 zeta_a - w1 zeta_b, phi2 = w2 zeta_c - w3 zeta_d.
  Potential phi1 = Potential::zero(op.grid());
  Potential phi2 = Potential::zero(op.grid());
  phi1.values = weight[0] * e.zeta[0].values - weight[1] * e.zeta[1].values;
  phi2.values = weight[2] * e.zeta[2].values - weight[3] * e.zeta[3].values;

  r.phi2_a = phi2.at(a);
  r.phi2_b = phi2.at(b);
  r.phi1_c = phi1.at(c);
  r.phi1_d = phi1.at(d);
  r.lhs = r.phi2_a - r.phi2_b - (r.phi1_c - r.phi1_d);

  // g(x, y) = -zeta_y(x).
  r.g_ac = -e.zeta[2].at(a);
  r.g_bd = -e.zeta[3].at(b);
  r.g_ad = -e.zeta[3].at(a);
  r.g_bc = -e.zeta[2].at(b);
  for (const auto& z : e.zeta) r.max_abs_green = std::max(r.max_abs_green, z.values.cwiseAbs().maxCoeff());

  const double ia = current == 0.0 ? 0.0 : weight[0] / current;
  const double ib = current == 0.0 ? 0.0 : weight[1] / current;
  const double ic = current == 0.0 ? 0.0 : weight[2] / current;
  const double id = current == 0.0 ? 0.0 : weight[3] / current;
  r.rhs = current * (ic - ia) * r.g_ac - current * (id - ib) * r.g_bd;
  r.rhs_complete = current * ((ia - ic) * r.g_ac + (id - ia) * r.g_ad + (ic - ib) * r.g_bc + (ib - id) * r.g_bd);

  r.currents_ab = verify_injection(op, phi1, a, b, spec.surface_radius);
  r.currents_cd = verify_injection(op, phi2, c, d, spec.surface_radius);

  const char* names[4] = {"zeta_a", "zeta_b", "zeta_c", "zeta_d"};
  for (std::size_t i = 0; i < 4; ++i) r.residuals[names[i]] = e.residual[i];

  const double scale = std::abs(current) * r.max_abs_green;
  r.tolerance = 50.0 * options.tol * scale;
  const double alpha_tol = alpha_tolerance(op, spec.surface_radius, options.tol);

  r.identity_holds = std::abs(r.lhs - r.rhs) <= r.tolerance;
  r.alphas_agree = std::abs(e.alpha[2] - e.alpha[0]) <= alpha_tol && std::abs(e.alpha[3] - e.alpha[1]) <= alpha_tol;
  r.reciprocal = std::abs(r.lhs) <= r.tolerance;
  r.implication_holds = !r.alphas_agree || r.reciprocal;

  r.ledger.push_back({"|lhs - rhs|", std::abs(r.lhs - r.rhs), r.tolerance, r.identity_holds});
  r.ledger.push_back({"|lhs - rhs_complete|", std::abs(r.lhs - r.rhs_complete), r.tolerance,
                      std::abs(r.lhs - r.rhs_complete) <= r.tolerance});
  r.ledger.push_back({"|alpha_c - alpha_a|", std::abs(e.alpha[2] - e.alpha[0]), alpha_tol,
                      std::abs(e.alpha[2] - e.alpha[0]) <= alpha_tol});
  r.ledger.push_back({"|alpha_d - alpha_b|", std::abs(e.alpha[3] - e.alpha[1]), alpha_tol,
                      std::abs(e.alpha[3] - e.alpha[1]) <= alpha_tol});
  r.ledger.push_back({"|lhs|", std::abs(r.lhs), r.tolerance, r.reciprocal});
  return r;
}

}  // namespace

ReciprocityReport reciprocity_defect(const DiscreteOperator& op, const InjectionSpec& spec,
                                     const SolveOptions& options) {
  validate_injection(op, spec);
  const Experiment e = run_unit_sources(op, spec, options);
  std::array<double, 4> weight{};
  for (std::size_t i = 0; i < 4; ++i) weight[i] = spec.current * checked_inverse(e.alpha[i]);
  return evaluate(op, spec, options, e, weight, "alpha-normalized");
}

ReciprocityReport unit_strength_reciprocity(const DiscreteOperator& op, const InjectionSpec& spec,
                                            const SolveOptions& options) {
  validate_injection(op, spec);
  InjectionSpec unit = spec;
  unit.current = 1.0;
  const Experiment e = run_unit_sources(op, unit, options);
  return evaluate(op, unit, options, e, {1.0, 1.0, 1.0, 1.0}, "unit-strength");
}

nlohmann::json to_json(const ReciprocityReport& r) {
  nlohmann::json j;
  j["variant"] = r.variant;
  j["current"] = r.current;
  j["alpha"] = r.alpha;
  j["snap_distance"] = r.snap_distance;
  j["lhs"] = r.lhs;
  j["rhs"] = r.rhs;
  j["rhs_complete"] = r.rhs_complete;
  j["g_ac"] = r.g_ac;
  j["g_bd"] = r.g_bd;
  j["g_ad"] = r.g_ad;
  j["g_bc"] = r.g_bc;
  j["potentials"] = {{"phi2_a", r.phi2_a}, {"phi2_b", r.phi2_b}, {"phi1_c", r.phi1_c}, {"phi1_d", r.phi1_d}};
  j["currents"] = {{"in_a", r.currents_ab.in},
                   {"out_b", r.currents_ab.out},
                   {"in_c", r.currents_cd.in},
                   {"out_d", r.currents_cd.out}};
  j["residuals"] = r.residuals;
  j["tolerance"] = r.tolerance;
  j["identity_holds"] = r.identity_holds;
  j["alphas_agree"] = r.alphas_agree;
  j["implication_holds"] = r.implication_holds;
  auto ledger = nlohmann::json::array();
  for (const auto& e : r.ledger)
    ledger.push_back({{"check", e.check}, {"value", e.value}, {"tolerance", e.tolerance}, {"ok", e.ok}});
  j["tolerance_ledger"] = ledger;
  j["verdict"] = r.verdict();
  j["passed"] = r.passed();
  return j;
}

}  // namespace recip
