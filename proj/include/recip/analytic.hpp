#pragma once

#include "recip/solver.hpp"

#include <Eigen/Core>

#include <cmath>
#include <cstdint>
#include <numbers>
#include <string>
#include <vector>

namespace recip {

/// H(x) = 1 for x > 0, else 0 (H(0) = 0).
template <typename Scalar>
constexpr Scalar heaviside(Scalar x) {
  return x > Scalar(0) ? Scalar(1) : Scalar(0);
}

/// Two-point problem on (0, L): unit conductivity, current I in at a and out at b.
struct OneDimConfig {
  double length = 1.0;
  double a = 0.25;
  double b = 0.75;
  double current = 1.0;

  /// Throws InvalidArgument unless 0 < a < b < L.
  void validate() const;
};

/// Closed-form solution of phi'' = I delta_a - I delta_b with phi(0) = phi(L) = 0:
/// I [(x-a)H(x-a) - (x-b)H(x-b) + x(a-b)/L].
template <typename Scalar>
Scalar phi_1d(Scalar x, Scalar a, Scalar b, Scalar current, Scalar length) {
  return current * ((x - a) * heaviside(x - a) - (x - b) * heaviside(x - b) + x * (a - b) / length);
}

double phi_1d(double x, const OneDimConfig& cfg);

/// phi(d;a,b) - phi(c;a,b) - [phi(b;c,d) - phi(a;c,d)]; zero in exact arithmetic.
double reciprocity_1d(double a, double b, double c, double d, double current, double length);

/// Free-space fundamental solution of the 3D Laplacian, -1/(4 pi |x|).
template <typename Derived>
typename Derived::Scalar fundamental_3d(const Eigen::MatrixBase<Derived>& x) {
  using Scalar = typename Derived::Scalar;
  const Scalar r = x.norm();
  if (!(r > Scalar(0))) throw InvalidArgument("fundamental solution is singular at the origin");
  return Scalar(-1) / (Scalar(4) * std::numbers::pi_v<Scalar> * r);
}

/// Solid angle subtended at the origin by the triangle (p, q, r), signed by orientation.
double triangle_solid_angle(const Eigen::Vector3d& p, const Eigen::Vector3d& q, const Eigen::Vector3d& r);

/// Exact outward flux of grad E(x - source) through the boundary of an
/// axis-aligned box, via solid angles. Equals 1 whenever the box contains the source.
double fundamental_box_flux(const Eigen::Vector3d& source, const Eigen::Vector3d& lo, const Eigen::Vector3d& hi);

struct RegularPartReport {
  double max_laplacian_residual = 0.0;  ///< max |Delta_h eta| outside the exclusion zone
  double exclusion_radius = 0.0;
  Index nodes_checked = 0;
  double zeta_flux = 0.0;        ///< conormal flux of zeta through the box (alpha)
  double fundamental_flux = 0.0; ///< exact flux of E through the same surface
  double eta_flux = 0.0;         ///< zeta_flux - fundamental_flux
  double eta_flux_nodal = 0.0;   ///< crossing-edge sum of nodal eta, for contrast
  double boundary_defect = 0.0;  ///< max |eta + E| on boundary nodes
  double residual_norm = 0.0;
};

/// Decomposes zeta^(a) = eta + E(x - a) on a 3D grid with identity conductivity.
/// The residual is sampled on nodes at distance >= exclusion_radius from a;
/// a non-positive radius selects two grid spacings.
RegularPartReport regular_part_check(const DiscreteOperator& op, const NodeRef& a, const SolveOptions& options = {},
                                     double exclusion_radius = 0.0, Index box_radius = 2);

struct AnalyticCheck {
  std::string name;
  double value = 0.0;      ///< measured defect
  double tolerance = 0.0;
  bool passed = false;
};

/// Closed-form checks plus a discrete-vs-closed-form 1D comparison. The random
/// quadruples are drawn from `seed`.
std::vector<AnalyticCheck> analytic_check_table(std::uint64_t seed = 2024, int quadruples = 1000);

}  // namespace recip
