#pragma once

#include "recip/solver.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace recip {

/// Temperature-dependent material coefficient: constant, affine, exponential, or
/// a piecewise-linear table. `integral(u)` is the exact antiderivative from 0.
class ScalarLaw {
public:
  static ScalarLaw constant(double c);
  static ScalarLaw affine(double c0, double c1);       // c0 + c1 u
  static ScalarLaw exponential(double c0, double c1);  // c0 exp(c1 u)
  static ScalarLaw table(std::vector<double> u, std::vector<double> values);

  /// "constant:c", "affine:c0,c1" or "exponential:c0,c1".
  static ScalarLaw parse(const std::string& spec);
  static ScalarLaw from_table_file(const std::string& path);

  double operator()(double u) const;
  double integral(double u) const;
  /// Smallest value on [lo, hi] (exact for every supported law).
  double min_on(double lo, double hi) const;

private:
  enum class Kind { constant, affine, exponential, table };
  Kind kind_ = Kind::constant;
  double c0_ = 1.0;
  double c1_ = 0.0;
  std::vector<double> u_;
  std::vector<double> v_;
};

/// sigma(u) for the electric problem, k(u) for the heat problem, and one
/// boundary temperature per face: (axis 0 low, axis 0 high, axis 1 low, ...).
struct MaterialLaws {
  ScalarLaw sigma_of_u = ScalarLaw::constant(1.0);
  ScalarLaw k_of_u = ScalarLaw::constant(1.0);
  std::vector<double> u_boundary;
};

struct KirchhoffResult {
  ConductivityField field;
  Potential temperature;
  Potential kirchhoff_potential;  ///< w = int_0^u k
  double heat_residual = 0.0;     ///< relative residual of the w-Laplacian rebuilt from u
};

/// Bisection tolerance on w for the nodal Kirchhoff inversion.
inline constexpr double kKirchhoffInversionTol = 1e-12;

/// Solves div(k(u) grad u) = 0 through w = int_0^u k, then samples sigma(u) at
/// cell centres (mean of the cell's nodal temperatures).
KirchhoffResult kirchhoff_conductivity(const Grid& grid, const MaterialLaws& laws, const SolveOptions& options = {});

/// Per cell R diag(e) R^T with a random rotation R and eigenvalues drawn from
/// [lambda, lambda * anisotropy]. Deterministic per seed.
ConductivityField random_spd_field(const Grid& grid, double lambda, double anisotropy, std::uint64_t seed);

}  // namespace recip
