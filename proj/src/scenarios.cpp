#include "recip/scenarios.hpp"

#include "recip/detail/text.hpp"

#include <Eigen/QR>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <random>

namespace recip {

ScalarLaw ScalarLaw::constant(double c) {
  ScalarLaw law;
  law.kind_ = Kind::constant;
  law.c0_ = c;
  return law;
}

ScalarLaw ScalarLaw::affine(double c0, double c1) {
  ScalarLaw law;
  law.kind_ = Kind::affine;
  law.c0_ = c0;
  law.c1_ = c1;
  return law;
}

ScalarLaw ScalarLaw::exponential(double c0, double c1) {
  ScalarLaw law;
  law.kind_ = Kind::exponential;
  law.c0_ = c0;
  law.c1_ = c1;
  return law;
}

ScalarLaw ScalarLaw::table(std::vector<double> u, std::vector<double> values) {
  if (u.size() < 2 || u.size() != values.size()) throw InvalidArgument("a law table needs at least two (u, value) rows");
  for (std::size_t i = 1; i < u.size(); ++i)
    if (!(u[i] > u[i - 1])) throw InvalidArgument("law table temperatures must increase strictly");
  ScalarLaw law;
  law.kind_ = Kind::table;
  law.u_ = std::move(u);
  law.v_ = std::move(values);
  return law;
}

ScalarLaw ScalarLaw::parse(const std::string& spec) {
  const auto colon = spec.find(':');
  const std::string name{detail::trim(spec.substr(0, colon))};
  const auto params = colon == std::string::npos ? std::vector<double>{} : detail::parse_doubles(spec.substr(colon + 1));
  if (name == "constant" && params.size() == 1) return constant(params[0]);
  if (name == "affine" && params.size() == 2) return affine(params[0], params[1]);
  if (name == "exponential" && params.size() == 2) return exponential(params[0], params[1]);
  throw InvalidArgument("unknown material law '" + spec + "'");
}

ScalarLaw ScalarLaw::from_table_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InvalidArgument("cannot open law table '" + path + "'");
  std::vector<double> u, v;
  std::string line;
  while (std::getline(in, line)) {
    const auto body = detail::trim(line);
    if (body.empty() || body.front() == '#') continue;
    auto parts = detail::split(body, body.find(',') != std::string_view::npos ? ',' : ' ');
    parts.erase(std::remove_if(parts.begin(), parts.end(), [](auto p) { return p.empty(); }), parts.end());
    if (parts.size() != 2) throw InvalidArgument("law table rows need two columns");
    u.push_back(detail::parse_double(parts[0]));
    v.push_back(detail::parse_double(parts[1]));
  }
  return table(std::move(u), std::move(v));
}

double ScalarLaw::operator()(double u) const {
  switch (kind_) {
    case Kind::constant: return c0_;
    case Kind::affine: return c0_ + c1_ * u;
    case Kind::exponential: return c0_ * std::exp(c1_ * u);
    case Kind::table: {
      // Linear interpolation, constant extension beyond the ends.
      if (u <= u_.front()) return v_.front();
      if (u >= u_.back()) return v_.back();
      const auto it = std::upper_bound(u_.begin(), u_.end(), u);
      const auto i = static_cast<std::size_t>(it - u_.begin()) - 1;
      const double t = (u - u_[i]) / (u_[i + 1] - u_[i]);
      return v_[i] + t * (v_[i + 1] - v_[i]);
    }
  }
  return 0.0;
}

namespace {

// Integral of the table law from 0 to u with exact trapezoids on each linear piece.
double table_integral(const std::vector<double>& us, const ScalarLaw& law, double u) {
  std::vector<double> knots{0.0, u};
  for (double k : us)
    if (k > std::min(0.0, u) && k < std::max(0.0, u)) knots.push_back(k);
  std::sort(knots.begin(), knots.end());
  double s = 0.0;
  for (std::size_t i = 1; i < knots.size(); ++i)
    s += 0.5 * (law(knots[i - 1]) + law(knots[i])) * (knots[i] - knots[i - 1]);
  return u >= 0.0 ? s : -s;
}

}  // namespace

double ScalarLaw::integral(double u) const {
  switch (kind_) {
    case Kind::constant: return c0_ * u;
    case Kind::affine: return c0_ * u + 0.5 * c1_ * u * u;
    case Kind::exponential: return c1_ == 0.0 ? c0_ * u : c0_ / c1_ * std::expm1(c1_ * u);
    case Kind::table: return table_integral(u_, *this, u);
  }
  return 0.0;
}

double ScalarLaw::min_on(double lo, double hi) const {
  double m = std::min((*this)(lo), (*this)(hi));
  if (kind_ == Kind::table)
    for (double k : u_)
      if (k > lo && k < hi) m = std::min(m, (*this)(k));
  return m;
}

KirchhoffResult kirchhoff_conductivity(const Grid& grid, const MaterialLaws& laws, const SolveOptions& options) {
  const auto faces = static_cast<std::size_t>(2 * grid.dim());
  if (laws.u_boundary.size() != faces) throw InvalidArgument("boundary temperature needs one value per face");
  const auto [u_lo_it, u_hi_it] = std::minmax_element(laws.u_boundary.begin(), laws.u_boundary.end());
  const double u_lo = *u_lo_it, u_hi = *u_hi_it;
  if (!(laws.k_of_u.min_on(u_lo, u_hi) > 0.0))
    throw InvalidArgument("k(u) must be positive on the boundary temperature range (Kirchhoff map not monotone)");
  if (!(laws.sigma_of_u.min_on(u_lo, u_hi) > 0.0))
    throw InvalidArgument("sigma(u) must be positive on the boundary temperature range");

  // Boundary data in w; nodes on several faces take the mean of their faces.
  Eigen::VectorXd w_full = Eigen::VectorXd::Zero(grid.node_count());
  for (Index n = 0; n < grid.node_count(); ++n) {
    const IndexTuple t = grid.index_tuple(n);
    double sum = 0.0;
    int count = 0;
    for (int axis = 0; axis < grid.dim(); ++axis) {
      if (t[axis] == 0) sum += laws.u_boundary[2 * axis], ++count;
      if (t[axis] == grid.resolution(axis) + 1) sum += laws.u_boundary[2 * axis + 1], ++count;
    }
    if (count > 0) w_full[n] = laws.k_of_u.integral(sum / count);
  }

  const ConductivityField unit = make_scalar_field(grid, std::vector<double>(static_cast<std::size_t>(grid.cell_count()), 1.0));
  const DiscreteOperator laplace = assemble(unit);
  const SolveResult interior = solve_dirichlet(laplace, laplace.boundary_lift(w_full), options);
  Eigen::VectorXd w = interior.potential.values;
  for (Index n = 0; n < grid.node_count(); ++n)
    if (grid.is_boundary(n)) w[n] = w_full[n];

  // Invert w = K(u) by bisection; the discrete maximum principle keeps u in [u_lo, u_hi].
  const double w_lo = laws.k_of_u.integral(u_lo);
  const double w_hi = laws.k_of_u.integral(u_hi);
  Eigen::VectorXd u(grid.node_count());
  for (Index n = 0; n < grid.node_count(); ++n) {
    const double target = std::clamp(w[n], w_lo, w_hi);
    double lo = u_lo, hi = u_hi;
    int steps = 0;
    while (hi - lo > 0.0 && steps < 200) {
      const double mid = 0.5 * (lo + hi);
      const double f = laws.k_of_u.integral(mid) - target;
      if (std::abs(f) <= kKirchhoffInversionTol) {
        lo = hi = mid;
        break;
      }
      (f < 0.0 ? lo : hi) = mid;
      ++steps;
    }
    const double root = 0.5 * (lo + hi);
    if (std::abs(laws.k_of_u.integral(root) - target) > 10.0 * kKirchhoffInversionTol + 1e-15 * std::abs(target))
      throw NumericalFailure("Kirchhoff inversion failed to converge");
    u[n] = root;
  }

  // Check in u: rebuild w from the recovered temperature and apply the Laplacian.
  Eigen::VectorXd w_rebuilt(grid.node_count());
  for (Index n = 0; n < grid.node_count(); ++n) w_rebuilt[n] = laws.k_of_u.integral(u[n]);
  const Eigen::VectorXd lift = laplace.boundary_lift(w_rebuilt);
  const Potential rebuilt{grid, w_rebuilt};
  const Eigen::VectorXd residual = laplace.matrix() * rebuilt.interior() - lift;
  const double lift_norm = lift.norm();
  const double heat_residual = lift_norm > 0.0 ? residual.norm() / lift_norm : residual.norm();

  std::vector<double> sigma(static_cast<std::size_t>(grid.cell_count()));
  const int corners = 1 << grid.dim();
  for (Index c = 0; c < grid.cell_count(); ++c) {
    const IndexTuple ct = grid.cell_tuple(c);
    double mean = 0.0;
    for (int v = 0; v < corners; ++v) {
      IndexTuple nt = ct;
      for (int k = 0; k < grid.dim(); ++k) nt[k] += (v >> k) & 1;
      mean += u[grid.linear_index(nt)];
    }
    sigma[static_cast<std::size_t>(c)] = laws.sigma_of_u(mean / corners);
  }

  return KirchhoffResult{make_scalar_field(grid, sigma), Potential{grid, u}, Potential{grid, w}, heat_residual};
}

ConductivityField random_spd_field(const Grid& grid, double lambda, double anisotropy, std::uint64_t seed) {
  if (!(lambda > 0.0)) throw InvalidArgument("lambda must be positive");
  if (!(anisotropy >= 1.0)) throw InvalidArgument("anisotropy ratio must be at least 1");
  const int dim = grid.dim();
  std::vector<Tensor> tensors;
  tensors.reserve(static_cast<std::size_t>(grid.cell_count()));
  if (anisotropy == 1.0) {
    tensors.assign(static_cast<std::size_t>(grid.cell_count()), Tensor::identity(lambda));
    return ConductivityField(grid, std::move(tensors), lambda);
  }

  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> eig(lambda, lambda * anisotropy);
  std::normal_distribution<double> normal(0.0, 1.0);
  for (Index c = 0; c < grid.cell_count(); ++c) {
    Eigen::MatrixXd gaussian(dim, dim);
    for (Index i = 0; i < dim; ++i)
      for (Index j = 0; j < dim; ++j) gaussian(i, j) = normal(rng);
    const Eigen::MatrixXd rotation = Eigen::HouseholderQR<Eigen::MatrixXd>(gaussian).householderQ();
    Eigen::VectorXd values(dim);
    for (Index i = 0; i < dim; ++i) values[i] = eig(rng);
    const Eigen::MatrixXd m = rotation * values.asDiagonal() * rotation.transpose();
    tensors.push_back(Tensor::from_matrix(m));
  }
  return ConductivityField(grid, std::move(tensors), lambda);
}

}  // namespace recip
