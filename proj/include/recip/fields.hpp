#pragma once

#include "recip/grid.hpp"

#include <Eigen/Core>

#include <array>
#include <functional>
#include <iosfwd>
#include <span>
#include <vector>

namespace recip {

/// Symmetric 3x3 tensor stored as its upper triangle (a11 a12 a13 a22 a23 a33).
/// Symmetry is structural: there is no way to write a_ij != a_ji.
template <typename Scalar>
class SymmetricTensor {
public:
  using Matrix3 = Eigen::Matrix<Scalar, 3, 3>;

  SymmetricTensor() { upper_.fill(Scalar(0)); }

  static SymmetricTensor identity(Scalar s = Scalar(1)) {
    SymmetricTensor t;
    t.upper_[0] = t.upper_[3] = t.upper_[5] = s;
    return t;
  }

  /// Reads the upper triangle of `m`; the lower triangle is ignored.
  template <typename Derived>
  static SymmetricTensor from_matrix(const Eigen::MatrixBase<Derived>& m) {
    SymmetricTensor t;
    for (Index i = 0; i < m.rows(); ++i)
      for (Index j = i; j < m.cols(); ++j) t.set(static_cast<int>(i), static_cast<int>(j), m(i, j));
    return t;
  }

  Scalar operator()(int i, int j) const { return upper_[slot(i, j)]; }
  void set(int i, int j, Scalar v) { upper_[slot(i, j)] = v; }

  /// Leading dim x dim block as a dense matrix.
  Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> block(int dim) const {
    Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> m(dim, dim);
    for (int i = 0; i < dim; ++i)
      for (int j = 0; j < dim; ++j) m(i, j) = (*this)(i, j);
    return m;
  }

  const std::array<Scalar, 6>& upper() const { return upper_; }
  std::array<Scalar, 6>& upper() { return upper_; }

  bool is_diagonal(int dim) const {
    for (int i = 0; i < dim; ++i)
      for (int j = i + 1; j < dim; ++j)
        if ((*this)(i, j) != Scalar(0)) return false;
    return true;
  }

  friend bool operator==(const SymmetricTensor&, const SymmetricTensor&) = default;

private:
  static int slot(int i, int j) {
    if (i > j) std::swap(i, j);
    static constexpr int table[3][3] = {{0, 1, 2}, {1, 3, 4}, {2, 4, 5}};
    return table[i][j];
  }

  std::array<Scalar, 6> upper_;
};

using Tensor = SymmetricTensor<double>;

/// Per-cell symmetric conductivity tensors with a declared ellipticity constant.
class ConductivityField {
public:
  ConductivityField(Grid grid, std::vector<Tensor> tensors, double lambda);

  const Grid& grid() const { return grid_; }
  double lambda() const { return lambda_; }
  const Tensor& tensor(Index cell) const { return tensors_[static_cast<std::size_t>(cell)]; }
  const std::vector<Tensor>& tensors() const { return tensors_; }

  /// True when every cell tensor has zero off-diagonal entries.
  bool is_diagonal() const;

  ConductivityField scaled(double factor) const;

private:
  Grid grid_;
  std::vector<Tensor> tensors_;
  double lambda_;
};

/// a_ij = sigma * delta_ij per cell; lambda = min sigma.
ConductivityField make_scalar_field(const Grid& grid, std::span<const double> sigma);
ConductivityField make_scalar_field(const Grid& grid, const std::function<double(const Point&)>& sigma);
ConductivityField make_uniform_field(const Grid& grid, const Tensor& tensor, double lambda);

struct ValidationReport {
  bool passed = false;
  bool symmetric = true;
  bool finite = true;
  double min_eigenvalue = 0.0;
  Index failing_cells = 0;
  std::vector<double> cell_min_eigenvalues;
};

/// Relative slack allowed when comparing computed eigenvalues with lambda.
inline constexpr double kEigenvalueSlack = 1e-12;

ValidationReport validate_tensor(const ConductivityField& field);

/// Smallest eigenvalue of the leading dim x dim block.
double min_eigenvalue(const Tensor& t, int dim);

/// Entrywise convolution with a tensor-product hat kernel. Along each axis the
/// kernel weight at offset d is max(0, 1 - |d| / (width + h)), renormalised over
/// the cells that fall inside the domain. Width 0 returns the field unchanged.
ConductivityField mollify(const ConductivityField& field, double width);

/// Node-indexed scalar field over the whole lattice, boundary nodes included.
struct Potential {
  Grid grid;
  Eigen::VectorXd values;

  static Potential zero(const Grid& g) { return {g, Eigen::VectorXd::Zero(g.node_count())}; }

  /// Scatters interior unknowns into a full field with zero boundary values.
  static Potential from_interior(const Grid& g, const Eigen::VectorXd& interior);

  Eigen::VectorXd interior() const;

  double at(const NodeRef& n) const { return values[n.linear]; }
  double at(const IndexTuple& t) const { return values[grid.linear_index(t)]; }
};

/// CSV: node coordinates per active axis, then the value.
void write_potential_csv(std::ostream& out, const Potential& u);

/// CSV: cell index per active axis, then a_11, a_12, ... for the active block.
void write_field_csv(std::ostream& out, const ConductivityField& field);

}  // namespace recip
