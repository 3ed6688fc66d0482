#pragma once

#include <cstddef>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include <Eigen/SparseCore>

namespace ionlab {

/// Logarithmic radial grid r_i = r_min * exp(i * h) with quadrature weights
/// for integrals over (0, infinity).
///
/// The weights are the trapezoidal rule in x = log r (w_i = h * r_i, halved at
/// both ends) plus a cap r_0 on the first node that accounts for [0, r_min]
/// with the integrand frozen at g(r_0).
class RadialGrid {
 public:
  static constexpr std::size_t kMinPoints = 16;

  RadialGrid(double r_min, double r_max, std::size_t n);

  std::size_t size() const noexcept { return points_.size(); }
  std::span<const double> points() const noexcept { return points_; }
  std::span<const double> weights() const noexcept { return weights_; }
  double r(std::size_t i) const { return points_[i]; }
  double w(std::size_t i) const { return weights_[i]; }
  double r_min() const noexcept { return points_.front(); }
  double r_max() const noexcept { return points_.back(); }
  /// Uniform spacing in log r.
  double log_step() const noexcept { return log_step_; }

  /// Same grid with every length multiplied by `factor`.
  RadialGrid scaled(double factor) const;

  /// |quadrature of e^{-r} - 1|, the grid's self-reported accuracy.
  double exp_quadrature_error() const;

  /// Index of the first node with r_i >= r (size() if none).
  std::size_t lower_index(double r) const;

  std::string describe() const;

 private:
  std::vector<double> points_;
  std::vector<double> weights_;
  double log_step_;
};

using GridPtr = std::shared_ptr<const RadialGrid>;

GridPtr make_log_grid(double r_min, double r_max, std::size_t n);

/// Default grid: [1e-4, 1e2] with 2000 points.
GridPtr default_grid();

enum class FieldKind { generic, density, orbital_squared };

/// Samples f(r_i) of a spherically symmetric function f(|x|).
class RadialField {
 public:
  RadialField(GridPtr grid, std::vector<double> values,
              FieldKind kind = FieldKind::generic);

  /// Zero field on `grid`.
  explicit RadialField(GridPtr grid, FieldKind kind = FieldKind::generic);

  template <class F>
  static RadialField from_function(GridPtr grid, F&& f,
                                   FieldKind kind = FieldKind::generic) {
    std::vector<double> v(grid->size());
    for (std::size_t i = 0; i < v.size(); ++i) v[i] = f(grid->r(i));
    return RadialField(std::move(grid), std::move(v), kind);
  }

  const RadialGrid& grid() const noexcept { return *grid_; }
  const GridPtr& grid_ptr() const noexcept { return grid_; }
  std::span<const double> values() const noexcept { return values_; }
  const std::vector<double>& vector() const noexcept { return values_; }
  double operator[](std::size_t i) const { return values_[i]; }
  std::size_t size() const noexcept { return values_.size(); }
  FieldKind kind() const noexcept { return kind_; }

  /// Linear interpolation in log r; 0 beyond r_max, f(r_0) below r_min.
  double at(double r) const;

 private:
  GridPtr grid_;
  std::vector<double> values_;
  FieldKind kind_;
};

/// Tolerance below zero accepted for density-tagged fields.
inline constexpr double kDensityNegativeTolerance = 1e-12;

/// int_{R^3} f(|x|) |x|^p dx = 4 pi sum_i w_i r_i^{2+p} f(r_i).
double integrate_3d(const RadialField& f, int radial_power = 0);

/// Coulomb potential of a radial density by Newton's theorem,
/// Phi(r) = (1/r) int_{|y|<r} rho + int_{|y|>r} rho(y)/|y| dy.
RadialField newton_potential(const RadialField& rho);

/// Newton potential of a signed radial charge (linear, no sign checks).
std::vector<double> newton_potential_signed(const RadialGrid& grid,
                                            std::span<const double> charge);

/// Z/r - (rho * 1/|x|)(r), written as (Z - M)/r + int_{|y|>r} rho (1/r - 1/|y|)
/// so that the far tail keeps relative precision.
RadialField screened_potential(double Z, const RadialField& rho);

/// int rho over R^3 with the same running rule as newton_potential.
double total_charge(const RadialField& rho);

/// Running integrals int_0^{r_i} g(s) ds on a grid (4th-order corrected
/// trapezoid in log r, plus the same [0, r_0] cap as the weights).
std::vector<double> cumulative_integral(const RadialGrid& grid,
                                        std::span<const double> g);

/// Symmetric operator on reduced radial functions phi = r f, stored in the
/// orthonormal basis psi_i = sqrt(w_i) phi_i so that the discrete inner
/// product sum_i w_i phi_i chi_i becomes the Euclidean one.
struct ReducedOperator {
  GridPtr grid;
  Eigen::SparseMatrix<double> matrix;

  std::size_t size() const { return static_cast<std::size_t>(matrix.rows()); }

  /// Acts on phi given as grid samples: W^{-1/2} M W^{1/2} phi.
  std::vector<double> apply(std::span<const double> phi) const;

  /// Largest |M - M^T| entry.
  double asymmetry() const;

  ReducedOperator transpose() const;
};

ReducedOperator operator+(const ReducedOperator& a, const ReducedOperator& b);
ReducedOperator operator-(const ReducedOperator& a, const ReducedOperator& b);
ReducedOperator operator*(const ReducedOperator& a, const ReducedOperator& b);
ReducedOperator operator*(double s, const ReducedOperator& a);
/// a*b - b*a
ReducedOperator commutator(const ReducedOperator& a, const ReducedOperator& b);
ReducedOperator identity_operator(GridPtr grid);

/// -d^2/dr^2 with phi = 0 at r = 0 and one log step beyond r_max.
ReducedOperator reduced_laplacian(GridPtr grid);

/// Diagonal operator g(r_i).
ReducedOperator multiplication_operator(const RadialField& g);

}  // namespace ionlab
