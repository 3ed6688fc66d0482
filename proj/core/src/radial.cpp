#include "ionlab/radial.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "ionlab/errors.hpp"

namespace ionlab {

namespace {

constexpr double kFourPi = 4.0 * std::numbers::pi;

// dG/dx for samples of G on a uniform grid of spacing h, second order
// everywhere (one-sided at the ends).
std::vector<double> uniform_derivative(std::span<const double> g, double h) {
  const std::size_t n = g.size();
  std::vector<double> d(n);
  for (std::size_t i = 1; i + 1 < n; ++i) d[i] = (g[i + 1] - g[i - 1]) / (2 * h);
  d[0] = (-3 * g[0] + 4 * g[1] - g[2]) / (2 * h);
  d[n - 1] = (3 * g[n - 1] - 4 * g[n - 2] + g[n - 3]) / (2 * h);
  return d;
}

// Corrected trapezoid for int_{x_0}^{x_k} G dx, k = 0..n-1. The h^2/12
// end-point correction telescopes, giving fourth-order running sums.
std::vector<double> running_log_integral(const RadialGrid& grid,
                                         std::span<const double> g) {
  const std::size_t n = grid.size();
  const double h = grid.log_step();
  std::vector<double> big(n);
  for (std::size_t i = 0; i < n; ++i) big[i] = g[i] * grid.r(i);
  const auto dbig = uniform_derivative(big, h);
  std::vector<double> out(n, 0.0);
  long double acc = 0.0L;
  for (std::size_t k = 1; k < n; ++k) {
    acc += 0.5L * h * (static_cast<long double>(big[k - 1]) + big[k]);
    out[k] = static_cast<double>(acc - h * h / 12.0L * (dbig[k] - dbig[0]));
  }
  return out;
}

// int_{x_k}^{x_{n-1}} G dx accumulated from the outer end, same correction.
// Extended precision: far-tail potentials are differences at the 1e-16 level.
std::vector<long double> reverse_log_integral(const RadialGrid& grid,
                                              std::span<const double> g) {
  const std::size_t n = grid.size();
  const double h = grid.log_step();
  std::vector<double> big(n);
  for (std::size_t i = 0; i < n; ++i) big[i] = g[i] * grid.r(i);
  const auto dbig = uniform_derivative(big, h);
  std::vector<long double> out(n, 0.0L);
  long double acc = 0.0L;
  for (std::size_t k = n - 1; k-- > 0;) {
    acc += 0.5L * h * (static_cast<long double>(big[k]) + big[k + 1]);
    out[k] = acc - h * h / 12.0L * (dbig[n - 1] - dbig[k]);
  }
  return out;
}

struct Shells {
  std::vector<long double> mass_outside;       // int_{|y|>r} rho
  std::vector<long double> potential_outside;  // int_{|y|>r} rho/|y|
  long double total = 0.0L;
};

Shells outer_shells(const RadialGrid& grid, std::span<const double> rho, bool clamp) {
  const std::size_t n = grid.size();
  std::vector<double> m(n), p(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double r = grid.r(i);
    m[i] = kFourPi * r * r * rho[i];
    p[i] = kFourPi * r * rho[i];
  }
  Shells s;
  s.mass_outside = reverse_log_integral(grid, m);
  s.potential_outside = reverse_log_integral(grid, p);
  s.total = s.mass_outside[0] + static_cast<long double>(grid.r_min()) * m[0];
  if (clamp) {
    for (std::size_t i = 0; i < n; ++i) {
      s.mass_outside[i] = std::max(s.mass_outside[i], 0.0L);
      s.potential_outside[i] = std::max(s.potential_outside[i], 0.0L);
    }
  }
  return s;
}

void check_density(const RadialField& rho, const char* where) {
  for (double v : rho.values()) {
    if (!(v >= -kDensityNegativeTolerance)) {
      throw DomainError(std::string(where) + ": density has negative entries");
    }
  }
}

}  // namespace

RadialGrid::RadialGrid(double r_min, double r_max, std::size_t n) {
  if (!(r_min > 0.0) || !(r_max > r_min) || !std::isfinite(r_max)) {
    throw ParameterError("make_log_grid: need 0 < r_min < r_max");
  }
  if (n < kMinPoints) {
    throw ParameterError("make_log_grid: need at least 16 points");
  }
  log_step_ = std::log(r_max / r_min) / static_cast<double>(n - 1);
  points_.resize(n);
  weights_.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    points_[i] = r_min * std::exp(log_step_ * static_cast<double>(i));
    weights_[i] = log_step_ * points_[i];
  }
  points_.back() = r_max;
  weights_.back() = 0.5 * log_step_ * r_max;
  weights_.front() = 0.5 * log_step_ * r_min + r_min;
}

RadialGrid RadialGrid::scaled(double factor) const {
  if (!(factor > 0.0)) throw ParameterError("RadialGrid::scaled: factor must be positive");
  return RadialGrid(r_min() * factor, r_max() * factor, size());
}

double RadialGrid::exp_quadrature_error() const {
  double s = 0.0;
  for (std::size_t i = 0; i < size(); ++i) s += weights_[i] * std::exp(-points_[i]);
  return std::abs(s - 1.0);
}

std::size_t RadialGrid::lower_index(double r) const {
  return static_cast<std::size_t>(
      std::lower_bound(points_.begin(), points_.end(), r) - points_.begin());
}

std::string RadialGrid::describe() const {
  std::ostringstream os;
  os.precision(6);
  os << "log[" << r_min() << "," << r_max() << "]x" << size();
  return os.str();
}

GridPtr make_log_grid(double r_min, double r_max, std::size_t n) {
  return std::make_shared<const RadialGrid>(r_min, r_max, n);
}

GridPtr default_grid() { return make_log_grid(1e-4, 1e2, 2000); }

RadialField::RadialField(GridPtr grid, std::vector<double> values, FieldKind kind)
    : grid_(std::move(grid)), values_(std::move(values)), kind_(kind) {
  if (!grid_) throw ParameterError("RadialField: null grid");
  if (values_.size() != grid_->size()) {
    throw ParameterError("RadialField: value count does not match grid size");
  }
  if (kind_ != FieldKind::generic) check_density(*this, "RadialField");
}

RadialField::RadialField(GridPtr grid, FieldKind kind)
    : RadialField(grid, std::vector<double>(grid ? grid->size() : 0, 0.0), kind) {}

double RadialField::at(double r) const {
  const auto& g = *grid_;
  if (r <= g.r_min()) return values_.front();
  if (r > g.r_max()) return 0.0;
  const std::size_t hi = std::min(g.lower_index(r), g.size() - 1);
  const std::size_t lo = hi - 1;
  const double t = std::log(r / g.r(lo)) / g.log_step();
  return (1 - t) * values_[lo] + t * values_[hi];
}

double integrate_3d(const RadialField& f, int radial_power) {
  if (radial_power < -2) {
    throw ParameterError("integrate_3d: radial power must be >= -2");
  }
  const auto& g = f.grid();
  double s = 0.0;
  for (std::size_t i = 0; i < g.size(); ++i) {
    s += g.w(i) * std::pow(g.r(i), 2 + radial_power) * f[i];
  }
  return kFourPi * s;
}

std::vector<double> cumulative_integral(const RadialGrid& grid,
                                        std::span<const double> g) {
  if (g.size() != grid.size()) {
    throw ParameterError("cumulative_integral: size mismatch");
  }
  auto out = running_log_integral(grid, g);
  const double cap = grid.r_min() * g[0];
  for (double& v : out) v += cap;
  return out;
}

namespace {

std::vector<double> newton_shells(const RadialGrid& grid, std::span<const double> rho,
                                  bool clamp) {
  const auto sh = outer_shells(grid, rho, clamp);
  std::vector<double> phi(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const long double enclosed = sh.total - sh.mass_outside[i];
    phi[i] = static_cast<double>(enclosed / grid.r(i) + sh.potential_outside[i]);
  }
  return phi;
}

}  // namespace

RadialField newton_potential(const RadialField& rho) {
  check_density(rho, "newton_potential");
  return RadialField(rho.grid_ptr(), newton_shells(rho.grid(), rho.values(), true));
}

std::vector<double> newton_potential_signed(const RadialGrid& grid,
                                            std::span<const double> charge) {
  if (charge.size() != grid.size()) {
    throw ParameterError("newton_potential_signed: size mismatch");
  }
  return newton_shells(grid, charge, false);
}

RadialField screened_potential(double Z, const RadialField& rho) {
  check_density(rho, "screened_potential");
  const auto& grid = rho.grid();
  const auto sh = outer_shells(grid, rho.values(), true);
  const long double net = Z - sh.total;
  std::vector<double> phi(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const long double r = grid.r(i);
    phi[i] = static_cast<double>((net + sh.mass_outside[i]) / r - sh.potential_outside[i]);
  }
  return RadialField(rho.grid_ptr(), std::move(phi));
}

double total_charge(const RadialField& rho) {
  return static_cast<double>(outer_shells(rho.grid(), rho.values(), true).total);
}

std::vector<double> ReducedOperator::apply(std::span<const double> phi) const {
  const std::size_t n = size();
  if (phi.size() != n) throw ParameterError("ReducedOperator::apply: size mismatch");
  Eigen::VectorXd psi(static_cast<Eigen::Index>(n));
  for (std::size_t i = 0; i < n; ++i) psi[static_cast<Eigen::Index>(i)] = std::sqrt(grid->w(i)) * phi[i];
  const Eigen::VectorXd out = matrix * psi;
  std::vector<double> res(n);
  for (std::size_t i = 0; i < n; ++i) res[i] = out[static_cast<Eigen::Index>(i)] / std::sqrt(grid->w(i));
  return res;
}

double ReducedOperator::asymmetry() const {
  const Eigen::SparseMatrix<double> d = matrix - Eigen::SparseMatrix<double>(matrix.transpose());
  double m = 0.0;
  for (int k = 0; k < d.outerSize(); ++k) {
    for (Eigen::SparseMatrix<double>::InnerIterator it(d, k); it; ++it) {
      m = std::max(m, std::abs(it.value()));
    }
  }
  return m;
}

ReducedOperator ReducedOperator::transpose() const {
  return {grid, Eigen::SparseMatrix<double>(matrix.transpose())};
}

ReducedOperator operator+(const ReducedOperator& a, const ReducedOperator& b) {
  return {a.grid, a.matrix + b.matrix};
}
ReducedOperator operator-(const ReducedOperator& a, const ReducedOperator& b) {
  return {a.grid, a.matrix - b.matrix};
}
ReducedOperator operator*(const ReducedOperator& a, const ReducedOperator& b) {
  return {a.grid, Eigen::SparseMatrix<double>(a.matrix * b.matrix)};
}
ReducedOperator operator*(double s, const ReducedOperator& a) {
  return {a.grid, s * a.matrix};
}
ReducedOperator commutator(const ReducedOperator& a, const ReducedOperator& b) {
  return a * b - b * a;
}

ReducedOperator identity_operator(GridPtr grid) {
  const auto n = static_cast<Eigen::Index>(grid->size());
  Eigen::SparseMatrix<double> m(n, n);
  m.setIdentity();
  return {std::move(grid), std::move(m)};
}

ReducedOperator reduced_laplacian(GridPtr grid) {
  const auto& g = *grid;
  const std::size_t n = g.size();
  if (n < RadialGrid::kMinPoints) throw ParameterError("reduced_laplacian: grid too small");
  // Stiffness of -d^2/dr^2 with phi(0) = 0 and phi(r_max e^h) = 0.
  std::vector<double> inv_gap(n + 1);
  inv_gap[0] = 1.0 / g.r(0);
  for (std::size_t i = 1; i < n; ++i) inv_gap[i] = 1.0 / (g.r(i) - g.r(i - 1));
  inv_gap[n] = 1.0 / (g.r(n - 1) * std::expm1(g.log_step()));

  std::vector<Eigen::Triplet<double>> trip;
  trip.reserve(3 * n);
  for (std::size_t i = 0; i < n; ++i) {
    const auto ii = static_cast<int>(i);
    const double si = std::sqrt(g.w(i));
    trip.emplace_back(ii, ii, (inv_gap[i] + inv_gap[i + 1]) / g.w(i));
    if (i + 1 < n) {
      const double off = -inv_gap[i + 1] / (si * std::sqrt(g.w(i + 1)));
      trip.emplace_back(ii, ii + 1, off);
      trip.emplace_back(ii + 1, ii, off);
    }
  }
  const auto nn = static_cast<Eigen::Index>(n);
  Eigen::SparseMatrix<double> m(nn, nn);
  m.setFromTriplets(trip.begin(), trip.end());
  return {std::move(grid), std::move(m)};
}

ReducedOperator multiplication_operator(const RadialField& g) {
  const auto n = static_cast<Eigen::Index>(g.size());
  Eigen::SparseMatrix<double> m(n, n);
  std::vector<Eigen::Triplet<double>> trip;
  trip.reserve(g.size());
  for (Eigen::Index i = 0; i < n; ++i) trip.emplace_back(i, i, g[static_cast<std::size_t>(i)]);
  m.setFromTriplets(trip.begin(), trip.end());
  return {g.grid_ptr(), std::move(m)};
}

}  // namespace ionlab
