#include "ionlab/hartree.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <optional>

#include "ionlab/band_eigen.hpp"
#include "ionlab/errors.hpp"
#include "ionlab/parallel.hpp"

namespace ionlab {

namespace {

constexpr double kFourPi = 4.0 * std::numbers::pi;
constexpr double kLiebOxford = 1.68;

struct Mesh {
  std::vector<double> sw;    // sqrt(w_i)
  std::vector<double> diag;  // reduced -d^2/dr^2
  std::vector<double> off;
};

Mesh make_mesh(const GridPtr& grid) {
  const auto a = reduced_laplacian(grid);
  const std::size_t n = grid->size();
  Mesh m;
  m.sw.resize(n);
  m.diag.resize(n);
  m.off.resize(n - 1);
  for (std::size_t i = 0; i < n; ++i) {
    const auto k = static_cast<Eigen::Index>(i);
    m.sw[i] = std::sqrt(grid->w(i));
    m.diag[i] = a.matrix.coeff(k, k);
    if (i + 1 < n) m.off[i] = a.matrix.coeff(k, k + 1);
  }
  return m;
}

// |w|^2 on the grid for a unit vector psi in the sqrt(w)-weighted basis.
std::vector<double> density_of(const RadialGrid& g, const Eigen::VectorXd& psi, double mass) {
  std::vector<double> rho(g.size());
  for (std::size_t i = 0; i < g.size(); ++i) {
    const double p = psi[static_cast<Eigen::Index>(i)];
    rho[i] = mass * p * p / (kFourPi * g.w(i) * g.r(i) * g.r(i));
  }
  return rho;
}

double l1_change(const RadialGrid& g, const std::vector<double>& a,
                 const std::vector<double>& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < g.size(); ++i) s += g.w(i) * g.r(i) * g.r(i) * std::abs(a[i] - b[i]);
  return kFourPi * s;
}

}  // namespace

GridPtr hartree_grid(std::size_t n) { return make_log_grid(1e-4, 200.0, n); }

double radial_kinetic(const RadialField& f) {
  const auto& g = f.grid();
  const auto a = reduced_laplacian(f.grid_ptr());
  Eigen::VectorXd psi(static_cast<Eigen::Index>(g.size()));
  for (std::size_t i = 0; i < g.size(); ++i) {
    psi[static_cast<Eigen::Index>(i)] = std::sqrt(g.w(i)) * g.r(i) * f[i];
  }
  return kFourPi * psi.dot(a.matrix * psi);
}

double coulomb_pairing(const RadialField& f, const RadialField& g) {
  const auto phi = newton_potential(g);
  std::vector<double> prod(f.size());
  for (std::size_t i = 0; i < f.size(); ++i) prod[i] = f[i] * phi[i];
  return integrate_3d(RadialField(f.grid_ptr(), std::move(prod)));
}

HartreeState solve_hartree_fixed_mass(double Z, double coupling, double mass,
                                      const GridPtr& grid, const HartreeOptions& opts) {
  if (!grid) throw ParameterError("hartree: null grid");
  if (!(mass > 0.0) || !std::isfinite(mass)) throw ParameterError("hartree: mass must be positive");
  if (!(Z > 0.0) || !(coupling >= 0.0)) throw ParameterError("hartree: need Z > 0, coupling >= 0");
  if (!(opts.tol > 0.0) || opts.max_iterations < 1 || !(opts.mixing > 0.0 && opts.mixing <= 1.0)) {
    throw ParameterError("hartree: bad solver options");
  }
  const auto& g = *grid;
  const std::size_t n = g.size();
  const Mesh mesh = make_mesh(grid);

  // Optimal damping: the energy of the mixed state (1 - a) gamma_in + a gamma_out
  // is quadratic in a, so each step takes the exact minimizer on the segment.
  std::vector<double> rho(n, 0.0);
  std::vector<double> pot(n, 0.0);
  double lin_in = 0.0;  // kinetic + nuclear part of gamma_in, linear in gamma
  Eigen::VectorXd psi;
  double change = 0.0;
  int it = 0;
  for (;;) {
    ++it;
    std::vector<double> diag = mesh.diag;
    for (std::size_t i = 0; i < n; ++i) diag[i] += -Z / g.r(i);
    std::vector<double> full = diag;
    for (std::size_t i = 0; i < n; ++i) full[i] += coupling * pot[i];
    auto pair = tridiagonal_lowest(full, mesh.off, 1);
    psi = pair.vectors.col(0);
    if (psi.sum() < 0.0) psi = -psi;
    psi = psi.cwiseMax(0.0);
    psi.normalize();
    const auto out = density_of(g, psi, mass);
    change = l1_change(g, out, rho) / mass;
    if (it > 1 && change < opts.tol) break;
    if (it >= opts.max_iterations) {
      throw ConvergenceError("hartree: no convergence", change, it);
    }

    double lin_out = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const auto k = static_cast<Eigen::Index>(i);
      double hv = diag[i] * psi[k];
      if (i > 0) hv += mesh.off[i - 1] * psi[k - 1];
      if (i + 1 < n) hv += mesh.off[i] * psi[k + 1];
      lin_out += psi[k] * hv;
    }
    lin_out *= mass;
    double step = 1.0;
    if (it > 1 && coupling > 0.0) {
      std::vector<double> delta(n);
      for (std::size_t i = 0; i < n; ++i) delta[i] = out[i] - rho[i];
      const auto pd = newton_potential_signed(g, delta);
      double dd = 0.0, rd = 0.0;
      for (std::size_t i = 0; i < n; ++i) {
        const double wr2 = kFourPi * g.w(i) * g.r(i) * g.r(i);
        dd += wr2 * delta[i] * pd[i];
        rd += wr2 * delta[i] * pot[i];
      }
      const double quad = 0.5 * coupling * dd;
      const double slope = (lin_out - lin_in) + coupling * rd;
      step = quad > 0.0 ? std::clamp(-slope / (2.0 * quad), 0.0, 1.0) : (slope < 0.0 ? 1.0 : 0.0);
      if (step == 0.0) step = opts.mixing;
    }
    for (std::size_t i = 0; i < n; ++i) rho[i] = (1.0 - step) * rho[i] + step * out[i];
    lin_in = (1.0 - step) * lin_in + step * lin_out;
    pot = newton_potential(RadialField(grid, rho, FieldKind::density)).vector();
  }

  // Energy and residual of the final orbital against its own mean field.
  const auto dens = density_of(g, psi, mass);
  const auto u = newton_potential(RadialField(grid, dens, FieldKind::density));
  Eigen::VectorXd hpsi(static_cast<Eigen::Index>(n));
  for (std::size_t i = 0; i < n; ++i) {
    const auto k = static_cast<Eigen::Index>(i);
    double v = (mesh.diag[i] - Z / g.r(i) + coupling * u[i]) * psi[k];
    if (i > 0) v += mesh.off[i - 1] * psi[k - 1];
    if (i + 1 < n) v += mesh.off[i] * psi[k + 1];
    hpsi[k] = v;
  }
  const double ray = psi.dot(hpsi);
  double hartree = 0.0;
  for (std::size_t i = 0; i < n; ++i) hartree += g.w(i) * g.r(i) * g.r(i) * dens[i] * u[i];
  hartree *= kFourPi;

  std::vector<double> v(n);
  for (std::size_t i = 0; i < n; ++i) {
    v[i] = std::sqrt(mass) * psi[static_cast<Eigen::Index>(i)] /
           (mesh.sw[i] * g.r(i) * std::sqrt(kFourPi));
  }
  HartreeState st{RadialField(grid, std::move(v)), mass, -ray, 0.0, mass, 0.0, it};
  st.energy = mass * ray - 0.5 * coupling * hartree;
  st.residual = (hpsi - ray * psi).norm() / std::max(std::abs(ray), 1.0);
  return st;
}

namespace {

// Bound-state probe: converged with mu > 0 means the mass is subcritical.
// Above t_c the box ground state is nearly degenerate with a wall state and
// the SCF stalls; a stalled probe is read as unbound.
std::optional<HartreeState> bound_probe(double t, const GridPtr& grid, const HartreeOptions& opts) {
  HartreeOptions o = opts;
  o.max_iterations = std::min(opts.max_iterations, opts.probe_iterations);
  try {
    auto s = solve_hartree_fixed_mass(1.0, 1.0, t, grid, o);
    if (s.mu > 0.0) return s;
  } catch (const ConvergenceError&) {
  }
  return std::nullopt;
}

}  // namespace

double compute_tc(const GridPtr& grid, double tol, const HartreeOptions& opts) {
  if (!(tol > 0.0)) throw ParameterError("compute_tc: tol must be positive");
  double lo = 1.0, hi = 2.0;
  if (!bound_probe(lo, grid, opts) || bound_probe(hi, grid, opts)) {
    throw DomainError("compute_tc: no sign change of mu on [1, 2]");
  }
  while (hi - lo > tol) {
    const double mid = 0.5 * (lo + hi);
    (bound_probe(mid, grid, opts) ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

HartreeState minimize_e(double t, const GridPtr& grid, const HartreeOptions& opts) {
  if (!(t > 0.0) || !std::isfinite(t)) throw ParameterError("minimize_e: t must be positive");
  if (auto s = bound_probe(t, grid, opts)) return *s;
  // Unbound at mass t: the relaxed minimizer carries the critical mass.
  double hi = t, lo = t;
  std::optional<HartreeState> below;
  while (!below) {
    hi = lo;
    lo *= 0.5;
    if (lo < 1e-8) throw ConvergenceError("minimize_e: no bound state found", 0.0, 0);
    below = bound_probe(lo, grid, opts);
  }
  while (hi - lo > opts.tc_tol) {
    const double mid = 0.5 * (lo + hi);
    if (auto s = bound_probe(mid, grid, opts)) {
      lo = mid;
      below = std::move(s);
    } else {
      hi = mid;
    }
  }
  below->t = t;
  return *below;
}

std::vector<ECurvePoint> e_curve(const std::vector<double>& ts, const GridPtr& grid,
                                 const HartreeOptions& opts) {
  if (ts.empty()) throw ParameterError("e_curve: empty t list");
  for (double t : ts) {
    if (!(t > 0.0)) throw ParameterError("e_curve: t must be positive");
  }
  return parallel_map(ts, [&](double t) {
    const auto s = minimize_e(t, grid, opts);
    return ECurvePoint{t, s.energy, s.mu, s.bound_mass};
  });
}

HartreeScaling hartree_scaling(int N, double Z, const GridPtr& grid, const HartreeOptions& opts) {
  if (N < 2 || !(Z > 0.0)) throw ParameterError("hartree_scaling: need N >= 2, Z > 0");
  const auto scaled = std::make_shared<const RadialGrid>(grid->scaled(1.0 / Z));
  const double direct = N * solve_hartree_fixed_mass(Z, N - 1.0, 1.0, scaled, opts).energy;
  const double t = (N - 1.0) / Z;
  const double e = minimize_e(t, grid, opts).energy;
  return {direct, N * Z * Z * Z / (N - 1.0) * e};
}

HoffmannOstenhof hoffmann_ostenhof_product_check(const RadialField& u, int n_particles) {
  if (n_particles < 1) throw ParameterError("hoffmann_ostenhof: need N >= 1");
  const double n = n_particles;
  std::vector<double> root(u.size());
  for (std::size_t i = 0; i < u.size(); ++i) root[i] = std::sqrt(n * u[i] * u[i]);
  return {n * radial_kinetic(u), radial_kinetic(RadialField(u.grid_ptr(), std::move(root)))};
}

double lieb_oxford_product_check(const RadialField& u, int n_particles) {
  if (n_particles < 1) throw ParameterError("lieb_oxford: need N >= 1");
  const double n = n_particles;
  std::vector<double> u2(u.size()), rho43(u.size());
  for (std::size_t i = 0; i < u.size(); ++i) {
    u2[i] = u[i] * u[i];
    rho43[i] = std::pow(n * u2[i], 4.0 / 3.0);
  }
  const RadialField dens(u.grid_ptr(), std::move(u2), FieldKind::density);
  return kLiebOxford * integrate_3d(RadialField(u.grid_ptr(), std::move(rho43))) -
         0.5 * n * coulomb_pairing(dens, dens);
}

}  // namespace ionlab
