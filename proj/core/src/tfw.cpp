#include "ionlab/tfw.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include <Eigen/SparseLU>

#include "ionlab/errors.hpp"
#include "ionlab/hartree.hpp"
#include "ionlab/parallel.hpp"

namespace ionlab {

namespace {

constexpr double kFourPi = 4.0 * std::numbers::pi;

// Orbital in the reduced orthonormal basis: psi_i = sqrt(4 pi w_i) r_i u_i, so
// int u^2 = sum psi_i^2.
struct Reduced {
  GridPtr grid;
  std::vector<double> diag, off;  // -d^2/dr^2
  std::vector<double> scale;      // sqrt(4 pi w_i) r_i

  explicit Reduced(GridPtr g) : grid(std::move(g)) {
    const auto a = reduced_laplacian(grid);
    const std::size_t n = grid->size();
    diag.resize(n);
    off.resize(n - 1);
    scale.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
      const auto k = static_cast<Eigen::Index>(i);
      diag[i] = a.matrix.coeff(k, k);
      if (i + 1 < n) off[i] = a.matrix.coeff(k, k + 1);
      scale[i] = std::sqrt(kFourPi * grid->w(i)) * grid->r(i);
    }
  }

  std::size_t size() const { return diag.size(); }

  std::vector<double> laplace(const Eigen::VectorXd& psi) const {
    const std::size_t n = size();
    std::vector<double> out(n);
    for (std::size_t i = 0; i < n; ++i) {
      const auto k = static_cast<Eigen::Index>(i);
      double v = diag[i] * psi[k];
      if (i > 0) v += off[i - 1] * psi[k - 1];
      if (i + 1 < n) v += off[i] * psi[k + 1];
      out[i] = v;
    }
    return out;
  }

  RadialField orbital(const Eigen::VectorXd& psi) const {
    std::vector<double> u(size());
    for (std::size_t i = 0; i < u.size(); ++i) u[i] = psi[static_cast<Eigen::Index>(i)] / scale[i];
    return RadialField(grid, std::move(u));
  }

  Eigen::VectorXd reduce(std::span<const double> u) const {
    Eigen::VectorXd psi(static_cast<Eigen::Index>(size()));
    for (std::size_t i = 0; i < size(); ++i) psi[static_cast<Eigen::Index>(i)] = scale[i] * u[i];
    return psi;
  }
};

RadialField density_of(const RadialField& u) {
  std::vector<double> rho(u.size());
  for (std::size_t i = 0; i < rho.size(); ++i) rho[i] = u[i] * u[i];
  return RadialField(u.grid_ptr(), std::move(rho), FieldKind::density);
}

struct Evaluation {
  Eigen::VectorXd f;
  std::vector<double> phi;
  double norm = 0.0;
  double relative = 0.0;
  double energy = 0.0;
};

Evaluation evaluate(const Reduced& red, const Eigen::VectorXd& psi, const TFWParams& p) {
  const auto u = red.orbital(psi);
  const auto phi = screened_potential(p.Z, density_of(u));
  const auto lap = red.laplace(psi);
  const std::size_t n = red.size();
  Evaluation ev;
  ev.f.resize(static_cast<Eigen::Index>(n));
  double s_kin = 0.0, s_tf = 0.0, s_pot = 0.0;
  long double e = 0.0L;
  for (std::size_t i = 0; i < n; ++i) {
    const auto k = static_cast<Eigen::Index>(i);
    const double kin = p.c_w * lap[i];
    const double u43 = std::pow(std::abs(u[i]), 4.0 / 3.0);
    const double tf = (5.0 / 3.0) * p.c_tf * u43 * psi[k];
    const double pot = phi[i] * psi[k];
    ev.f[k] = kin + tf - pot;
    e += psi[k] * (kin + p.c_tf * u43 * psi[k] - 0.5 * (p.Z / red.grid->r(i) + phi[i]) * psi[k]);
    s_kin += kin * kin;
    s_tf += tf * tf;
    s_pot += pot * pot;
  }
  ev.phi = phi.vector();
  ev.norm = ev.f.norm();
  ev.energy = static_cast<double>(e);
  const double scale = std::sqrt(s_kin) + std::sqrt(s_tf) + std::sqrt(s_pot);
  ev.relative = scale > 0.0 ? ev.norm / scale : ev.norm;
  return ev;
}

// Newton step J d = -f with
//   J = c_w A + diag((35/9) c u^{4/3} - Phi) + 2 D M D,  D = diag(psi),
// M_ij = 1/max(r_i, r_j). M^{-1} = L is tridiagonal, so with y = M D d the
// system is the sparse block [[T, 2D], [D, -L]] [d; y] = [-f; 0].
// `convexified` replaces -Phi by |Phi|, which makes J positive definite.
Eigen::VectorXd newton_direction(const Reduced& red, const Eigen::VectorXd& psi,
                                 const Evaluation& ev, const TFWParams& p, bool convexified) {
  const auto& g = *red.grid;
  const auto n = static_cast<Eigen::Index>(red.size());
  std::vector<double> e(red.size());
  for (std::size_t i = 0; i + 1 < red.size(); ++i) e[i] = 1.0 / g.r(i) - 1.0 / g.r(i + 1);
  e.back() = 1.0 / g.r_max();

  std::vector<Eigen::Triplet<double>> trip;
  trip.reserve(static_cast<std::size_t>(10 * n));
  for (Eigen::Index k = 0; k < n; ++k) {
    const auto i = static_cast<std::size_t>(k);
    const double u = psi[k] / red.scale[i];
    trip.emplace_back(k, k, p.c_w * red.diag[i] +
                                (35.0 / 9.0) * p.c_tf * std::pow(std::abs(u), 4.0 / 3.0) +
                                (convexified ? std::abs(ev.phi[i]) : -ev.phi[i]));
    if (k + 1 < n) {
      trip.emplace_back(k, k + 1, p.c_w * red.off[i]);
      trip.emplace_back(k + 1, k, p.c_w * red.off[i]);
    }
    trip.emplace_back(k, n + k, 2.0 * psi[k]);
    trip.emplace_back(n + k, k, psi[k]);
    double l = 1.0 / e[i];
    if (k > 0) l += 1.0 / e[i - 1];
    trip.emplace_back(n + k, n + k, -l);
    if (k > 0) {
      trip.emplace_back(n + k, n + k - 1, 1.0 / e[i - 1]);
      trip.emplace_back(n + k - 1, n + k, 1.0 / e[i - 1]);
    }
  }
  Eigen::SparseMatrix<double> jac(2 * n, 2 * n);
  jac.setFromTriplets(trip.begin(), trip.end());
  Eigen::SparseLU<Eigen::SparseMatrix<double>> lu;
  lu.compute(jac);
  if (lu.info() != Eigen::Success) throw NumericError("tfw: singular Newton system");
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(2 * n);
  rhs.head(n) = -ev.f;
  const Eigen::VectorXd sol = lu.solve(rhs);
  if (lu.info() != Eigen::Success || !sol.allFinite()) {
    throw NumericError("tfw: Newton solve failed");
  }
  return sol.head(n);
}

// Hydrogen-like start carrying mass Z on the TF length scale.
std::vector<double> default_start(const RadialGrid& g, const TFWParams& p) {
  const double a = 2.0 * std::cbrt(p.Z);
  const double amp = std::sqrt(p.Z * a * a * a / (8.0 * std::numbers::pi));
  std::vector<double> u(g.size());
  for (std::size_t i = 0; i < u.size(); ++i) u[i] = amp * std::exp(-0.5 * a * g.r(i));
  return u;
}

}  // namespace

void TFWParams::validate() const {
  if (!(Z > 0.0) || !(c_tf > 0.0) || !(c_w > 0.0) || !std::isfinite(Z) ||
      !std::isfinite(c_tf) || !std::isfinite(c_w)) {
    throw ParameterError("tfw: Z, c_tf and c_w must be positive");
  }
}

GridPtr tfw_grid(double Z, std::size_t n) {
  if (!(Z > 0.0)) throw ParameterError("tfw_grid: Z must be positive");
  return make_log_grid(1e-5 / Z, 2000.0, n);
}

double tfw_residual(const RadialField& u, const TFWParams& params) {
  params.validate();
  const Reduced red(u.grid_ptr());
  return evaluate(red, red.reduce(u.values()), params).relative;
}

double tfw_energy(const RadialField& u, const TFWParams& params) {
  params.validate();
  const auto rho = density_of(u);
  std::vector<double> tf(u.size());
  for (std::size_t i = 0; i < tf.size(); ++i) tf[i] = std::pow(rho[i], 5.0 / 3.0);
  return params.c_w * radial_kinetic(u) +
         params.c_tf * integrate_3d(RadialField(u.grid_ptr(), std::move(tf))) -
         params.Z * integrate_3d(rho, -1) + 0.5 * coulomb_pairing(rho, rho);
}

TFWSolution solve_tfw(const TFWParams& params, const GridPtr& grid, const TFWOptions& opts) {
  params.validate();
  if (!grid) throw ParameterError("tfw: null grid");
  if (!(opts.tol > 0.0) || opts.max_iterations < 1 || !(opts.q_cap > 0.0)) {
    throw ParameterError("tfw: bad solver options");
  }
  const Reduced red(grid);
  const auto start = opts.initial_orbital ? *opts.initial_orbital : default_start(*grid, params);
  if (start.size() != grid->size()) throw ParameterError("tfw: initial orbital size mismatch");

  // Far from the solution: Armijo descent on the energy (gradient 2f), with
  // the convexified system whenever the Newton step is not a descent
  // direction. Close to it: full Newton steps safeguarded on |f|.
  constexpr double kNearRelative = 1e-4;
  constexpr double kPolishMass = 1e-11;
  Eigen::VectorXd psi = red.reduce(start).cwiseAbs();
  Evaluation ev = evaluate(red, psi, params);
  int it = 0;
  while (ev.relative > opts.tol) {
    if (it >= opts.max_iterations) {
      throw ConvergenceError("tfw: no convergence", ev.relative, it);
    }
    ++it;
    bool accepted = false;
    if (ev.relative < kNearRelative) {
      const Eigen::VectorXd d = newton_direction(red, psi, ev, params, false);
      double step = 1.0;
      for (int k = 0; k < 30 && !accepted; ++k, step *= 0.5) {
        Eigen::VectorXd trial = (psi + step * d).cwiseAbs();
        Evaluation tev = evaluate(red, trial, params);
        if (std::isfinite(tev.norm) && tev.norm < (1.0 - 1e-4 * step) * ev.norm) {
          psi = std::move(trial);
          ev = std::move(tev);
          accepted = true;
        }
      }
    }
    if (!accepted) {
      Eigen::VectorXd d = newton_direction(red, psi, ev, params, false);
      double slope = 2.0 * ev.f.dot(d);
      if (!(slope < 0.0)) {
        d = newton_direction(red, psi, ev, params, true);
        slope = 2.0 * ev.f.dot(d);
      }
      double step = 1.0;
      for (int k = 0; k < 50 && !accepted; ++k, step *= 0.5) {
        Eigen::VectorXd trial = (psi + step * d).cwiseAbs();
        Evaluation tev = evaluate(red, trial, params);
        if (std::isfinite(tev.energy) && tev.energy <= ev.energy + 1e-4 * step * slope) {
          psi = std::move(trial);
          ev = std::move(tev);
          accepted = true;
        }
      }
    }
    if (!accepted) throw ConvergenceError("tfw: line search failed", ev.relative, it);
  }
  // The residual norm is dominated by the nuclear region; full Newton steps
  // past the tolerance settle the tail, which carries the excess charge.
  for (int k = 0; k < opts.polish_steps; ++k) {
    Eigen::VectorXd trial =
        (psi + newton_direction(red, psi, ev, params, false)).cwiseAbs();
    Evaluation tev = evaluate(red, trial, params);
    if (!(tev.relative < 10.0 * opts.tol)) break;
    const double shift = std::abs(trial.squaredNorm() - psi.squaredNorm());
    psi = std::move(trial);
    ev = std::move(tev);
    if (shift < kPolishMass) break;
  }

  auto u = red.orbital(psi);
  const auto rho = density_of(u);
  const double n_c = total_charge(rho);
  TFWSolution sol{params,
                  u,
                  RadialField(grid, ev.phi),
                  n_c,
                  n_c - params.Z,
                  tfw_energy(u, params),
                  ev.relative,
                  it};
  if (!(sol.q > 0.0) || sol.q > opts.q_cap) {
    throw NumericError("tfw: excess charge " + std::to_string(sol.q) + " outside (0, q_cap]");
  }
  return sol;
}

std::vector<ExcessChargeRow> excess_charge_sweep(const std::vector<double>& zs,
                                                 const TFWParams& base, const TFWOptions& opts,
                                                 GridPtr (*grid_for)(double, std::size_t)) {
  if (zs.empty()) throw ParameterError("excess_charge_sweep: empty Z list");
  for (std::size_t i = 0; i < zs.size(); ++i) {
    if (!(zs[i] > 0.0) || (i > 0 && !(zs[i] > zs[i - 1]))) {
      throw ParameterError("excess_charge_sweep: Z values must be positive and increasing");
    }
  }
  return parallel_map(zs, [&](double z) {
    TFWParams p = base;
    p.Z = z;
    const auto sol = solve_tfw(p, grid_for(z, 4000), opts);
    return ExcessChargeRow{z, sol.q, sol.u.at(1.0), sol.phi.at(1.0)};
  });
}

SweepTrend sweep_trend(const std::vector<ExcessChargeRow>& rows) {
  auto shrinks = [&](auto col) {
    for (std::size_t i = 2; i < rows.size(); ++i) {
      if (std::abs(col(rows[i]) - col(rows[i - 1])) >=
          std::abs(col(rows[i - 1]) - col(rows[i - 2]))) {
        return false;
      }
    }
    return true;
  };
  return {shrinks([](const auto& r) { return r.q; }),
          shrinks([](const auto& r) { return r.u_at_1; }),
          shrinks([](const auto& r) { return r.phi_at_1; })};
}

MajorantCheck subharmonic_majorant_check(const TFWSolution& sol, double tol,
                                         double residual_limit) {
  const double res = tfw_residual(sol.u, sol.params);
  if (!(res <= residual_limit)) {
    throw DomainError("subharmonic_majorant_check: residual " + std::to_string(res) +
                      " exceeds " + std::to_string(residual_limit));
  }
  const auto& g = sol.u.grid();
  const double c = kFourPi * sol.params.c_w;
  double best = std::numeric_limits<double>::infinity();
  double prev = std::numeric_limits<double>::infinity();
  bool monotone = true;
  for (std::size_t i = g.lower_index(1.0); i < g.size(); ++i) {
    const double u = sol.u[i];
    const double ph = sol.phi[i];
    const double rp = g.r(i) * std::sqrt(c * u * u + ph * ph);
    best = std::min(best, rp);
    if (rp > prev * (1.0 + 1e-9) + 1e-12) monotone = false;
    prev = rp;
  }
  return {best, sol.q <= best + tol && monotone, monotone};
}

}  // namespace ionlab
