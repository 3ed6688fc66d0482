#include "ionlab/tf.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include <Eigen/Dense>

#include "ionlab/errors.hpp"

namespace ionlab {

namespace {

constexpr double kFourPi = 4.0 * std::numbers::pi;

double mass_of(const RadialGrid& g, std::span<const double> rho) {
  double s = 0.0;
  for (std::size_t i = 0; i < g.size(); ++i) s += g.w(i) * g.r(i) * g.r(i) * rho[i];
  return kFourPi * s;
}

// rho = kappa [phi0 - mu]_+^{3/2}, with mu >= 0 chosen so that the mass does
// not exceed N.
struct Response {
  std::vector<double> rho;
  double mu = 0.0;
};

Response tf_response(const RadialGrid& g, const std::vector<double>& phi0, double kappa,
                     double N) {
  const std::size_t n = g.size();
  Response out;
  out.rho.resize(n);
  auto fill = [&](double mu) {
    for (std::size_t i = 0; i < n; ++i) {
      const double p = phi0[i] - mu;
      out.rho[i] = p > 0.0 ? kappa * p * std::sqrt(p) : 0.0;
    }
    return mass_of(g, out.rho);
  };
  if (fill(0.0) <= N) return out;
  double lo = 0.0;
  double hi = *std::max_element(phi0.begin(), phi0.end());
  for (int it = 0; it < 200 && hi - lo > 1e-15 * std::max(1.0, hi); ++it) {
    const double mid = 0.5 * (lo + hi);
    (fill(mid) > N ? lo : hi) = mid;
  }
  out.mu = hi;
  fill(hi);
  return out;
}

std::vector<double> external_potential(std::span<const double> rho, double Z,
                                       const GridPtr& gp) {
  return screened_potential(Z, RadialField(gp, {rho.begin(), rho.end()}, FieldKind::density)).vector();
}

// int |(5/3) c (rho^{2/3} - out^{2/3})| r^2 dr relative to int [Phi]_+ r^2 dr.
double equation_residual(const RadialGrid& g, std::span<const double> rho,
                         std::span<const double> out, std::span<const double> phi0,
                         double mu, double c) {
  double num = 0.0, den = 0.0;
  for (std::size_t i = 0; i < g.size(); ++i) {
    const double r2 = g.w(i) * g.r(i) * g.r(i);
    num += r2 * std::abs(std::cbrt(rho[i] * rho[i]) - std::cbrt(out[i] * out[i]));
    den += r2 * std::max(phi0[i] - mu, 0.0);
  }
  return den > 0.0 ? (5.0 / 3.0) * c * num / den : num;
}

// Newton iteration for F(rho) = rho - kappa [Phi0(rho) - mu]_+^{3/2} = 0,
// optionally bordered by mass(rho) = N with mu as extra unknown. The
// Jacobian uses the plain trapezoid Coulomb kernel, which is self-adjoint in
// the r^2 w inner product; the resulting SPD system is solved by CG.
struct NewtonState {
  const RadialGrid& g;
  const TFParams& params;
  double kappa;

  double response(double p) const { return p > 0.0 ? kappa * p * std::sqrt(p) : 0.0; }
  double slope(double p) const { return p > 0.0 ? 1.5 * kappa * std::sqrt(p) : 0.0; }

  // S y with S = M^{1/2} K M^{1/2}, M = 4 pi w r^2, K_ij = 1/max(r_i, r_j).
  Eigen::VectorXd coulomb(const Eigen::VectorXd& y, const Eigen::VectorXd& msqrt) const {
    const auto n = y.size();
    Eigen::VectorXd a = msqrt.cwiseProduct(y);
    Eigen::VectorXd out(n);
    double inner = 0.0;
    std::vector<double> outer(static_cast<std::size_t>(n) + 1, 0.0);
    for (Eigen::Index j = n - 1; j >= 0; --j) {
      outer[static_cast<std::size_t>(j)] = outer[static_cast<std::size_t>(j) + 1] + a[j] / g.r(static_cast<std::size_t>(j));
    }
    for (Eigen::Index i = 0; i < n; ++i) {
      inner += a[i];
      out[i] = inner / g.r(static_cast<std::size_t>(i)) + outer[static_cast<std::size_t>(i) + 1];
    }
    return msqrt.cwiseProduct(out);
  }

  // (I + D S) y = b, through (I + D^{1/2} S D^{1/2}) z = D^{1/2} S b.
  Eigen::VectorXd solve(const Eigen::VectorXd& b, const Eigen::VectorXd& dsq,
                        const Eigen::VectorXd& msqrt) const {
    auto op = [&](const Eigen::VectorXd& z) -> Eigen::VectorXd {
      return z + dsq.cwiseProduct(coulomb(dsq.cwiseProduct(z), msqrt));
    };
    const Eigen::VectorXd rhs = dsq.cwiseProduct(coulomb(b, msqrt));
    Eigen::VectorXd z = Eigen::VectorXd::Zero(b.size());
    Eigen::VectorXd r = rhs, p = rhs;
    double rr = r.squaredNorm();
    const double stop = 1e-28 * std::max(rr, 1e-300);
    for (int it = 0; it < 500 && rr > stop; ++it) {
      const Eigen::VectorXd ap = op(p);
      const double step = rr / p.dot(ap);
      z += step * p;
      r -= step * ap;
      const double rr_new = r.squaredNorm();
      p = r + (rr_new / rr) * p;
      rr = rr_new;
    }
    return b - dsq.cwiseProduct(z);
  }

  void newton_step(std::vector<double>& rho, double& mu, const std::vector<double>& phi0,
                   bool constrained, const GridPtr& grid) const {
    const auto n = static_cast<Eigen::Index>(g.size());
    Eigen::VectorXd msqrt(n), dsq(n), f(n), d(n);
    for (Eigen::Index i = 0; i < n; ++i) {
      const auto k = static_cast<std::size_t>(i);
      msqrt[i] = std::sqrt(kFourPi * g.w(k)) * g.r(k);
      const double p = phi0[k] - mu;
      d[i] = slope(p);
      dsq[i] = std::sqrt(d[i]);
      f[i] = msqrt[i] * (rho[k] - response(p));
    }
    // Work in y = M^{1/2} rho.
    Eigen::VectorXd step = solve(-f, dsq, msqrt);
    double dmu = 0.0;
    if (constrained) {
      const Eigen::VectorXd c = solve(msqrt.cwiseProduct(d), dsq, msqrt);
      double mass = 0.0;
      for (Eigen::Index i = 0; i < n; ++i) mass += msqrt[i] * msqrt[i] * rho[static_cast<std::size_t>(i)];
      const double wc = msqrt.dot(c);
      if (wc > 0.0) dmu = (mass + msqrt.dot(step) - params.N) / wc;
      step -= dmu * c;
    }
    auto merit = [&](const std::vector<double>& x, double m) {
      const auto p0 = external_potential(x, params.Z, grid);
      double s = 0.0, mass = 0.0;
      for (std::size_t i = 0; i < g.size(); ++i) {
        const double wi = kFourPi * g.w(i) * g.r(i) * g.r(i);
        const double e = x[i] - response(p0[i] - m);
        s += wi * e * e;
        mass += wi * x[i];
      }
      if (constrained) s += (mass - params.N) * (mass - params.N);
      return s;
    };
    const double base = merit(rho, mu);
    std::vector<double> trial(rho.size());
    double t = 1.0;
    for (int k = 0; k < 30; ++k, t *= 0.5) {
      for (Eigen::Index i = 0; i < n; ++i) {
        const auto j = static_cast<std::size_t>(i);
        trial[j] = std::max(rho[j] + t * step[i] / msqrt[i], 0.0);
      }
      const double m_trial = std::max(mu + t * dmu, 0.0);
      if (merit(trial, m_trial) < base || k == 29) {
        rho = trial;
        mu = m_trial;
        return;
      }
    }
  }
};

struct Line {
  double slope, intercept;
};

Line line_fit(const std::vector<double>& x, const std::vector<double>& y) {
  const double n = static_cast<double>(x.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sx += x[i];
    sy += y[i];
    sxx += x[i] * x[i];
    sxy += x[i] * y[i];
  }
  const double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
  return {slope, (sy - slope * sx) / n};
}

}  // namespace

void TFParams::validate() const {
  if (!(Z > 0.0) || !std::isfinite(Z)) throw ParameterError("TF: Z must be positive");
  if (!(N > 0.0) || !std::isfinite(N)) throw ParameterError("TF: N must be positive");
  if (!(c_tf > 0.0) || !std::isfinite(c_tf)) throw ParameterError("TF: c_tf must be positive");
}

GridPtr tf_grid(double Z, std::size_t n) {
  if (!(Z > 0.0)) throw ParameterError("tf_grid: Z must be positive");
  const double s = std::cbrt(1.0 / Z);
  return make_log_grid(1e-8 * s, 1e4 * s, n);
}

double tf_energy(const RadialField& rho, const TFParams& params) {
  params.validate();
  if (rho.kind() == FieldKind::generic) {
    for (double v : rho.values()) {
      if (!(v >= -kDensityNegativeTolerance)) throw DomainError("tf_energy: negative density");
    }
  }
  const auto& g = rho.grid();
  const auto vh = newton_potential(RadialField(rho.grid_ptr(), rho.vector(), FieldKind::density));
  double kin = 0.0, nuc = 0.0, hart = 0.0;
  for (std::size_t i = 0; i < g.size(); ++i) {
    const double r = g.r(i);
    const double wr2 = g.w(i) * r * r;
    const double p = std::max(rho[i], 0.0);
    kin += wr2 * p * std::cbrt(p * p);
    nuc += g.w(i) * r * p;
    hart += wr2 * p * vh[i];
  }
  return kFourPi * (params.c_tf * kin - params.Z * nuc + 0.5 * hart);
}

TFSolution solve_tf(const TFParams& params, const GridPtr& grid, const TFOptions& opts) {
  params.validate();
  if (!grid) throw ParameterError("solve_tf: null grid");
  if (!(opts.tol > 0.0) || opts.max_iterations < 1) {
    throw ParameterError("solve_tf: bad solver options");
  }
  const auto& g = *grid;
  const std::size_t n = g.size();
  const double kappa = std::pow(3.0 / (5.0 * params.c_tf), 1.5);

  std::vector<double> rho;
  if (opts.initial_density) {
    rho = *opts.initial_density;
    if (rho.size() != n) throw ParameterError("solve_tf: initial density size mismatch");
    for (double& v : rho) {
      if (!(v >= 0.0)) throw DomainError("solve_tf: negative initial density");
    }
  } else {
    // Bare-nucleus response screened to the target mass.
    std::vector<double> phi0(n);
    const double a = std::cbrt(1.0 / params.Z);
    for (std::size_t i = 0; i < n; ++i) phi0[i] = params.Z / g.r(i) * std::exp(-g.r(i) / a);
    rho = tf_response(g, phi0, kappa, std::min(params.N, params.Z)).rho;
  }

  TFSolution sol{RadialField(grid, FieldKind::density), RadialField(grid), 0.0, 0.0, 0.0, 0.0, 0};
  NewtonState st{g, params, kappa};
  int used = 0;
  int total = 0;
  // Neutral branch first; the mass constraint only binds if it overshoots N.
  double mu = 0.0;
  bool constrained = false;
  for (int phase = 0; phase < 2; ++phase) {
    for (;;) {
      ++used;
      ++total;
      const auto phi0 = external_potential(rho, params.Z, grid);
      if (constrained && used == 1) mu = tf_response(g, phi0, kappa, params.N).mu;
      std::vector<double> out(n);
      for (std::size_t i = 0; i < n; ++i) out[i] = st.response(phi0[i] - mu);
      sol.residual = equation_residual(g, rho, out, phi0, mu, params.c_tf);
      const double mass_gap = constrained ? std::abs(mass_of(g, rho) - params.N) / params.N : 0.0;
      sol.iterations = total;
      if (sol.residual < opts.tol && mass_gap < opts.tol) break;
      if (total >= opts.max_iterations) {
        throw ConvergenceError("solve_tf: no convergence", sol.residual, total);
      }
      st.newton_step(rho, mu, phi0, constrained, grid);
    }
    if (constrained || mass_of(g, rho) <= params.N * (1.0 + opts.tol)) break;
    constrained = true;
    rho = tf_response(g, external_potential(rho, params.Z, grid), kappa, params.N).rho;
    used = 0;
  }
  sol.mu = mu;

  sol.mass = mass_of(g, rho);
  const auto phi0 = external_potential(rho, params.Z, grid);
  std::vector<double> phi(n);
  for (std::size_t i = 0; i < n; ++i) phi[i] = phi0[i] - sol.mu;
  sol.rho = RadialField(grid, std::move(rho), FieldKind::density);
  sol.phi = RadialField(grid, std::move(phi));
  sol.energy = tf_energy(sol.rho, params);
  return sol;
}

double tf_scaling_check(const TFParams& params, const GridPtr& grid, const TFOptions& opts) {
  params.validate();
  const double s = std::cbrt(1.0 / params.Z);
  const auto scaled = std::make_shared<const RadialGrid>(grid->scaled(s));
  const double e_z = solve_tf(params, scaled, opts).energy;
  TFParams unit = params;
  unit.N = params.N / params.Z;
  unit.Z = 1.0;
  const double e_1 = solve_tf(unit, grid, opts).energy;
  return std::abs(e_z - std::pow(params.Z, 7.0 / 3.0) * e_1) / std::abs(e_z);
}

TailFit tf_tail_exponent(const TFSolution& sol, double r_lo, double r_hi) {
  const auto& g = sol.phi.grid();
  if (!(r_lo > 0.0) || !(r_hi > r_lo) || r_lo < g.r_min() || r_hi > g.r_max()) {
    throw ParameterError("tf_tail_exponent: window outside grid");
  }
  const std::size_t lo = g.lower_index(r_lo);
  std::size_t hi = g.lower_index(r_hi);
  if (hi < g.size() && g.r(hi) > r_hi) --hi;
  if (hi <= lo + 1) throw ParameterError("tf_tail_exponent: window holds too few nodes");

  TailFit fit;
  const double nan = std::numeric_limits<double>::quiet_NaN();
  if (sol.mu > 0.0) fit.compact_support = true;
  std::vector<double> lx, ly, t, y4;
  for (std::size_t i = lo; i <= hi; ++i) {
    if (!(sol.phi[i] > 0.0)) {
      fit.compact_support = true;
      break;
    }
    const double r = g.r(i);
    lx.push_back(std::log(r));
    ly.push_back(std::log(sol.phi[i]));
    t.push_back(std::pow(r, -kTailCorrectionExponent));
    y4.push_back(sol.phi[i] * r * r * r * r);
  }
  if (fit.compact_support) {
    fit.exponent = fit.amplitude = nan;
    return fit;
  }
  fit.exponent = line_fit(lx, ly).slope;
  fit.amplitude = line_fit(t, y4).intercept;
  return fit;
}

}  // namespace ionlab
