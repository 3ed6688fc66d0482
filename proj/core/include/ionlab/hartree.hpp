#pragma once

#include <vector>

#include "ionlab/radial.hpp"

namespace ionlab {

struct HartreeOptions {
  /// L^1 change of the density between sweeps, relative to the mass.
  double tol = 1e-10;
  int max_iterations = 5000;
  double mixing = 0.3;
  /// Bracket width for the critical-mass bisection used by minimize_e.
  double tc_tol = 1e-4;
  /// Sweep budget of the bound/unbound probes in the t_c bisections.
  int probe_iterations = 400;
};

struct HartreeState {
  RadialField v;  // nonnegative orbital, int |v|^2 = bound_mass
  double t = 0.0;
  double mu = 0.0;
  double energy = 0.0;
  double bound_mass = 0.0;
  double residual = 0.0;
  int iterations = 0;
};

/// Default Hartree grid: [1e-4, 200] with 2000 points.
GridPtr hartree_grid(std::size_t n = 2000);

/// Ground state of int |grad w|^2 - Z |w|^2/|x| + (coupling/2) |w|^2 (|w|^2 * 1/|x|)
/// at int |w|^2 = mass exactly (no relaxation).
HartreeState solve_hartree_fixed_mass(double Z, double coupling, double mass,
                                      const GridPtr& grid,
                                      const HartreeOptions& opts = {});

/// e(t), relaxed to int |v|^2 <= t: when the mass-t state is unbound
/// (mu <= 0) the mass is capped at the critical value.
HartreeState minimize_e(double t, const GridPtr& grid, const HartreeOptions& opts = {});

/// Critical mass: bisection over [1, 2] on whether the mass-t state is bound
/// (SCF converged with mu > 0).
double compute_tc(const GridPtr& grid, double tol, const HartreeOptions& opts = {});

struct ECurvePoint {
  double t, e, mu, bound_mass;
};

/// Evaluated concurrently, returned in input order.
std::vector<ECurvePoint> e_curve(const std::vector<double>& ts, const GridPtr& grid,
                                 const HartreeOptions& opts = {});

/// Hartree energy of u^{(x)N} with nuclear charge Z, minimized directly,
/// and the rescaled prediction N Z^3/(N-1) e((N-1)/Z).
struct HartreeScaling {
  double direct, rescaled;
};
HartreeScaling hartree_scaling(int N, double Z, const GridPtr& grid,
                               const HartreeOptions& opts = {});

struct HoffmannOstenhof {
  double lhs;  // N int |grad u|^2
  double rhs;  // int |grad sqrt(N u^2)|^2
};
HoffmannOstenhof hoffmann_ostenhof_product_check(const RadialField& u, int n_particles);

/// 1.68 int rho^{4/3} - (N/2) D(u^2, u^2) with rho = N u^2.
double lieb_oxford_product_check(const RadialField& u, int n_particles);

/// int |grad f|^2 for a radial f through the reduced stiffness.
double radial_kinetic(const RadialField& f);

/// D(f, g) = int int f(x) g(y)/|x - y|.
double coulomb_pairing(const RadialField& f, const RadialField& g);

}  // namespace ionlab
