#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "ionlab/radial.hpp"
#include "ionlab/tf.hpp"

namespace ionlab {

struct TFWParams {
  double Z = 1.0;
  double c_tf = kTfConstant;
  double c_w = 1.0;

  void validate() const;
};

struct TFWOptions {
  /// Relative residual of the Euler-Lagrange equation.
  double tol = 1e-8;
  int max_iterations = 200;
  /// Cap on the full Newton steps taken after the tolerance is met; they stop
  /// once int u^2 moves by less than 1e-11.
  int polish_steps = 8;
  /// Sanity cap on the excess charge.
  double q_cap = 10.0;
  /// Starting orbital u (not reduced), same grid as the solve.
  std::optional<std::vector<double>> initial_orbital;
};

struct TFWSolution {
  TFWParams params;
  RadialField u;
  /// Z/r - u^2 * 1/|x|
  RadialField phi;
  double n_c = 0.0;
  double q = 0.0;
  double energy = 0.0;
  double residual = 0.0;
  int iterations = 0;
};

/// Log grid [1e-5/Z, 2000] resolving both the nuclear cusp and the outer tail.
GridPtr tfw_grid(double Z, std::size_t n = 4000);

/// Unconstrained minimizer of
/// int c_tf u^{10/3} + c_w |grad u|^2 - Z u^2/|x| + (1/2) u^2 (u^2 * 1/|x|).
TFWSolution solve_tfw(const TFWParams& params, const GridPtr& grid,
                      const TFWOptions& opts = {});

/// Relative residual of (c_w(-Delta) + (5/3)c_tf u^{4/3} - Phi)u = 0.
double tfw_residual(const RadialField& u, const TFWParams& params);

double tfw_energy(const RadialField& u, const TFWParams& params);

struct ExcessChargeRow {
  double Z, q, u_at_1, phi_at_1;
};

/// Solves every Z concurrently (zs strictly increasing); `grid_for(Z)` picks
/// the grid.
std::vector<ExcessChargeRow> excess_charge_sweep(
    const std::vector<double>& zs, const TFWParams& base, const TFWOptions& opts = {},
    GridPtr (*grid_for)(double, std::size_t) = tfw_grid);

/// Per column: successive differences shrink in magnitude.
struct SweepTrend {
  bool q, u_at_1, phi_at_1;
};
SweepTrend sweep_trend(const std::vector<ExcessChargeRow>& rows);

struct MajorantCheck {
  double q_bound;  // min_{r >= 1} r p(r), p = (4 pi c_w u^2 + Phi^2)^{1/2}
  bool passed;     // q <= q_bound + tol and r p(r) nonincreasing on r >= 1
  bool monotone;
};

/// Rejects (DomainError) solutions whose equation residual exceeds
/// `residual_limit`.
MajorantCheck subharmonic_majorant_check(const TFWSolution& sol, double tol = 1e-6,
                                         double residual_limit = 1e-6);

}  // namespace ionlab
