#pragma once

#include <cmath>
#include <cstddef>
#include <numbers>
#include <optional>

#include "ionlab/radial.hpp"

namespace ionlab {

/// (3/5)(3 pi^2)^{2/3}, the spinless semiclassical constant.
inline const double kTfConstant =
    0.6 * std::pow(3.0 * std::numbers::pi * std::numbers::pi, 2.0 / 3.0);

struct TFParams {
  double Z = 1.0;
  double N = 1.0;
  double c_tf = kTfConstant;

  void validate() const;
};

struct TFOptions {
  double tol = 1e-8;
  int max_iterations = 500;
  std::optional<std::vector<double>> initial_density;
};

struct TFSolution {
  RadialField rho;
  /// Z/r - rho * 1/|x| - mu
  RadialField phi;
  double mu = 0.0;
  double energy = 0.0;
  double mass = 0.0;
  double residual = 0.0;
  int iterations = 0;
};

/// Log grid adapted to the TF length scale Z^{-1/3}.
GridPtr tf_grid(double Z, std::size_t n = 4000);

/// Minimizer of the TF functional over {rho >= 0, int rho <= N}.
TFSolution solve_tf(const TFParams& params, const GridPtr& grid,
                    const TFOptions& opts = {});

/// int c rho^{5/3} - Z rho/|x| + (1/2) rho (rho * 1/|x|).
double tf_energy(const RadialField& rho, const TFParams& params);

/// |E(N, Z) - Z^{7/3} E(N/Z, 1)| / |E(N, Z)| with the Z problem solved on
/// `grid` scaled by Z^{-1/3}.
double tf_scaling_check(const TFParams& params, const GridPtr& grid,
                        const TFOptions& opts = {});

/// Subleading decay of the neutral TF potential, Phi r^4 = A + B r^{-lambda}
/// with lambda = (sqrt(73) - 7)/2.
inline const double kTailCorrectionExponent = 0.5 * (std::sqrt(73.0) - 7.0);

struct TailFit {
  double exponent = 0.0;
  double amplitude = 0.0;
  /// Set when Phi is not positive on the window (ionized, mu > 0); the fit
  /// fields are NaN then.
  bool compact_support = false;
};

/// Least-squares slope of log Phi against log r over grid nodes in
/// [r_lo, r_hi]; the amplitude comes from fitting Phi r^4 = A + B r^{-lambda}
/// on the same nodes.
TailFit tf_tail_exponent(const TFSolution& sol, double r_lo, double r_hi);

}  // namespace ionlab
