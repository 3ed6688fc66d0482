#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include <Eigen/Core>

namespace ionlab {

struct BallEnergy {
  double perimeter, coulomb, total;
};

/// Ball of volume m: Per = (36 pi)^{1/3} m^{2/3}, D = (3/5)(4 pi/3)^{1/3} m^{5/3}.
BallEnergy ball_energy(double m);

/// Per(B_1) and D(B_1) for the unit-volume ball.
double unit_perimeter();
double unit_coulomb();

struct Ball {
  Eigen::Vector3d center;
  double radius;

  double volume() const;
};

struct BallConfiguration {
  std::vector<Ball> balls;

  /// |c_i - c_j| > r_i + r_j for every pair.
  bool disjoint() const;
};

/// Sum of ball energies plus m_i m_j/|c_i - c_j| for every pair (Newton's
/// theorem for disjoint balls). DomainError on overlap.
double configuration_energy(const BallConfiguration& config);

/// 5 (2 - 2^{2/3})/(2^{2/3} - 1)
double mstar();

/// Root of E(m) = 2 E(m/2) for balls, by bisection.
double mstar_from_splitting();

/// (s^{2/3} + (1-s)^{2/3} - 1)/(1 - s^{5/3} - (1-s)^{5/3}), 0 < s < 1.
double f_of_s(double s);

struct FMinimum {
  double s, f;
};

/// Golden-section search on (0, 1), refined by bisection on the sign of f'.
FMinimum minimize_f();

/// (s^{5/3} + (1-s)^{5/3} - 1)(D(B_1) m - f(s) Per(B_1)) m^{2/3}
double binding_gap_lower_bound(double m, double s);

struct CuttingReport {
  double quadrature;     // int [nu.z]_+ dnu / 4 pi
  double exact;          // |z|/4
  double monte_carlo;    // same average from mc_nodes random directions
  double mc_std_error;
  double slice_integral; // int area(B_1 cap {x.nu = l}) dl for the unit-radius ball
  double ball_volume;    // 4 pi/3
};

/// 30-point Gauss-Legendre in the polar angle (split where nu.z changes
/// sign) on each of 2 quad_order azimuthal nodes; the pole is the
/// coordinate axis closest to z.
CuttingReport cutting_identities_check(const Eigen::Vector3d& z, std::size_t mc_nodes,
                                       std::uint64_t seed = 1, int quad_order = 64);

/// True iff m > 8, the range the averaged cutting argument excludes.
bool nonexistence_certificate(double m);

struct BallMonteCarlo {
  double perimeter, perimeter_error;
  double coulomb, coulomb_error;
};

/// Coulomb energy from `pairs` uniform point pairs; perimeter from the
/// volume of a thin shell around the sphere (Minkowski content).
BallMonteCarlo ball_monte_carlo(double m, std::size_t pairs, std::uint64_t seed);

}  // namespace ionlab
