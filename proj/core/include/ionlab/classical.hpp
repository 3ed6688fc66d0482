#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include <Eigen/Core>

namespace ionlab {

struct PointConfig {
  std::vector<Eigen::Vector3d> points;

  std::size_t size() const noexcept { return points.size(); }
  /// DomainError on a point at the origin or two coincident points.
  void validate() const;
};

/// n independent standard Gaussian points.
PointConfig random_gaussian_config(std::size_t n, std::uint64_t seed);

/// n points on the unit sphere (Fibonacci lattice).
PointConfig fibonacci_sphere(std::size_t n);

/// [sum_{i<j} (|x_i|^2 + |x_j|^2)/|x_i - x_j|] / (n sum_i |x_i|).
double beta_value(const PointConfig& config);

/// Gradient of beta_value with respect to every coordinate.
std::vector<Eigen::Vector3d> beta_gradient(const PointConfig& config);

/// Lower bound 0.82 - 1.55 n^{-2/3} on the discrete problem.
double beta_floor(std::size_t n);

struct BetaResult {
  double best_value;
  PointConfig best_config;
  std::vector<double> restart_values;  // in restart order
};

/// Gradient descent (Barzilai-Borwein steps, Armijo backtracking) from
/// `restarts` Gaussian starts seeded by split_seed(seed, k).
BetaResult beta_optimize(std::size_t n, int restarts, std::uint64_t seed);

/// (|x|x - |y|y).(x - y)/|x - y|^3
double pair_functional(const Eigen::Vector3d& x, const Eigen::Vector3d& y);

struct PairResult {
  double min_found;
  Eigen::Vector3d x, y;
};

/// Random sampling in fixed batches followed by local descent from the best
/// sample.
PairResult pair_infimum_scan(std::size_t samples, std::uint64_t seed);

/// max_j [sum_{i != j} 1/|x_i - x_j| - z/|x_j|]
double sigal_margin(const PointConfig& config, double z);

/// Charge for which the basic inequality follows from the triangle
/// inequality: (N - 1)/2.
double sigal_basic_charge(std::size_t n);

/// Basic mode: sigal_margin(config, z) >= 0. Improved mode: z is replaced by
/// (1 - epsilon) N.
bool sigal_check(const PointConfig& config, double z, double epsilon, bool improved);

struct SigalTrials {
  std::size_t trials, passed;
  double worst_margin;
  std::vector<std::size_t> failures;  // trial indices
};

/// Gaussian configurations of n points; basic mode uses sigal_basic_charge(n).
SigalTrials sigal_trials(std::size_t n, double epsilon, bool improved, std::size_t trials,
                         std::uint64_t seed);

/// min over sampled pairs of (|x| + |y|)/|x - y|.
double triangle_symmetrization_check(std::size_t samples, std::uint64_t seed);

}  // namespace ionlab
