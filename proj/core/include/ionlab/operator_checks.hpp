#pragma once

#include <optional>
#include <string>

#include <json.hpp>

#include "ionlab/radial.hpp"

namespace ionlab {

enum class Claim { nonnegative, nonpositive };

/// Outcome of certifying `op >= bound` or `op <= bound` on a radial grid.
struct InequalityReport {
  std::string name;
  double extremal_eigenvalue = 0.0;
  double tolerance = 0.0;
  bool passed = false;
  std::string grid_descriptor;

  Claim claim = Claim::nonnegative;
  double bound = 0.0;
  int boundary_modes_excluded = 0;
  /// Extremal eigenvalue of the full matrix when the reported one comes from
  /// a filtered subspace.
  std::optional<double> raw_extremal_eigenvalue;

  /// Amount by which the claim is violated (0 when it holds exactly).
  double defect() const;
};

void to_json(nlohmann::json& j, const InequalityReport& r);

/// Number of end points whose eigenvector weight marks a boundary artifact.
inline constexpr int kBoundaryLayer = 5;

/// Multiplication by r^power on reduced functions.
ReducedOperator radius_power(GridPtr grid, double power);

/// Extremal eigenvalue of `op` compared with `bound`. Eigenvectors holding
/// more than half their weight within kBoundaryLayer points of either end
/// are skipped.
InequalityReport certify(std::string name, const ReducedOperator& op,
                         Claim claim, double bound, double tol);

/// -Delta - 1/(4 r^2) >= 0.
InequalityReport check_hardy(const GridPtr& grid, double tol);

/// A R + R A >= 0.
InequalityReport check_lieb_symmetrization(const ReducedOperator& a,
                                           const ReducedOperator& r, double tol);
InequalityReport check_lieb_symmetrization(const GridPtr& grid, double tol);

struct ImsReport {
  /// ||(R^2 A + A R^2)/2 - (R A R - I)||_F / ||A||_F (infinite when A = 0).
  double identity_deviation = 0.0;
  /// Lowest eigenvalue of (R^2 A + A R^2)/2 against the requested bound.
  InequalityReport bound_check;
};

inline constexpr double kImsStatedBound = -3.0 / 8.0;
/// 1/4 - 1, the value the Hardy step actually yields.
inline constexpr double kImsHardyBound = -3.0 / 4.0;

ImsReport check_ims_x2(const ReducedOperator& a, const ReducedOperator& r,
                       double tol, double bound = kImsStatedBound);
ImsReport check_ims_x2(const GridPtr& grid, double tol,
                       double bound = kImsStatedBound);

/// [A, [A, W]] <= 0 with A = reduced(-Delta), tested on the resolved interior
/// subspace; the raw top eigenvalue of the full matrix is kept as a
/// diagnostic.
InequalityReport check_double_commutator(const ReducedOperator& a,
                                         const ReducedOperator& w, double tol);
InequalityReport check_double_commutator_cube(const GridPtr& grid, double tol);

}  // namespace ionlab
