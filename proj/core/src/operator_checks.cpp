#include "ionlab/operator_checks.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include <Eigen/Dense>

#include "ionlab/band_eigen.hpp"
#include "ionlab/errors.hpp"

namespace ionlab {

namespace {

constexpr int kCandidateModes = 8;
constexpr double kTaperFraction = 0.1;

void require_tolerance(double tol) {
  if (!(tol >= 0.0) || !std::isfinite(tol)) {
    throw ParameterError("operator check: tolerance must be finite and >= 0");
  }
}

bool is_boundary_mode(const Eigen::VectorXd& v) {
  const auto n = v.size();
  const auto layer = std::min<Eigen::Index>(kBoundaryLayer, n / 2);
  const double edge = v.head(layer).squaredNorm() + v.tail(layer).squaredNorm();
  return edge > 0.5 * v.squaredNorm();
}

bool judge(Claim claim, double value, double bound, double tol) {
  return claim == Claim::nonnegative ? value >= bound - tol : value <= bound + tol;
}

double frobenius(const Eigen::SparseMatrix<double>& m) { return m.norm(); }

// Smooth eigenvectors of R A R (at most a fifth of the Nyquist range in log
// r), rolled off with a sin^2 taper over the outer tenth at each end.
Eigen::MatrixXd resolved_interior_basis(const GridPtr& grid, const ReducedOperator& a) {
  const std::size_t n = grid->size();
  const auto r = radius_power(grid, 1.0);
  const ReducedOperator rar = r * a * r;
  const int m = std::clamp(static_cast<int>(0.2 * static_cast<double>(n - 1) / std::numbers::pi),
                           2, static_cast<int>(n) / 2);
  Eigen::MatrixXd b = extremal_eigenpairs(rar.matrix, m, SpectrumEnd::lowest).vectors;
  for (std::size_t i = 0; i < n; ++i) {
    const double x = static_cast<double>(i) / static_cast<double>(n - 1);
    double t = 1.0;
    if (x < kTaperFraction) {
      t = std::pow(std::sin(0.5 * std::numbers::pi * x / kTaperFraction), 2);
    } else if (x > 1.0 - kTaperFraction) {
      t = std::pow(std::sin(0.5 * std::numbers::pi * (1.0 - x) / kTaperFraction), 2);
    }
    b.row(static_cast<Eigen::Index>(i)) *= t;
  }
  return b;
}

}  // namespace

double InequalityReport::defect() const {
  const double gap = claim == Claim::nonnegative ? bound - extremal_eigenvalue
                                                 : extremal_eigenvalue - bound;
  return std::max(gap, 0.0);
}

void to_json(nlohmann::json& j, const InequalityReport& r) {
  j = nlohmann::json{{"name", r.name},
                     {"extremal_eigenvalue", r.extremal_eigenvalue},
                     {"tolerance", r.tolerance},
                     {"passed", r.passed},
                     {"grid", r.grid_descriptor},
                     {"claim", r.claim == Claim::nonnegative ? ">=" : "<="},
                     {"bound", r.bound},
                     {"boundary_modes_excluded", r.boundary_modes_excluded}};
  if (r.raw_extremal_eigenvalue) j["raw_extremal_eigenvalue"] = *r.raw_extremal_eigenvalue;
}

ReducedOperator radius_power(GridPtr grid, double power) {
  auto f = RadialField::from_function(std::move(grid),
                                      [power](double r) { return std::pow(r, power); });
  return multiplication_operator(f);
}

InequalityReport certify(std::string name, const ReducedOperator& op, Claim claim,
                         double bound, double tol) {
  require_tolerance(tol);
  const int count = std::min<int>(kCandidateModes, static_cast<int>(op.size()));
  const auto end = claim == Claim::nonnegative ? SpectrumEnd::lowest : SpectrumEnd::highest;
  const auto pairs = extremal_eigenpairs(op.matrix, count, end);

  InequalityReport rep;
  rep.name = std::move(name);
  rep.tolerance = tol;
  rep.claim = claim;
  rep.bound = bound;
  rep.grid_descriptor = op.grid->describe();
  rep.extremal_eigenvalue = pairs.values.front();
  for (int k = 0; k < count; ++k) {
    if (!is_boundary_mode(pairs.vectors.col(k))) {
      rep.extremal_eigenvalue = pairs.values[static_cast<std::size_t>(k)];
      break;
    }
    ++rep.boundary_modes_excluded;
  }
  if (rep.boundary_modes_excluded > 0) rep.raw_extremal_eigenvalue = pairs.values.front();
  rep.passed = judge(claim, rep.extremal_eigenvalue, bound, tol);
  return rep;
}

InequalityReport check_hardy(const GridPtr& grid, double tol) {
  require_tolerance(tol);
  const auto a = reduced_laplacian(grid);
  const auto v = radius_power(grid, -2.0);
  return certify("hardy", a - 0.25 * v, Claim::nonnegative, 0.0, tol);
}

InequalityReport check_lieb_symmetrization(const ReducedOperator& a,
                                           const ReducedOperator& r, double tol) {
  require_tolerance(tol);
  return certify("lieb_symmetrization", a * r + r * a, Claim::nonnegative, 0.0, tol);
}

InequalityReport check_lieb_symmetrization(const GridPtr& grid, double tol) {
  return check_lieb_symmetrization(reduced_laplacian(grid), radius_power(grid, 1.0), tol);
}

ImsReport check_ims_x2(const ReducedOperator& a, const ReducedOperator& r, double tol,
                       double bound) {
  require_tolerance(tol);
  const auto r2 = r * r;
  const ReducedOperator lhs = 0.5 * (r2 * a + a * r2);
  const ReducedOperator rhs = r * a * r - identity_operator(a.grid);
  ImsReport out;
  const double scale = frobenius(a.matrix);
  const double dev = frobenius((lhs - rhs).matrix);
  out.identity_deviation = scale > 0.0 ? dev / scale : std::numeric_limits<double>::infinity();
  out.bound_check = certify("ims_x2", lhs, Claim::nonnegative, bound, tol);
  return out;
}

ImsReport check_ims_x2(const GridPtr& grid, double tol, double bound) {
  return check_ims_x2(reduced_laplacian(grid), radius_power(grid, 1.0), tol, bound);
}

InequalityReport check_double_commutator(const ReducedOperator& a,
                                         const ReducedOperator& w, double tol) {
  require_tolerance(tol);
  // [-A, [-A, W]] = [A, [A, W]].
  const ReducedOperator dc = commutator(a, commutator(a, w));

  InequalityReport rep;
  rep.name = "double_commutator";
  rep.tolerance = tol;
  rep.claim = Claim::nonpositive;
  rep.bound = 0.0;
  rep.grid_descriptor = a.grid->describe();
  rep.raw_extremal_eigenvalue =
      extremal_eigenvalues(dc.matrix, 1, SpectrumEnd::highest).front();

  const Eigen::MatrixXd b = resolved_interior_basis(a.grid, reduced_laplacian(a.grid));
  const Eigen::MatrixXd db = dc.matrix * b;
  Eigen::MatrixXd c = b.transpose() * db;
  c = 0.5 * (c + c.transpose()).eval();
  const Eigen::MatrixXd g = b.transpose() * b;
  Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> ges(c, g);
  if (ges.info() != Eigen::Success) throw NumericError("double commutator: projected solve failed");
  rep.extremal_eigenvalue = ges.eigenvalues().maxCoeff();
  rep.passed = judge(rep.claim, rep.extremal_eigenvalue, rep.bound, tol);
  return rep;
}

InequalityReport check_double_commutator_cube(const GridPtr& grid, double tol) {
  auto rep = check_double_commutator(reduced_laplacian(grid), radius_power(grid, 3.0), tol);
  rep.name = "double_commutator_cube";
  return rep;
}

}  // namespace ionlab
