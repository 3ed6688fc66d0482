#include <doctest.h>

#include <cmath>

#include "ionlab/errors.hpp"
#include "ionlab/operator_checks.hpp"

using namespace ionlab;

namespace {

ReducedOperator times(GridPtr g, double power, double sign = 1.0) {
  return multiplication_operator(
      RadialField::from_function(g, [=](double r) { return sign * std::pow(r, power); }));
}

}  // namespace

TEST_CASE("Hardy inequality") {
  const auto rep = check_hardy(default_grid(), 1e-2);
  CHECK(rep.passed);
  CHECK(rep.name == "hardy");
  CHECK(rep.defect() == 0.0);
  CHECK(check_hardy(make_log_grid(1e-2, 10, 16), 1.0).passed);
  CHECK_THROWS_AS(check_hardy(default_grid(), -1.0), ParameterError);
}

TEST_CASE("Lieb symmetrization") {
  const auto g = default_grid();
  CHECK(check_lieb_symmetrization(g, 1e-2).passed);
  const auto a = reduced_laplacian(g);
  CHECK_FALSE(check_lieb_symmetrization(a, times(g, 1.0, -1.0), 1e-2).passed);
  const auto id = check_lieb_symmetrization(identity_operator(g), times(g, 1.0), 1e-2);
  CHECK(id.passed);
  // The eigenvectors are unit vectors; the five at r_0..r_4 sit in the boundary layer.
  CHECK(id.boundary_modes_excluded == kBoundaryLayer);
  CHECK(id.extremal_eigenvalue == doctest::Approx(2.0 * g->r(kBoundaryLayer)).epsilon(1e-10));
}

TEST_CASE("IMS identity and the stated bound") {
  const auto g = default_grid();
  const auto rep = check_ims_x2(g, 1e-2);
  CHECK(rep.identity_deviation < 1e-8);
  // Lowest eigenvalue sits near the sharp value -3/4, below the stated -3/8.
  CHECK(rep.bound_check.extremal_eigenvalue == doctest::Approx(-0.70398013).epsilon(1e-6));
  CHECK_FALSE(rep.bound_check.passed);
  CHECK(check_ims_x2(g, 1e-2, kImsHardyBound).bound_check.passed);

  const auto zero = check_ims_x2(0.0 * reduced_laplacian(g), times(g, 1.0), 1e-2);
  CHECK(zero.bound_check.extremal_eigenvalue >= -3.0 / 8.0);
  CHECK(std::isinf(zero.identity_deviation));

  const auto coarse = check_ims_x2(make_log_grid(1e-2, 10, 64), 1e-2);
  CHECK(std::isfinite(coarse.bound_check.extremal_eigenvalue));
}

TEST_CASE("double commutator") {
  const auto g = default_grid();
  const auto rep = check_double_commutator_cube(g, 1e-1);
  CHECK(rep.passed);
  CHECK(rep.raw_extremal_eigenvalue.has_value());
  const auto a = reduced_laplacian(g);
  const auto flat = check_double_commutator(a, identity_operator(g), 1e-1);
  CHECK(flat.passed);
  CHECK(flat.extremal_eigenvalue == doctest::Approx(0.0));
  const auto exploratory = check_double_commutator(a, times(g, 1.0), 1e-1);
  CHECK(std::isfinite(exploratory.extremal_eigenvalue));
}

TEST_CASE("defects shrink under refinement") {
  double prev_hardy = 1e300, prev_lieb = 1e300;
  for (std::size_t n : {500u, 1000u, 2000u}) {
    const auto g = make_log_grid(1e-4, 1e2, n);
    const auto hardy = check_hardy(g, 1e-2);
    const auto lieb = check_lieb_symmetrization(g, 1e-2);
    CHECK(hardy.defect() <= prev_hardy);
    CHECK(lieb.defect() <= prev_lieb);
    prev_hardy = hardy.defect();
    prev_lieb = lieb.defect();
  }
}

TEST_CASE("report JSON record") {
  const nlohmann::json j = check_hardy(make_log_grid(1e-2, 10, 32), 1.0);
  for (const char* key : {"name", "extremal_eigenvalue", "tolerance", "passed", "grid"}) {
    CHECK(j.contains(key));
  }
}
