#include <doctest.h>

#include <cmath>

#include "ionlab/errors.hpp"
#include "ionlab/tf.hpp"
#include "ionlab/tfw.hpp"

using namespace ionlab;

namespace {

TFWSolution solve_at(double Z, double cw = 1.0) {
  TFWParams p;
  p.Z = Z;
  p.c_w = cw;
  return solve_tfw(p, tfw_grid(Z));
}

}  // namespace

TEST_CASE("positive excess charge at Z = 1") {
  const auto sol = solve_at(1.0);
  CHECK(sol.q > 0.0);
  CHECK(sol.q <= 10.0);
  CHECK(sol.q == doctest::Approx(0.0922144).epsilon(1e-5));
  CHECK(sol.energy == doctest::Approx(-0.0811671406).epsilon(1e-7));
  CHECK(tfw_residual(sol.u, sol.params) < 1e-6);
  CHECK(tfw_energy(sol.u, sol.params) == doctest::Approx(sol.energy).epsilon(1e-10));
  CHECK(sol.n_c == doctest::Approx(1.0 + sol.q).epsilon(1e-12));
}

TEST_CASE("increments contract from Z = 1 to 100") {
  const double q1 = solve_at(1.0).q, q10 = solve_at(10.0).q, q100 = solve_at(100.0).q;
  CHECK(q10 > 0.0);
  CHECK(q100 <= 10.0);
  CHECK(std::abs(q100 - q10) < std::abs(q10 - q1));
}

TEST_CASE("excess charge sweep") {
  const auto rows = excess_charge_sweep({1.0, 4.0, 16.0, 64.0}, {}, {});
  REQUIRE(rows.size() == 4);
  const double expected[] = {0.0922144, 0.1647449, 0.2197004, 0.2628322};
  for (std::size_t i = 0; i < 4; ++i) CHECK(rows[i].q == doctest::Approx(expected[i]).epsilon(1e-5));
  CHECK(std::abs(rows[3].q - rows[2].q) < std::abs(rows[1].q - rows[0].q));
  const auto trend = sweep_trend(rows);
  CHECK(trend.q);
  // u(1) and Phi(1) still grow with Z at desk scale.
  CHECK_FALSE(trend.phi_at_1);

  CHECK(excess_charge_sweep({2.0}, {}, {}).size() == 1);
  CHECK_THROWS_AS(excess_charge_sweep({}, {}, {}), ParameterError);
  CHECK_THROWS_AS(excess_charge_sweep({4.0, 1.0}, {}, {}), ParameterError);
}

TEST_CASE("subharmonic majorant") {
  for (double Z : {1.0, 50.0}) {
    CAPTURE(Z);
    const auto sol = solve_at(Z);
    const auto m = subharmonic_majorant_check(sol);
    CHECK(m.passed);
    CHECK(m.q_bound >= sol.q - 1e-6);
    CHECK(m.q_bound < 10.0);
  }
}

TEST_CASE("perturbed orbital is rejected") {
  auto sol = solve_at(1.0);
  std::vector<double> u(sol.u.vector());
  for (std::size_t i = 0; i < u.size(); ++i) {
    if (sol.u.grid().r(i) > 2.0) u[i] *= 1.5;
  }
  sol.u = RadialField(sol.u.grid_ptr(), u);
  CHECK_THROWS_AS(subharmonic_majorant_check(sol), DomainError);
}

TEST_CASE("small c_w drives q toward zero") {
  const double q1 = solve_at(1.0, 1.0).q;
  const double q2 = solve_at(1.0, 1e-2).q;
  const double q3 = solve_at(1.0, 1e-4).q;
  CHECK(q1 > q2);
  CHECK(q2 > q3);
  CHECK(q3 > 0.0);
  CHECK(q3 < 1e-5);
}

TEST_CASE("approach to the TF density") {
  const auto tf = solve_tf({1.0, 1.0}, tf_grid(1.0));
  const auto distance = [&](double Z) {
    const auto sol = solve_at(Z);
    const double scale = std::cbrt(Z);
    double num = 0.0, den = 0.0;
    const auto& g = tf.rho.grid();
    for (std::size_t i = 0; i < g.size(); ++i) {
      const double x = g.r(i);
      if (x < 0.1 || x > 10.0) continue;
      const double u = sol.u.at(x / scale);
      const double w = g.w(i) * x * x;
      num += w * std::abs(u * u / (Z * Z) - tf.rho[i]);
      den += w * tf.rho[i];
    }
    return num / den;
  };
  const double d1 = distance(1.0), d64 = distance(64.0), d512 = distance(512.0);
  CHECK(d64 < d1);
  CHECK(d512 < d64);
  CHECK(d512 < 0.02);
}

TEST_CASE("parameter validation") {
  TFWParams p;
  p.c_w = 0.0;
  CHECK_THROWS_AS(p.validate(), ParameterError);
  p = {};
  p.Z = -1.0;
  CHECK_THROWS_AS(p.validate(), ParameterError);
}
