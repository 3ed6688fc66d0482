#include <doctest.h>

#include <cmath>
#include <numbers>

#include "ionlab/errors.hpp"
#include "ionlab/liquid_drop.hpp"

using namespace ionlab;

namespace {

constexpr double kPi = std::numbers::pi;

double radius_of(double m) { return std::cbrt(3.0 * m / (4.0 * kPi)); }

}  // namespace

TEST_CASE("ball closed forms") {
  const auto b = ball_energy(1.0);
  CHECK(b.perimeter == doctest::Approx(std::cbrt(36.0 * kPi)).epsilon(1e-15));
  CHECK(b.coulomb == doctest::Approx(0.6 * std::cbrt(4.0 * kPi / 3.0)).epsilon(1e-15));
  CHECK(b.perimeter / b.coulomb == doctest::Approx(5.0).epsilon(1e-12));
  CHECK(b.total == b.perimeter + b.coulomb);
  // Surface area and self-energy from the radius.
  const double R = radius_of(2.5);
  const auto b2 = ball_energy(2.5);
  CHECK(b2.perimeter == doctest::Approx(4.0 * kPi * R * R).epsilon(1e-14));
  CHECK(b2.coulomb == doctest::Approx(0.6 * 2.5 * 2.5 / R).epsilon(1e-14));
  const auto small = ball_energy(1e-6);
  CHECK(small.coulomb / small.perimeter < 1e-5);
  CHECK_THROWS_AS(ball_energy(0.0), ParameterError);
}

TEST_CASE("Monte Carlo cross-check") {
  const auto b = ball_energy(1.0);
  const auto mc = ball_monte_carlo(1.0, 1000000, 42);
  CHECK(std::abs(mc.perimeter / b.perimeter - 1.0) < 5e-3);
  CHECK(std::abs(mc.coulomb / b.coulomb - 1.0) < 5e-3);
  const auto again = ball_monte_carlo(1.0, 1000000, 42);
  CHECK(again.coulomb == mc.coulomb);
}

TEST_CASE("configurations of balls") {
  const double r2 = radius_of(2.0);
  BallConfiguration far{{{Eigen::Vector3d(0, 0, 0), r2}, {Eigen::Vector3d(1e6, 0, 0), r2}}};
  CHECK(far.disjoint());
  CHECK(configuration_energy(far) - 2.0 * ball_energy(2.0).total == doctest::Approx(4e-6).epsilon(1e-6));
  far.balls[1].center.x() = 1e10;
  CHECK(std::abs(configuration_energy(far) - 2.0 * ball_energy(2.0).total) < 1e-9);

  const double r1 = radius_of(1.0);
  BallConfiguration pair{{{Eigen::Vector3d(0, 0, 0), r1}, {Eigen::Vector3d(0, 10, 0), r1}}};
  CHECK(configuration_energy(pair) - 2.0 * ball_energy(1.0).total == doctest::Approx(0.1).epsilon(1e-12));

  BallConfiguration overlap{{{Eigen::Vector3d(0, 0, 0), 1.0}, {Eigen::Vector3d(1.5, 0, 0), 1.0}}};
  CHECK_FALSE(overlap.disjoint());
  CHECK_THROWS_AS(configuration_energy(overlap), DomainError);
}

TEST_CASE("threshold mass") {
  const double closed = 5.0 * (2.0 - std::pow(2.0, 2.0 / 3.0)) / (std::pow(2.0, 2.0 / 3.0) - 1.0);
  CHECK(mstar() == doctest::Approx(closed).epsilon(1e-12));
  CHECK(mstar() == doctest::Approx(3.5121).epsilon(1e-4));
  CHECK(std::abs(mstar_from_splitting() - mstar()) < 1e-8);
  CHECK(std::abs(5.0 * minimize_f().f - mstar()) < 1e-8);
}

TEST_CASE("f(s)") {
  for (double s : {0.01, 0.1, 0.3, 0.45}) CHECK(f_of_s(s) == doctest::Approx(f_of_s(1.0 - s)).epsilon(1e-12));
  const auto best = minimize_f();
  CHECK(std::abs(best.s - 0.5) < 1e-8);
  CHECK(f_of_s(0.5) ==
        doctest::Approx((std::cbrt(2.0) - 1.0) / (1.0 - std::pow(2.0, -2.0 / 3.0))).epsilon(1e-14));
  // Dense scan oracle.
  double scan_min = 1e300;
  for (int k = 1; k < 10000; ++k) scan_min = std::min(scan_min, f_of_s(k / 10000.0));
  CHECK(best.f <= scan_min + 1e-14);
  CHECK_THROWS_AS(f_of_s(0.0), ParameterError);
  CHECK_THROWS_AS(f_of_s(1.0), ParameterError);
}

TEST_CASE("binding gap lower bound") {
  CHECK(binding_gap_lower_bound(3.0, 0.5) > 0.0);
  CHECK(binding_gap_lower_bound(3.6, 0.5) < 0.0);
  CHECK(std::abs(binding_gap_lower_bound(mstar(), minimize_f().s)) < 1e-9);

  const auto positive_everywhere = [](double m) {
    for (int k = 1; k < 1000; ++k) {
      if (binding_gap_lower_bound(m, k / 1000.0) <= 0.0) return false;
    }
    return true;
  };
  CHECK(positive_everywhere(mstar() - 1e-6));
  CHECK_FALSE(positive_everywhere(mstar() + 1e-6));
}

TEST_CASE("cutting identities") {
  const auto pole = cutting_identities_check(Eigen::Vector3d(0, 0, 1), 0);
  CHECK(std::abs(pole.quadrature - 0.25) < 1e-8);
  CHECK(std::abs(pole.slice_integral - 4.0 * kPi / 3.0) < 1e-6);
  for (const Eigen::Vector3d z : {Eigen::Vector3d(1, 2, 3), Eigen::Vector3d(5, 0, 0),
                                  Eigen::Vector3d(1, 1, 1e-3), Eigen::Vector3d(-0.3, 0.7, -2)}) {
    const auto c = cutting_identities_check(z, 200000, 3);
    CHECK(std::abs(c.quadrature - z.norm() / 4.0) < 1e-8);
    CHECK(std::abs(c.monte_carlo - c.exact) < 5.0 * c.mc_std_error);
  }
  CHECK_THROWS_AS(cutting_identities_check(Eigen::Vector3d::Zero(), 10), ParameterError);
}

TEST_CASE("nonexistence certificate") {
  CHECK(nonexistence_certificate(9.0));
  CHECK_FALSE(nonexistence_certificate(8.0));
  CHECK_FALSE(nonexistence_certificate(3.0));
}
