#include <doctest.h>

#include <cmath>
#include <random>

#include <Eigen/Geometry>

#include "ionlab/classical.hpp"
#include "ionlab/errors.hpp"

using namespace ionlab;

namespace {

PointConfig antipodal() { return {{Eigen::Vector3d(1, 0, 0), Eigen::Vector3d(-1, 0, 0)}}; }

}  // namespace

TEST_CASE("beta values") {
  CHECK(beta_value(antipodal()) == doctest::Approx(0.25).epsilon(1e-15));
  const double sphere = beta_value(fibonacci_sphere(500));
  CHECK(sphere >= 0.9);
  CHECK(sphere <= 1.05);
  CHECK_THROWS_AS(beta_value(PointConfig{{Eigen::Vector3d(1, 0, 0)}}), ParameterError);
  CHECK_THROWS_AS(beta_value(PointConfig{{Eigen::Vector3d(1, 0, 0), Eigen::Vector3d(1, 0, 0)}}),
                  DomainError);
  CHECK_THROWS_AS(beta_value(PointConfig{{Eigen::Vector3d(0, 0, 0), Eigen::Vector3d(1, 0, 0)}}),
                  DomainError);
}

TEST_CASE("beta is rotation and scale invariant") {
  const auto c = random_gaussian_config(12, 9);
  const Eigen::Matrix3d rot =
      Eigen::AngleAxisd(0.7, Eigen::Vector3d(1, 2, -1).normalized()).toRotationMatrix();
  PointConfig turned = c, scaled = c;
  for (auto& x : turned.points) x = rot * x;
  for (auto& x : scaled.points) x *= 3.7;
  CHECK(beta_value(turned) == doctest::Approx(beta_value(c)).epsilon(1e-12));
  CHECK(beta_value(scaled) == doctest::Approx(beta_value(c)).epsilon(1e-12));
}

TEST_CASE("beta gradient matches finite differences") {
  auto c = random_gaussian_config(6, 4);
  const auto grad = beta_gradient(c);
  const double h = 1e-6;
  for (std::size_t i = 0; i < c.size(); ++i) {
    for (int k = 0; k < 3; ++k) {
      auto plus = c, minus = c;
      plus.points[i][k] += h;
      minus.points[i][k] -= h;
      const double fd = (beta_value(plus) - beta_value(minus)) / (2.0 * h);
      CHECK(grad[i][k] == doctest::Approx(fd).epsilon(1e-6).scale(1.0));
    }
  }
}

TEST_CASE("beta optimization") {
  const auto two = beta_optimize(2, 4, 1);
  CHECK(two.best_value == doctest::Approx(0.25).epsilon(1e-8));

  const auto res = beta_optimize(50, 20, 1);
  CHECK(res.best_value >= beta_floor(50));
  CHECK(res.best_value <= 1.05);
  CHECK(res.restart_values.size() == 20);
  CHECK(res.best_value == doctest::Approx(0.80178024).epsilon(1e-6));
  CHECK(beta_value(res.best_config) == doctest::Approx(res.best_value).epsilon(1e-12));
  CHECK(beta_floor(50) == doctest::Approx(0.82 - 1.55 * std::pow(50.0, -2.0 / 3.0)));
}

TEST_CASE("pair functional") {
  const Eigen::Vector3d e1(1, 0, 0);
  CHECK(pair_functional(e1, -e1) == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(pair_functional(2.0 * e1, e1) == doctest::Approx(3.0).epsilon(1e-15));
  const Eigen::Vector3d x(0.3, -1.2, 0.5), y(-0.7, 0.1, 2.0);
  CHECK(pair_functional(4.0 * x, 4.0 * y) == doctest::Approx(pair_functional(x, y)).epsilon(1e-13));

  const auto scan = pair_infimum_scan(100000, 1);
  CHECK(scan.min_found >= 0.5 - 1e-6);
  CHECK(scan.min_found <= 0.501);
  CHECK(pair_functional(scan.x, scan.y) == doctest::Approx(scan.min_found).epsilon(1e-14));
}

TEST_CASE("Sigal inequality") {
  const auto basic = sigal_trials(10, 0.0, false, 1000, 1);
  CHECK(basic.passed == basic.trials);
  CHECK(sigal_basic_charge(10) == 4.5);

  const auto improved = sigal_trials(200, 0.1, true, 1000, 1);
  CHECK(improved.passed == improved.trials);

  // With charge N the inequality fails for points spread on a sphere.
  CHECK(sigal_margin(fibonacci_sphere(100), 100.0) < 0.0);
  CHECK_THROWS_AS(sigal_margin(PointConfig{{Eigen::Vector3d(1, 0, 0)}}, 1.0), ParameterError);
}

TEST_CASE("triangle inequality") {
  const Eigen::Vector3d y(0.4, -1.0, 2.0);
  CHECK((y.norm() + y.norm()) / (2.0 * y).norm() == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(triangle_symmetrization_check(100000, 1) >= 1.0 - 1e-12);
}
