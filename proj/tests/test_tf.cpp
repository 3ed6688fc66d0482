#include <doctest.h>

#include <cmath>
#include <numbers>

#include "ionlab/errors.hpp"
#include "ionlab/tf.hpp"

using namespace ionlab;

namespace {

double weighted_l1(const RadialField& a, const RadialField& b) {
  const auto& g = a.grid();
  double s = 0.0;
  for (std::size_t i = 0; i < g.size(); ++i) s += g.w(i) * g.r(i) * g.r(i) * std::abs(a[i] - b[i]);
  return 4.0 * std::numbers::pi * s;
}

}  // namespace

TEST_CASE("maximum ionization") {
  for (auto [Z, N] : {std::pair{1.0, 2.0}, {5.0, 10.0}, {20.0, 40.0}}) {
    CAPTURE(Z);
    const auto sol = solve_tf({Z, N}, tf_grid(Z));
    CHECK(sol.mass == doctest::Approx(Z).epsilon(1e-3));
    CHECK(sol.mu == doctest::Approx(0.0).scale(1.0).epsilon(1e-8));
  }
}

TEST_CASE("ionized state has an active constraint") {
  const auto sol = solve_tf({1.0, 0.5}, tf_grid(1.0));
  CHECK(sol.mass == doctest::Approx(0.5).epsilon(1e-6));
  CHECK(sol.mu > 0.0);
  CHECK(sol.mu * std::abs(0.5 - sol.mass) < 1e-8);
  for (std::size_t i = 0; i < sol.phi.size(); ++i) CHECK(sol.phi[i] + sol.mu >= -1e-10);
  const auto tail = tf_tail_exponent(sol, 5.0, 50.0);
  CHECK(tail.compact_support);
  CHECK(std::isnan(tail.exponent));
}

TEST_CASE("grid refinement") {
  const auto coarse = solve_tf({1.0, 1.0}, tf_grid(1.0, 4000));
  const auto fine = solve_tf({1.0, 1.0}, tf_grid(1.0, 8000));
  CHECK(std::abs(fine.energy - coarse.energy) < 1e-4 * std::abs(fine.energy));
}

TEST_CASE("energy functional") {
  const auto g = tf_grid(1.0);
  CHECK(tf_energy(RadialField(g, FieldKind::density), {1.0, 1.0}) == 0.0);
  TFParams p{1.0, 1.0, 1.0};
  const auto sol = solve_tf(p, g);
  CHECK(tf_energy(sol.rho, p) == doctest::Approx(sol.energy).epsilon(1e-10));
}

TEST_CASE("energy is nonincreasing in N and flat above Z") {
  const auto g = tf_grid(2.0);
  double prev = 0.0;
  std::vector<double> es;
  for (double N : {0.5, 1.0, 1.5, 2.0, 3.0, 4.0}) {
    const double e = solve_tf({2.0, N}, g).energy;
    CHECK(e <= prev + 1e-10);
    prev = e;
    es.push_back(e);
  }
  CHECK(es[5] == doctest::Approx(es[3]).epsilon(1e-6));
}

TEST_CASE("unique minimizer from different starts") {
  const auto g = tf_grid(1.0);
  TFOptions a, b;
  a.initial_density = std::vector<double>(g->size());
  b.initial_density = std::vector<double>(g->size());
  for (std::size_t i = 0; i < g->size(); ++i) {
    const double r = g->r(i);
    (*a.initial_density)[i] = std::exp(-2.0 * r) / std::numbers::pi;
    (*b.initial_density)[i] = 0.1 * std::exp(-0.3 * r);
  }
  const auto sa = solve_tf({1.0, 1.0}, g, a);
  const auto sb = solve_tf({1.0, 1.0}, g, b);
  CHECK(weighted_l1(sa.rho, sb.rho) < 1e-6);
}

TEST_CASE("scaling identity") {
  const auto g = tf_grid(1.0);
  CHECK(tf_scaling_check({1.0, 1.0}, g) < 1e-12);
  CHECK(tf_scaling_check({10.0, 10.0}, g) < 1e-3);
  CHECK(tf_scaling_check({100.0, 90.0}, g) < 1e-3);
}

TEST_CASE("neutral tail") {
  const auto sol = solve_tf({1.0, 1.0}, tf_grid(1.0));
  const auto far = tf_tail_exponent(sol, 1e3, 2.5e3);
  CHECK(far.exponent == doctest::Approx(-4.0).epsilon(0.1 / 4.0));
  // Phi = A r^{-4} solves the TF equation when 12 A = 4 pi (3A/(5c))^{3/2}.
  const double c = kTfConstant;
  const double A = std::pow(12.0 / (4.0 * std::numbers::pi), 2.0) * std::pow(5.0 * c / 3.0, 3.0);
  CHECK(12.0 * A == doctest::Approx(4.0 * std::numbers::pi * std::pow(3.0 * A / (5.0 * c), 1.5)));
  CHECK(far.amplitude == doctest::Approx(A).epsilon(0.05));
  // The r^{-4} law sets in slowly: the [5, 50] window is still far from it.
  CHECK(tf_tail_exponent(sol, 5.0, 50.0).exponent == doctest::Approx(-2.82).epsilon(0.01));
}

TEST_CASE("parameter validation") {
  CHECK_THROWS_AS(solve_tf({0.0, 1.0}, tf_grid(1.0)), ParameterError);
  CHECK_THROWS_AS(solve_tf({1.0, -1.0}, tf_grid(1.0)), ParameterError);
  CHECK_THROWS_AS(tf_grid(-1.0), ParameterError);
}
