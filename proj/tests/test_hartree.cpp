#include <doctest.h>

#include <cmath>
#include <numbers>

#include "ionlab/errors.hpp"
#include "ionlab/hartree.hpp"

using namespace ionlab;

namespace {

constexpr double kPi = std::numbers::pi;

RadialField normalized_exp(const GridPtr& g) {
  return RadialField::from_function(g, [](double r) { return std::exp(-r) / std::sqrt(kPi); });
}

}  // namespace

TEST_CASE("hydrogen limit") {
  const auto g = hartree_grid();
  const auto s = minimize_e(1e-6, g);
  CHECK(s.mu == doctest::Approx(0.25).epsilon(1e-2));
  CHECK(s.energy == doctest::Approx(-0.25e-6).epsilon(1e-2));
  CHECK(s.bound_mass == doctest::Approx(1e-6));
}

TEST_CASE("bound state below the critical mass") {
  const auto g = hartree_grid();
  const auto s = minimize_e(1.0, g);
  CHECK(s.energy < 0.0);
  CHECK(s.mu > 0.0);
  CHECK(s.bound_mass == doctest::Approx(1.0));
  CHECK(s.energy == doctest::Approx(-0.12198283).epsilon(1e-6));
}

TEST_CASE("e(t) curve") {
  const auto g = hartree_grid();
  const auto low = e_curve({0.2, 0.6, 1.0}, g);
  CHECK(low[0].e > low[1].e);
  CHECK(low[1].e > low[2].e);
  CHECK(low[0].mu >= low[1].mu);
  CHECK(low[1].mu >= low[2].mu);

  const auto high = e_curve({1.6, 1.8, 2.0}, g);
  CHECK(std::abs(high[0].e - high[1].e) < 1e-4);
  CHECK(std::abs(high[1].e - high[2].e) < 1e-4);
  for (const auto& p : high) CHECK(p.bound_mass < p.t);
  CHECK(high[2].e == doctest::Approx(-0.12419113).epsilon(1e-6));

  CHECK_THROWS_AS(e_curve({}, g), ParameterError);
}

TEST_CASE("critical mass") {
  const double tc = compute_tc(hartree_grid(), 1e-2);
  CHECK(tc >= 1.15);
  CHECK(tc <= 1.27);
  CHECK(tc < 1.5211);
  CHECK(tc > 1.0);
}

TEST_CASE("scaling to general nuclear charge") {
  const auto g = hartree_grid();
  const auto s = hartree_scaling(3, 2.0, g);
  CHECK(s.direct == doctest::Approx(s.rescaled).epsilon(1e-3));
}

TEST_CASE("Hoffmann-Ostenhof equality on product states") {
  const auto g = hartree_grid();
  const auto u = normalized_exp(g);
  const auto ho = hoffmann_ostenhof_product_check(u, 3);
  CHECK(ho.lhs == doctest::Approx(ho.rhs).epsilon(1e-8));
  // int |grad u|^2 = 1 for u = e^{-r}/sqrt(pi).
  CHECK(ho.lhs == doctest::Approx(3.0).epsilon(1e-4));
  const auto gauss = RadialField::from_function(
      g, [](double r) { return std::pow(2.0 / kPi, 0.75) * std::exp(-r * r); });
  const auto hg = hoffmann_ostenhof_product_check(gauss, 1);
  CHECK(hg.lhs == doctest::Approx(hg.rhs).epsilon(1e-8));
  CHECK_THROWS_AS(hoffmann_ostenhof_product_check(u, 0), ParameterError);
}

TEST_CASE("Lieb-Oxford margin on product states") {
  const auto u = normalized_exp(hartree_grid());
  // int u^{8/3} = (27/64) pi^{-1/3}, D(u^2, u^2) = 5/8.
  const auto oracle = [](double n) {
    return 1.68 * std::pow(n, 4.0 / 3.0) * 27.0 / 64.0 * std::pow(kPi, -1.0 / 3.0) - n * 5.0 / 16.0;
  };
  for (int n : {1, 2, 50}) {
    CAPTURE(n);
    CHECK(lieb_oxford_product_check(u, n) == doctest::Approx(oracle(n)).epsilon(1e-4));
  }
  CHECK(lieb_oxford_product_check(u, 2) > 0.0);
  CHECK(lieb_oxford_product_check(u, 50) > 0.0);
}

TEST_CASE("Coulomb pairing of the hydrogen density") {
  const auto g = hartree_grid();
  const auto rho = RadialField::from_function(g, [](double r) { return std::exp(-2.0 * r) / kPi; });
  CHECK(coulomb_pairing(rho, rho) == doctest::Approx(5.0 / 8.0).epsilon(1e-5));
  CHECK(radial_kinetic(normalized_exp(g)) == doctest::Approx(1.0).epsilon(1e-5));
}
