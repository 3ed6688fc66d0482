#include <doctest.h>

#include <cmath>
#include <numbers>

#include "ionlab/band_eigen.hpp"
#include "ionlab/errors.hpp"
#include "ionlab/radial.hpp"

using namespace ionlab;

namespace {

constexpr double kPi = std::numbers::pi;

double hydrogen_ground(std::size_t n) {
  const auto grid = make_log_grid(1e-4, 1e2, n);
  const auto coul = RadialField::from_function(grid, [](double r) { return -1.0 / r; });
  const auto h = reduced_laplacian(grid) + multiplication_operator(coul);
  return extremal_eigenvalues(h.matrix, 1, SpectrumEnd::lowest).front();
}

}  // namespace

TEST_CASE("log grid layout") {
  const auto g = make_log_grid(1e-4, 1e2, 16);
  REQUIRE(g->size() == 16);
  CHECK(g->r_min() == doctest::Approx(1e-4).epsilon(1e-14));
  CHECK(g->r_max() == doctest::Approx(1e2).epsilon(1e-14));
  CHECK(g->r(1) / g->r(0) == doctest::Approx(g->r(15) / g->r(14)).epsilon(1e-13));
  CHECK_THROWS_AS(make_log_grid(1e-4, 1e2, 4), ParameterError);

  const auto d = default_grid();
  for (std::size_t i = 0; i < d->size(); ++i) {
    CHECK_GT(d->w(i), 0.0);
    if (i > 0) CHECK_GT(d->r(i), d->r(i - 1));
  }
  CHECK_THROWS_AS(make_log_grid(1.0, 1.0, 10), ParameterError);
  CHECK_THROWS_AS(make_log_grid(-1.0, 1.0, 10), ParameterError);
}

TEST_CASE("quadrature of e^{-r}") {
  const auto g = make_log_grid(1e-4, 1e2, 2000);
  CHECK(g->exp_quadrature_error() < 1e-6);
  double s = 0.0;
  for (std::size_t i = 0; i < g->size(); ++i) s += g->w(i) * std::exp(-g->r(i));
  CHECK(s == doctest::Approx(1.0).epsilon(1e-6));
}

TEST_CASE("integrate_3d analytic values") {
  const auto g = default_grid();
  const auto e = RadialField::from_function(g, [](double r) { return std::exp(-r); });
  CHECK(integrate_3d(e, 0) == doctest::Approx(8.0 * kPi).epsilon(1e-6));
  const auto gauss = RadialField::from_function(g, [](double r) { return std::exp(-r * r); });
  CHECK(integrate_3d(gauss, -1) == doctest::Approx(2.0 * kPi).epsilon(1e-6));
  CHECK(integrate_3d(RadialField(g), 2) == 0.0);

  SUBCASE("linear") {
    const auto sum = RadialField::from_function(
        g, [](double r) { return 2.0 * std::exp(-r) + 3.0 * std::exp(-r * r); });
    CHECK(integrate_3d(sum, 1) ==
          doctest::Approx(2.0 * integrate_3d(e, 1) + 3.0 * integrate_3d(gauss, 1)).epsilon(1e-13));
  }
}

TEST_CASE("density fields reject negative values") {
  const auto g = make_log_grid(1e-3, 10, 32);
  std::vector<double> v(g->size(), 1.0);
  v[5] = -1e-3;
  CHECK_THROWS_AS(RadialField(g, v, FieldKind::density), DomainError);
  CHECK_NOTHROW(RadialField(g, v, FieldKind::generic));
  CHECK_THROWS_AS(RadialField(g, std::vector<double>(3, 0.0)), ParameterError);
}

TEST_CASE("Newton potential of the hydrogen density") {
  const auto g = default_grid();
  const auto rho = RadialField::from_function(
      g, [](double r) { return std::exp(-r) / (8.0 * kPi); }, FieldKind::density);
  const auto phi = newton_potential(rho);
  double worst = 0.0;
  for (std::size_t i = 0; i < g->size(); ++i) {
    const double r = g->r(i);
    const double exact = 1.0 / r - std::exp(-r) * (1.0 / r + 0.5);
    worst = std::max(worst, std::abs(phi[i] - exact));
  }
  CHECK(worst < 1e-6);
  // r Phi(r) at the far end recovers the mass.
  CHECK(g->r_max() * phi[g->size() - 1] == doctest::Approx(integrate_3d(rho)).epsilon(1e-6));
  CHECK(total_charge(rho) == doctest::Approx(1.0).epsilon(1e-6));
}

TEST_CASE("Newton potential of a uniform ball") {
  const auto g = default_grid();
  const double R = 2.0, Q = 3.0;
  const double density = Q / (4.0 * kPi / 3.0 * R * R * R);
  const auto rho = RadialField::from_function(
      g, [&](double r) { return r < R ? density : 0.0; }, FieldKind::density);
  const auto phi = newton_potential(rho);
  const double q = total_charge(rho);
  for (std::size_t i = g->lower_index(1.01 * R); i < g->size(); i += 97) {
    CHECK(g->r(i) * phi[i] == doctest::Approx(q).epsilon(1e-12));
  }
  // The jump at R costs O(h) in the enclosed mass.
  CHECK(q == doctest::Approx(Q).epsilon(2e-2));
  CHECK(newton_potential(RadialField(g, FieldKind::density)).at(1.0) == 0.0);
}

TEST_CASE("reduced Laplacian") {
  const auto g = make_log_grid(1e-3, 10, 200);
  const auto a = reduced_laplacian(g);
  CHECK(a.asymmetry() == 0.0);
  std::vector<double> line(g->size());
  for (std::size_t i = 0; i < line.size(); ++i) line[i] = 2.5 * g->r(i);
  const auto out = a.apply(line);
  for (std::size_t i = 1; i + 1 < out.size(); ++i) CHECK(std::abs(out[i]) < 1e-9 * (1.0 + 1.0 / g->r(i)));
}

TEST_CASE("hydrogen ground state and refinement") {
  const double e1 = hydrogen_ground(2000);
  CHECK(e1 == doctest::Approx(-0.25).epsilon(4e-3));
  const double err1 = std::abs(hydrogen_ground(1000) + 0.25);
  const double err2 = std::abs(e1 + 0.25);
  CHECK(err2 < 0.5 * err1);
}

TEST_CASE("multiplication operators") {
  const auto g = make_log_grid(1e-3, 10, 64);
  const auto one = multiplication_operator(RadialField::from_function(g, [](double) { return 1.0; }));
  CHECK((one - identity_operator(g)).matrix.norm() == 0.0);
  const auto r = multiplication_operator(RadialField::from_function(g, [](double x) { return x; }));
  std::vector<double> phi(g->size());
  for (std::size_t i = 0; i < phi.size(); ++i) phi[i] = std::exp(-g->r(i));
  const auto rphi = r.apply(phi);
  for (std::size_t i = 0; i < phi.size(); ++i) {
    CHECK(rphi[i] == doctest::Approx(g->r(i) * std::exp(-g->r(i))).epsilon(1e-14));
  }
  const auto sq = multiplication_operator(RadialField::from_function(g, [](double x) { return x * x; }));
  CHECK(commutator(r, sq).matrix.norm() == 0.0);
}
