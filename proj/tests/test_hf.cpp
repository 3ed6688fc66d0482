#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include <Eigen/Dense>

#include "ionlab/errors.hpp"
#include "ionlab/hf.hpp"

using namespace ionlab;

namespace {

constexpr double kPi = std::numbers::pi;

Eigen::MatrixXd random_projection(int d, int n, std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  Eigen::MatrixXd a(d, d);
  for (int i = 0; i < d; ++i) {
    for (int j = 0; j < d; ++j) a(i, j) = g(rng);
  }
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(a);
  const Eigen::MatrixXd q = qr.householderQ() * Eigen::MatrixXd::Identity(d, n);
  return q * q.transpose();
}

// Random orthogonal eigenbasis with occupations uniform in [0, 1].
Eigen::MatrixXd random_box_density(int d, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u;
  Eigen::VectorXd occ(d);
  for (int i = 0; i < d; ++i) occ(i) = u(rng);
  Eigen::MatrixXd a(d, d);
  std::normal_distribution<double> g;
  for (int i = 0; i < d; ++i) {
    for (int j = 0; j < d; ++j) a(i, j) = g(rng);
  }
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(a);
  const Eigen::MatrixXd q = qr.householderQ();
  return q * occ.asDiagonal() * q.transpose();
}

double brute_force_energy(const Eigen::MatrixXd& gamma, const OneBodyBasis& b) {
  const int d = b.dim();
  double e = 0.0;
  for (int i = 0; i < d; ++i) {
    for (int j = 0; j < d; ++j) e += b.h0()(i, j) * gamma(j, i);
  }
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j)
      for (int k = 0; k < d; ++k)
        for (int l = 0; l < d; ++l)
          e += 0.5 * b.eri(i, j, k, l) * (gamma(j, i) * gamma(l, k) - gamma(j, k) * gamma(l, i));
  return e;
}

// <g|-Delta - z/r|g> for g = (2a/pi)^{3/4} e^{-a r^2} by radial Simpson quadrature.
double h0_by_quadrature(double a, double z) {
  const double c = std::pow(2.0 * a / kPi, 0.75);
  const int n = 200000;
  const double rmax = 12.0 / std::sqrt(a), h = rmax / n;
  double s = 0.0;
  for (int i = 0; i <= n; ++i) {
    const double r = i * h;
    const double g = c * std::exp(-a * r * r);
    const double dg = -2.0 * a * r * g;
    const double f = 4.0 * kPi * (r * r * dg * dg - z * r * g * g);
    s += f * ((i == 0 || i == n) ? 1.0 : (i % 2 ? 4.0 : 2.0));
  }
  return s * h / 3.0;
}

}  // namespace

TEST_CASE("single Gaussian matrix elements") {
  const auto b = build_sgauss_basis(1.0, {0.5});
  REQUIRE(b.dim() == 1);
  CHECK(b.h0()(0, 0) == doctest::Approx(h0_by_quadrature(0.5, 1.0)).epsilon(1e-8));
  CHECK(b.h0()(0, 0) == doctest::Approx(1.5 - 2.0 * std::sqrt(1.0 / kPi)).epsilon(1e-13));
  // Self-repulsion of a normalized Gaussian: 2 sqrt(a/pi).
  CHECK(b.eri(0, 0, 0, 0) == doctest::Approx(2.0 * std::sqrt(0.5 / kPi)).epsilon(1e-13));
  CHECK(boys_f0(0.0) == 1.0);
  CHECK(boys_f0(1.0) == doctest::Approx(0.5 * std::sqrt(kPi) * std::erf(1.0)).epsilon(1e-14));
}

TEST_CASE("basis construction") {
  const auto b = build_sgauss_basis(2.0, {0.3, 1.2, 4.8});
  CHECK(b.eri_asymmetry() == 0.0);
  CHECK((b.h0() - b.h0().transpose()).norm() == 0.0);
  CHECK_THROWS_AS(build_sgauss_basis(1.0, {1.0, 1.0}), BasisError);
  CHECK_THROWS_AS(build_sgauss_basis(1.0, {}), ParameterError);
  CHECK_THROWS_AS(build_sgauss_basis(1.0, {1.0, 1.0 + 1e-9}), BasisError);
}

TEST_CASE("interaction is positive and exchange is dominated") {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 10; ++trial) {
    const auto b = random_sgauss_basis(trial, 4);
    const auto gamma = random_box_density(4, rng);
    const auto in = hf_interaction(gamma, b);
    CHECK(in.direct >= 0.0);
    CHECK(in.direct - in.exchange >= -1e-12);
    CHECK(hf_energy(gamma, b) == doctest::Approx(brute_force_energy(gamma, b)).epsilon(1e-12));
  }
}

TEST_CASE("energy special cases") {
  const auto b = random_sgauss_basis(3, 4);
  CHECK(hf_energy(Eigen::MatrixXd::Zero(4, 4), b) == 0.0);
  std::mt19937_64 rng(5);
  const auto p = random_projection(4, 1, rng);
  const auto in = hf_interaction(p, b);
  CHECK(in.direct == doctest::Approx(in.exchange).epsilon(1e-12));
  CHECK(hf_energy(p, b) == doctest::Approx((b.h0() * p).trace()).epsilon(1e-12));
}

TEST_CASE("SCF") {
  const auto one = build_sgauss_basis(1.0, {0.5});
  const auto s1 = solve_hf_scf(one, 1);
  CHECK(s1.gamma(0, 0) == doctest::Approx(1.0));
  CHECK(s1.energy == doctest::Approx(one.h0()(0, 0)));

  const auto he = build_sgauss_basis(2.0, {0.3, 1.2, 4.8});
  const auto s = solve_hf_scf(he, 2);
  CHECK(s.energy == doctest::Approx(1.7864206238).epsilon(1e-9));
  std::mt19937_64 rng(7);
  for (int k = 0; k < 50; ++k) CHECK(s.energy <= hf_energy(random_projection(3, 2, rng), he) + 1e-12);

  const auto full = solve_hf_scf(he, 3);
  CHECK((full.gamma - Eigen::MatrixXd::Identity(3, 3)).norm() < 1e-12);
  CHECK(full.energy == doctest::Approx(hf_energy(Eigen::MatrixXd::Identity(3, 3), he)));
  CHECK_THROWS_AS(solve_hf_scf(he, 4), ParameterError);
}

TEST_CASE("relaxed problem") {
  const auto b = random_sgauss_basis(21, 4);
  const auto r1 = solve_hf_relaxed(b, 1);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(b.h0());
  CHECK(r1.energy == doctest::Approx(es.eigenvalues()(0)).epsilon(1e-8));
  const auto r2 = solve_hf_relaxed(b, 2);
  const auto s2 = solve_hf_scf(b, 2);
  CHECK(std::abs(r2.energy - s2.energy) <= 1e-6 * (1.0 + std::abs(s2.energy)));
  const auto r0 = solve_hf_relaxed(b, 0);
  CHECK(r0.energy == 0.0);
  CHECK(r0.gamma.norm() == 0.0);
}

TEST_CASE("box projection and push to a projection") {
  std::mt19937_64 rng(3);
  const auto b = random_sgauss_basis(8, 5);
  const auto gamma = project_density_box(random_box_density(5, rng) * 3.0, 2.0);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(gamma);
  CHECK(es.eigenvalues().minCoeff() >= -1e-12);
  CHECK(es.eigenvalues().maxCoeff() <= 1.0 + 1e-12);
  CHECK(gamma.trace() == doctest::Approx(2.0));
  const auto p = push_to_projection(gamma, b);
  CHECK((p * p - p).norm() < 1e-9);
  CHECK(p.trace() == doctest::Approx(2.0));
  CHECK(hf_energy(p, b) <= hf_energy(gamma, b) + 1e-10);
}

TEST_CASE("exact diagonalization") {
  const auto b = random_sgauss_basis(4, 4);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(b.h0());
  CHECK(exact_diagonalization(b, 1) == doctest::Approx(es.eigenvalues()(0)).epsilon(1e-12));
  CHECK(exact_diagonalization(b, 4) ==
        doctest::Approx(hf_energy(Eigen::MatrixXd::Identity(4, 4), b)).epsilon(1e-12));
  CHECK(exact_diagonalization(b, 2) <= solve_hf_scf(b, 2).energy + 1e-12);
  CHECK(exact_diagonalization(b, 0) == 0.0);
  CHECK(binomial(6, 3) == 20);
  CHECK(binomial(40, 20) > kMaxSectorDimension);
}

TEST_CASE("large sector uses the iterative solver") {
  std::vector<double> exps;
  for (int k = 0; k < 14; ++k) exps.push_back(0.02 * std::pow(2.2, k));
  const auto b = build_sgauss_basis(6.0, exps);
  CHECK(binomial(14, 6) > 2000);
  const double ed = exact_diagonalization(b, 6);
  CHECK(ed <= solve_hf_scf(b, 6).energy + 1e-9);
}

TEST_CASE("spectrum scan") {
  const auto strong = spectrum_scan(build_sgauss_basis(4.0, {0.02, 0.1, 0.6, 4.0}));
  REQUIRE(strong.energies.size() == 5);
  for (int n = 1; n <= 3; ++n) CHECK(strong.energies[n] < strong.energies[n - 1]);
  CHECK(strong.energies[1] == doctest::Approx(-3.8599).epsilon(1e-4));

  const auto weak = spectrum_scan(build_sgauss_basis(0.1, {0.2, 0.9, 3.5, 14.0}));
  CHECK(weak.energies.size() == 5);

  const auto tiny = spectrum_scan(build_sgauss_basis(1.0, {0.3, 2.0}));
  CHECK(tiny.energies.size() == 3);
  CHECK(tiny.energies[0] == 0.0);
}
