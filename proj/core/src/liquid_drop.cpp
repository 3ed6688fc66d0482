#include "ionlab/liquid_drop.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <limits>
#include <numeric>
#include <random>

#include <boost/math/quadrature/gauss.hpp>

#include "ionlab/errors.hpp"
#include "ionlab/parallel.hpp"

namespace ionlab {

namespace {

constexpr double kPi = std::numbers::pi;

using Gauss = boost::math::quadrature::gauss<double, 30>;

double ball_radius(double m) { return std::cbrt(3.0 * m / (4.0 * kPi)); }

void require_mass(double m) {
  if (!(m > 0.0) || !std::isfinite(m)) throw ParameterError("mass must be positive and finite");
}

double split_energy(double m) {
  return ball_energy(m).total - 2.0 * ball_energy(0.5 * m).total;
}

double f_prime(double s) {
  const double t = 1.0 - s;
  const double num = std::pow(s, 2.0 / 3.0) + std::pow(t, 2.0 / 3.0) - 1.0;
  const double den = 1.0 - std::pow(s, 5.0 / 3.0) - std::pow(t, 5.0 / 3.0);
  const double dnum = (2.0 / 3.0) * (std::pow(s, -1.0 / 3.0) - std::pow(t, -1.0 / 3.0));
  const double dden = -(5.0 / 3.0) * (std::pow(s, 2.0 / 3.0) - std::pow(t, 2.0 / 3.0));
  return (dnum * den - num * dden) / (den * den);
}

Eigen::Vector3d uniform_in_ball(std::mt19937_64& rng, double radius) {
  std::normal_distribution<double> g;
  std::uniform_real_distribution<double> u;
  Eigen::Vector3d v(g(rng), g(rng), g(rng));
  return v.normalized() * radius * std::cbrt(u(rng));
}

// int_0^pi [A cos t + B sin t]_+ sin t dt, split at the sign change.
double polar_integral(double a, double b) {
  double root = std::atan2(-a, b);
  if (root < 0.0) root += kPi;
  auto g = [a, b](double t) { return std::max(0.0, a * std::cos(t) + b * std::sin(t)) * std::sin(t); };
  double sum = 0.0;
  if (root > 0.0) sum += Gauss::integrate(g, 0.0, root);
  if (root < kPi) sum += Gauss::integrate(g, root, kPi);
  return sum;
}

}  // namespace

BallEnergy ball_energy(double m) {
  require_mass(m);
  const double per = unit_perimeter() * std::pow(m, 2.0 / 3.0);
  const double d = unit_coulomb() * std::pow(m, 5.0 / 3.0);
  return {per, d, per + d};
}

double unit_perimeter() { return std::cbrt(36.0 * kPi); }

double unit_coulomb() { return 0.6 * std::cbrt(4.0 * kPi / 3.0); }

double Ball::volume() const { return 4.0 * kPi / 3.0 * radius * radius * radius; }

bool BallConfiguration::disjoint() const {
  for (std::size_t i = 0; i < balls.size(); ++i) {
    for (std::size_t j = i + 1; j < balls.size(); ++j) {
      if ((balls[i].center - balls[j].center).norm() <= balls[i].radius + balls[j].radius) {
        return false;
      }
    }
  }
  return true;
}

double configuration_energy(const BallConfiguration& config) {
  if (config.balls.empty()) throw ParameterError("empty ball configuration");
  for (const auto& b : config.balls) {
    if (!(b.radius > 0.0) || !b.center.allFinite()) throw ParameterError("invalid ball");
  }
  if (!config.disjoint()) throw DomainError("balls overlap");
  double e = 0.0;
  for (std::size_t i = 0; i < config.balls.size(); ++i) {
    const double mi = config.balls[i].volume();
    e += ball_energy(mi).total;
    for (std::size_t j = i + 1; j < config.balls.size(); ++j) {
      e += mi * config.balls[j].volume() /
           (config.balls[i].center - config.balls[j].center).norm();
    }
  }
  return e;
}

double mstar() {
  const double c = std::cbrt(4.0);
  return 5.0 * (2.0 - c) / (c - 1.0);
}

double mstar_from_splitting() {
  double lo = 1.0, hi = 10.0;
  for (int k = 0; k < 200 && hi - lo > 1e-15 * hi; ++k) {
    const double mid = 0.5 * (lo + hi);
    (split_energy(mid) < 0.0 ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

double f_of_s(double s) {
  if (!(s > 0.0 && s < 1.0)) throw ParameterError("f(s) needs 0 < s < 1");
  const double t = 1.0 - s;
  return (std::pow(s, 2.0 / 3.0) + std::pow(t, 2.0 / 3.0) - 1.0) /
         (1.0 - std::pow(s, 5.0 / 3.0) - std::pow(t, 5.0 / 3.0));
}

FMinimum minimize_f() {
  const double ratio = (std::sqrt(5.0) - 1.0) / 2.0;
  double a = 1e-6, b = 1.0 - 1e-6;
  double c = b - ratio * (b - a), d = a + ratio * (b - a);
  double fc = f_of_s(c), fd = f_of_s(d);
  while (b - a > 1e-6) {
    if (fc < fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - ratio * (b - a);
      fc = f_of_s(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + ratio * (b - a);
      fd = f_of_s(d);
    }
  }
  // f is flat at the minimum; the sign of f' locates it to roundoff.
  for (int k = 0; k < 100 && b - a > 4.0 * std::numeric_limits<double>::epsilon(); ++k) {
    const double mid = 0.5 * (a + b);
    const double g = f_prime(mid);
    if (g == 0.0) {
      a = b = mid;
      break;
    }
    (g < 0.0 ? a : b) = mid;
  }
  const double s = 0.5 * (a + b);
  return {s, f_of_s(s)};
}

double binding_gap_lower_bound(double m, double s) {
  require_mass(m);
  const double t = 1.0 - s;
  const double split = std::pow(s, 5.0 / 3.0) + std::pow(t, 5.0 / 3.0) - 1.0;
  return split * (unit_coulomb() * m - f_of_s(s) * unit_perimeter()) * std::pow(m, 2.0 / 3.0);
}

CuttingReport cutting_identities_check(const Eigen::Vector3d& z, std::size_t mc_nodes,
                                       std::uint64_t seed, int quad_order) {
  if (!z.allFinite() || z.norm() == 0.0) throw ParameterError("z must be a nonzero finite vector");
  if (quad_order < 4) throw ParameterError("quad_order must be at least 4");
  CuttingReport rep{};
  rep.exact = 0.25 * z.norm();

  // Pole on the coordinate axis closest to z.
  Eigen::Index axis = 0;
  z.cwiseAbs().maxCoeff(&axis);
  const double pole = z[axis];
  const double e1 = z[(axis + 1) % 3], e2 = z[(axis + 2) % 3];
  const int nphi = 2 * quad_order;
  double sum = 0.0;
  for (int k = 0; k < nphi; ++k) {
    const double phi = 2.0 * kPi * k / nphi;
    sum += polar_integral(pole, e1 * std::cos(phi) + e2 * std::sin(phi));
  }
  rep.quadrature = sum * (2.0 * kPi / nphi) / (4.0 * kPi);

  if (mc_nodes > 0) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> g;
    double s1 = 0.0, s2 = 0.0;
    for (std::size_t i = 0; i < mc_nodes; ++i) {
      const Eigen::Vector3d nu = Eigen::Vector3d(g(rng), g(rng), g(rng)).normalized();
      const double v = std::max(0.0, nu.dot(z));
      s1 += v;
      s2 += v * v;
    }
    const double n = static_cast<double>(mc_nodes);
    rep.monte_carlo = s1 / n;
    rep.mc_std_error = std::sqrt(std::max(0.0, s2 / n - rep.monte_carlo * rep.monte_carlo) / n);
  }

  rep.slice_integral =
      Gauss::integrate([](double l) { return kPi * std::max(0.0, 1.0 - l * l); }, -1.0, 1.0);
  rep.ball_volume = 4.0 * kPi / 3.0;
  return rep;
}

bool nonexistence_certificate(double m) { return m > 8.0; }

BallMonteCarlo ball_monte_carlo(double m, std::size_t pairs, std::uint64_t seed) {
  require_mass(m);
  if (pairs < 64) throw ParameterError("ball_monte_carlo needs at least 64 pairs");
  const double r = ball_radius(m);
  const double delta = 0.05 * r;
  constexpr std::size_t kBatches = 16;

  struct Moments {
    double inv, inv2, shell;
    std::size_t n;
  };
  std::vector<std::size_t> batches(kBatches);
  std::iota(batches.begin(), batches.end(), std::size_t{0});
  const auto parts = parallel_map(batches, [&](std::size_t b) {
    std::mt19937_64 rng(split_seed(seed, b));
    const std::size_t n = pairs / kBatches + (b < pairs % kBatches ? 1 : 0);
    Moments mo{0.0, 0.0, 0.0, n};
    for (std::size_t i = 0; i < n; ++i) {
      const Eigen::Vector3d x = uniform_in_ball(rng, r);
      const Eigen::Vector3d y = uniform_in_ball(rng, r);
      const double v = 1.0 / (x - y).norm();
      mo.inv += v;
      mo.inv2 += v * v;
      if (uniform_in_ball(rng, r + delta).norm() > r - delta) mo.shell += 1.0;
    }
    return mo;
  });

  Moments tot{0.0, 0.0, 0.0, 0};
  for (const auto& p : parts) {
    tot.inv += p.inv;
    tot.inv2 += p.inv2;
    tot.shell += p.shell;
    tot.n += p.n;
  }
  const double n = static_cast<double>(tot.n);
  const double mean = tot.inv / n;
  const double var = std::max(0.0, tot.inv2 / n - mean * mean);
  const double p = tot.shell / n;
  const double outer = 4.0 * kPi / 3.0 * std::pow(r + delta, 3);

  BallMonteCarlo out{};
  out.coulomb = 0.5 * m * m * mean;
  out.coulomb_error = 0.5 * m * m * std::sqrt(var / n);
  out.perimeter = outer * p / (2.0 * delta);
  out.perimeter_error = outer * std::sqrt(p * (1.0 - p) / n) / (2.0 * delta);
  return out;
}

}  // namespace ionlab
