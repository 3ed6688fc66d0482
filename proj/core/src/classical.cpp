#include "ionlab/classical.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>
#include <random>
#include <string>

#include "ionlab/errors.hpp"
#include "ionlab/parallel.hpp"

namespace ionlab {

namespace {

using Points = std::vector<Eigen::Vector3d>;

Points gaussian_points(std::size_t n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal;
  Points p(n);
  for (auto& x : p) x = {normal(rng), normal(rng), normal(rng)};
  return p;
}

double norm2(const Points& g) {
  double s = 0.0;
  for (const auto& v : g) s += v.squaredNorm();
  return s;
}

// Scale-free: keep the mean radius at 1 so step lengths stay comparable.
void normalize_radius(Points& p) {
  double mean = 0.0;
  for (const auto& x : p) mean += x.norm();
  mean /= static_cast<double>(p.size());
  for (auto& x : p) x /= mean;
}

// beta and (optionally) its gradient in one pass over pairs; no validation.
double beta_eval(const Points& x, Points* grad) {
  const std::size_t n = x.size();
  double num = 0.0, den = 0.0;
  if (grad) grad->assign(n, Eigen::Vector3d::Zero());
  for (std::size_t i = 0; i < n; ++i) {
    const double ai = x[i].squaredNorm();
    den += std::sqrt(ai);
    for (std::size_t j = i + 1; j < n; ++j) {
      const Eigen::Vector3d d = x[i] - x[j];
      const double r = d.norm();
      const double s = ai + x[j].squaredNorm();
      num += s / r;
      if (grad) {
        const Eigen::Vector3d c = s / (r * r * r) * d;
        (*grad)[i] += 2.0 * x[i] / r - c;
        (*grad)[j] += 2.0 * x[j] / r + c;
      }
    }
  }
  const double big = static_cast<double>(n) * den;
  const double f = num / big;
  if (grad) {
    for (std::size_t k = 0; k < n; ++k) {
      (*grad)[k] = ((*grad)[k] - f * static_cast<double>(n) * x[k] / x[k].norm()) / big;
    }
  }
  return f;
}

double descend_beta(Points& p) {
  constexpr int kMaxIterations = 20000;
  constexpr double kGradTol = 1e-10;
  constexpr int kWindow = 100;
  constexpr double kStall = 1e-12;
  Points g, gt, trial(p.size());
  double f = beta_eval(p, &g);
  double step = 1e-2;
  double checkpoint = f;
  for (int it = 0; it < kMaxIterations; ++it) {
    const double gg = norm2(g);
    if (std::sqrt(gg) < kGradTol) break;
    if (it > 0 && it % kWindow == 0) {
      if (checkpoint - f < kStall * f) break;
      checkpoint = f;
    }
    bool accepted = false;
    for (int k = 0; k < 60; ++k, step *= 0.5) {
      for (std::size_t i = 0; i < p.size(); ++i) trial[i] = p[i] - step * g[i];
      const double ft = beta_eval(trial, nullptr);
      if (!std::isfinite(ft) || ft > f - 1e-4 * step * gg) continue;
      normalize_radius(trial);
      f = beta_eval(trial, &gt);
      // Barzilai-Borwein length for the next step.
      double sy = 0.0, yy = 0.0;
      for (std::size_t i = 0; i < p.size(); ++i) {
        sy += (trial[i] - p[i]).dot(gt[i] - g[i]);
        yy += (gt[i] - g[i]).squaredNorm();
      }
      std::swap(p, trial);
      std::swap(g, gt);
      step = (sy > 0.0 && yy > 0.0) ? std::clamp(sy / yy, 1e-8, 1e2) : 2.0 * step;
      accepted = true;
      break;
    }
    if (!accepted) break;
  }
  return f;
}

double local_pair_descent(Eigen::Vector3d& x, Eigen::Vector3d& y) {
  constexpr double kH = 1e-7;
  double f = pair_functional(x, y);
  double step = 1e-2;
  for (int it = 0; it < 5000; ++it) {
    Eigen::Matrix<double, 6, 1> g;
    for (int k = 0; k < 6; ++k) {
      Eigen::Vector3d xp = x, xm = x, yp = y, ym = y;
      if (k < 3) {
        xp[k] += kH;
        xm[k] -= kH;
      } else {
        yp[k - 3] += kH;
        ym[k - 3] -= kH;
      }
      g[k] = (pair_functional(xp, yp) - pair_functional(xm, ym)) / (2.0 * kH);
    }
    const double gg = g.squaredNorm();
    if (gg < 1e-20) break;
    bool accepted = false;
    for (int k = 0; k < 50; ++k, step *= 0.5) {
      const Eigen::Vector3d xt = x - step * g.head<3>();
      const Eigen::Vector3d yt = y - step * g.tail<3>();
      if ((xt - yt).norm() == 0.0) continue;
      const double ft = pair_functional(xt, yt);
      if (ft <= f - 1e-4 * step * gg) {
        const double s = xt.norm();
        x = xt / s;
        y = yt / s;
        f = ft;
        accepted = true;
        step *= 4.0;
        break;
      }
    }
    if (!accepted) break;
  }
  return f;
}

}  // namespace

void PointConfig::validate() const {
  for (std::size_t i = 0; i < points.size(); ++i) {
    if (!points[i].allFinite()) throw DomainError("PointConfig: non-finite point");
    if (points[i].norm() == 0.0) throw DomainError("PointConfig: point at the origin");
    for (std::size_t j = 0; j < i; ++j) {
      if ((points[i] - points[j]).norm() == 0.0) {
        throw DomainError("PointConfig: coincident points " + std::to_string(j) + ", " +
                          std::to_string(i));
      }
    }
  }
}

PointConfig random_gaussian_config(std::size_t n, std::uint64_t seed) {
  return {gaussian_points(n, seed)};
}

PointConfig fibonacci_sphere(std::size_t n) {
  if (n == 0) throw ParameterError("fibonacci_sphere: n must be positive");
  const double golden = std::numbers::pi * (3.0 - std::sqrt(5.0));
  Points p(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double z = 1.0 - (2.0 * static_cast<double>(i) + 1.0) / static_cast<double>(n);
    const double r = std::sqrt(1.0 - z * z);
    const double phi = golden * static_cast<double>(i);
    p[i] = {r * std::cos(phi), r * std::sin(phi), z};
  }
  return {p};
}

double beta_value(const PointConfig& config) {
  if (config.size() < 2) throw ParameterError("beta_value: need n >= 2");
  config.validate();
  return beta_eval(config.points, nullptr);
}

std::vector<Eigen::Vector3d> beta_gradient(const PointConfig& config) {
  if (config.size() < 2) throw ParameterError("beta_gradient: need n >= 2");
  config.validate();
  Points g;
  beta_eval(config.points, &g);
  return g;
}

double beta_floor(std::size_t n) {
  return 0.82 - 1.55 * std::pow(static_cast<double>(n), -2.0 / 3.0);
}

BetaResult beta_optimize(std::size_t n, int restarts, std::uint64_t seed) {
  if (n < 2) throw ParameterError("beta_optimize: need n >= 2");
  if (restarts < 1) throw ParameterError("beta_optimize: need restarts >= 1");
  std::vector<std::uint64_t> seeds(static_cast<std::size_t>(restarts));
  for (std::size_t k = 0; k < seeds.size(); ++k) seeds[k] = split_seed(seed, k);
  struct Run {
    double value;
    Points points;
  };
  const auto runs = parallel_map(seeds, [n](std::uint64_t s) {
    Points p = gaussian_points(n, s);
    normalize_radius(p);
    const double v = descend_beta(p);
    return Run{v, std::move(p)};
  });
  BetaResult out{std::numeric_limits<double>::infinity(), {}, {}};
  for (const auto& r : runs) {
    out.restart_values.push_back(r.value);
    if (r.value < out.best_value) {
      out.best_value = r.value;
      out.best_config.points = r.points;
    }
  }
  return out;
}

double pair_functional(const Eigen::Vector3d& x, const Eigen::Vector3d& y) {
  const Eigen::Vector3d d = x - y;
  const double r = d.norm();
  if (r == 0.0) throw DomainError("pair_functional: x = y");
  return (x.norm() * x - y.norm() * y).dot(d) / (r * r * r);
}

PairResult pair_infimum_scan(std::size_t samples, std::uint64_t seed) {
  if (samples < 1) throw ParameterError("pair_infimum_scan: need samples >= 1");
  constexpr std::size_t kBatches = 16;
  std::vector<std::size_t> batches(std::min(kBatches, samples));
  std::iota(batches.begin(), batches.end(), std::size_t{0});
  const std::size_t nb = batches.size();
  const auto best = parallel_map(batches, [&](std::size_t b) {
    const std::size_t count = samples / nb + (b < samples % nb ? 1 : 0);
    std::mt19937_64 rng(split_seed(seed, b));
    std::normal_distribution<double> normal;
    PairResult r{std::numeric_limits<double>::infinity(), {}, {}};
    for (std::size_t s = 0; s < count; ++s) {
      const Eigen::Vector3d x{normal(rng), normal(rng), normal(rng)};
      const Eigen::Vector3d y{normal(rng), normal(rng), normal(rng)};
      if ((x - y).norm() == 0.0) continue;
      const double f = pair_functional(x, y);
      if (f < r.min_found) r = {f, x, y};
    }
    return r;
  });
  PairResult out = *std::min_element(best.begin(), best.end(), [](const auto& a, const auto& b) {
    return a.min_found < b.min_found;
  });
  const double s = out.x.norm();
  out.x /= s;
  out.y /= s;
  out.min_found = local_pair_descent(out.x, out.y);
  return out;
}

double sigal_margin(const PointConfig& config, double z) {
  const std::size_t n = config.size();
  if (n < 2) throw ParameterError("sigal: need n >= 2");
  config.validate();
  double best = -std::numeric_limits<double>::infinity();
  for (std::size_t j = 0; j < n; ++j) {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      if (i != j) s += 1.0 / (config.points[i] - config.points[j]).norm();
    }
    best = std::max(best, s - z / config.points[j].norm());
  }
  return best;
}

double sigal_basic_charge(std::size_t n) { return 0.5 * (static_cast<double>(n) - 1.0); }

bool sigal_check(const PointConfig& config, double z, double epsilon, bool improved) {
  if (improved) {
    if (!(epsilon > 0.0 && epsilon < 1.0)) throw ParameterError("sigal: epsilon must be in (0, 1)");
    z = (1.0 - epsilon) * static_cast<double>(config.size());
  }
  return sigal_margin(config, z) >= 0.0;
}

SigalTrials sigal_trials(std::size_t n, double epsilon, bool improved, std::size_t trials,
                         std::uint64_t seed) {
  if (trials < 1) throw ParameterError("sigal_trials: need trials >= 1");
  std::vector<std::size_t> idx(trials);
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  const double z = improved ? (1.0 - epsilon) * static_cast<double>(n) : sigal_basic_charge(n);
  if (improved && !(epsilon > 0.0 && epsilon < 1.0)) {
    throw ParameterError("sigal: epsilon must be in (0, 1)");
  }
  const auto margins = parallel_map(idx, [&](std::size_t t) {
    return sigal_margin(random_gaussian_config(n, split_seed(seed, t)), z);
  });
  SigalTrials out{trials, 0, std::numeric_limits<double>::infinity(), {}};
  for (std::size_t t = 0; t < trials; ++t) {
    out.worst_margin = std::min(out.worst_margin, margins[t]);
    if (margins[t] >= 0.0) {
      ++out.passed;
    } else {
      out.failures.push_back(t);
    }
  }
  return out;
}

double triangle_symmetrization_check(std::size_t samples, std::uint64_t seed) {
  if (samples < 1) throw ParameterError("triangle_symmetrization_check: need samples >= 1");
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal;
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t s = 0; s < samples; ++s) {
    const Eigen::Vector3d x{normal(rng), normal(rng), normal(rng)};
    const Eigen::Vector3d y{normal(rng), normal(rng), normal(rng)};
    const double d = (x - y).norm();
    if (d == 0.0) continue;
    best = std::min(best, (x.norm() + y.norm()) / d);
  }
  return best;
}

}  // namespace ionlab
