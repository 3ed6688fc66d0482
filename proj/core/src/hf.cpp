#include "ionlab/hf.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <numbers>
#include <optional>
#include <random>

#include <Eigen/Eigenvalues>
#include <Eigen/SparseCore>

#include "ionlab/band_eigen.hpp"
#include "ionlab/errors.hpp"
#include "ionlab/parallel.hpp"

namespace ionlab {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kFermiGap = 1e-8;

void check_n(const OneBodyBasis& basis, int n, int lowest) {
  if (n < lowest || n > basis.dim()) {
    throw ParameterError("hf: particle number " + std::to_string(n) + " outside [" +
                         std::to_string(lowest) + ", " + std::to_string(basis.dim()) + "]");
  }
}

struct Aufbau {
  Eigen::MatrixXd gamma;
  bool degenerate;
};

Aufbau aufbau(const Eigen::MatrixXd& fock, int n) {
  const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(fock);
  const auto occ = es.eigenvectors().leftCols(n);
  const int d = static_cast<int>(fock.rows());
  const bool degenerate =
      n > 0 && n < d && es.eigenvalues()[n] - es.eigenvalues()[n - 1] < kFermiGap;
  return {occ * occ.transpose(), degenerate};
}

Eigen::MatrixXd random_projection(int d, int n, std::mt19937_64& rng) {
  std::normal_distribution<double> normal;
  Eigen::MatrixXd a(d, d);
  for (int i = 0; i < d; ++i) {
    for (int j = 0; j < d; ++j) a(i, j) = normal(rng);
  }
  const Eigen::HouseholderQR<Eigen::MatrixXd> qr(a);
  const Eigen::MatrixXd q = qr.householderQ() * Eigen::MatrixXd::Identity(d, n);
  return q * q.transpose();
}

Eigen::MatrixXd symmetrize(const Eigen::MatrixXd& m) { return 0.5 * (m + m.transpose()); }

std::vector<Eigen::MatrixXd> starting_points(const OneBodyBasis& basis, int n,
                                             const HFOptions& opts) {
  std::vector<Eigen::MatrixXd> starts{aufbau(basis.h0(), n).gamma};
  std::mt19937_64 rng(opts.seed);
  for (int k = 0; k < opts.restarts; ++k) starts.push_back(random_projection(basis.dim(), n, rng));
  return starts;
}

// Simplex-with-caps projection of eigenvalues: clamp(l - theta, 0, 1) summing to n.
Eigen::VectorXd project_occupations(const Eigen::VectorXd& l, double n) {
  auto total = [&](double theta) {
    return (l.array() - theta).max(0.0).min(1.0).sum();
  };
  double lo = l.minCoeff() - 1.0, hi = l.maxCoeff();
  for (int it = 0; it < 200 && hi - lo > 1e-16 * (1.0 + std::abs(hi)); ++it) {
    const double mid = 0.5 * (lo + hi);
    (total(mid) > n ? lo : hi) = mid;
  }
  Eigen::VectorXd out = (l.array() - 0.5 * (lo + hi)).max(0.0).min(1.0);
  // Exact trace: spread the remaining bisection error over the free entries.
  const double defect = n - out.sum();
  int free = 0;
  for (Eigen::Index i = 0; i < out.size(); ++i) free += (out[i] > 0.0 && out[i] < 1.0);
  if (free > 0) {
    for (Eigen::Index i = 0; i < out.size(); ++i) {
      if (out[i] > 0.0 && out[i] < 1.0) out[i] += defect / free;
    }
  }
  return out;
}

struct Scf {
  Eigen::MatrixXd gamma;
  int iterations;
  bool converged;
};

Scf run_scf(const OneBodyBasis& basis, int n, Eigen::MatrixXd gamma, double damping,
            const HFOptions& opts) {
  for (int it = 1; it <= opts.max_iterations; ++it) {
    const auto out = aufbau(fock_matrix(gamma, basis), n).gamma;
    const double change = (out - gamma).norm();
    if (change < opts.tol) return {out, it, true};
    gamma = damping * gamma + (1.0 - damping) * out;
  }
  return {gamma, opts.max_iterations, false};
}

// Largest supported sector word: one bit per orbital.
using Det = std::uint64_t;

int sign_below(Det m, int q) {
  const Det mask = (Det{1} << q) - 1;
  return (std::popcount(m & mask) & 1) ? -1 : 1;
}

std::vector<Det> sector_dets(int d, int n) {
  std::vector<Det> dets;
  if (n == 0) return {0};
  Det m = (Det{1} << n) - 1;
  const Det limit = Det{1} << d;
  while (m < limit) {
    dets.push_back(m);
    // Gosper's hack: next integer with the same popcount.
    const Det c = m & (~m + 1);
    const Det r = m + c;
    m = (((r ^ m) >> 2) / c) | r;
  }
  return dets;
}

Eigen::SparseMatrix<double> sector_hamiltonian(const OneBodyBasis& basis, int n) {
  const int d = basis.dim();
  const auto dets = sector_dets(d, n);
  const auto index = [&](Det m) {
    return static_cast<Eigen::Index>(std::lower_bound(dets.begin(), dets.end(), m) - dets.begin());
  };
  // <pr||qs> = (pq|rs) - (ps|rq) for p < r, q < s.
  auto anti = [&](int p, int r, int q, int s) {
    return basis.eri(p, q, r, s) - basis.eri(p, s, r, q);
  };
  std::vector<Eigen::Triplet<double>> trip;
  for (std::size_t col = 0; col < dets.size(); ++col) {
    const Det m = dets[col];
    const auto c = static_cast<Eigen::Index>(col);
    for (int q = 0; q < d; ++q) {
      if (!(m >> q & 1)) continue;
      const Det m1 = m & ~(Det{1} << q);
      const int s1 = sign_below(m, q);
      for (int p = 0; p < d; ++p) {
        if (m1 >> p & 1) continue;
        const double h = basis.h0()(p, q);
        if (h == 0.0) continue;
        const Det m2 = m1 | (Det{1} << p);
        trip.emplace_back(index(m2), c, s1 * sign_below(m1, p) * h);
      }
      for (int s = q + 1; s < d; ++s) {
        if (!(m1 >> s & 1)) continue;
        const Det m2 = m1 & ~(Det{1} << s);
        const int s2 = s1 * sign_below(m1, s);
        for (int r = 0; r < d; ++r) {
          if (m2 >> r & 1) continue;
          const Det m3 = m2 | (Det{1} << r);
          const int s3 = s2 * sign_below(m2, r);
          for (int p = 0; p < r; ++p) {
            if (m3 >> p & 1) continue;
            const double v = anti(p, r, q, s);
            if (v == 0.0) continue;
            const Det m4 = m3 | (Det{1} << p);
            trip.emplace_back(index(m4), c, s3 * sign_below(m3, p) * v);
          }
        }
      }
    }
  }
  const auto dim = static_cast<Eigen::Index>(dets.size());
  Eigen::SparseMatrix<double> h(dim, dim);
  h.setFromTriplets(trip.begin(), trip.end());
  return h;
}

double lowest_eigenvalue(const Eigen::SparseMatrix<double>& h) {
  const Eigen::Index dim = h.rows();
  if (dim <= 2000) {
    const Eigen::MatrixXd dense = symmetrize(Eigen::MatrixXd(h));
    return Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(dense, Eigen::EigenvaluesOnly)
        .eigenvalues()[0];
  }
  // Lanczos without reorthogonalization; only the lowest Ritz value is used.
  Eigen::VectorXd v(dim);
  for (Eigen::Index i = 0; i < dim; ++i) {
    v[i] = 1.0 + static_cast<double>(split_seed(17, static_cast<std::uint64_t>(i)) >> 11) * 0x1p-53;
  }
  v.normalize();
  Eigen::VectorXd prev = Eigen::VectorXd::Zero(dim);
  std::vector<double> alpha, beta;
  double last = std::numeric_limits<double>::infinity();
  double b = 0.0;
  const int max_steps = static_cast<int>(std::min<Eigen::Index>(dim, 600));
  for (int k = 0; k < max_steps; ++k) {
    Eigen::VectorXd w = h * v - b * prev;
    const double a = v.dot(w);
    w -= a * v;
    alpha.push_back(a);
    const double ritz = tridiagonal_lowest(alpha, beta, 1).values[0];
    if (std::abs(ritz - last) < 1e-13 * (1.0 + std::abs(ritz))) return ritz;
    last = ritz;
    b = w.norm();
    if (b < 1e-14) return ritz;
    beta.push_back(b);
    prev = std::move(v);
    v = w / b;
  }
  throw ConvergenceError("exact_diagonalization: Lanczos did not settle", 0.0, max_steps);
}

}  // namespace

OneBodyBasis::OneBodyBasis(Eigen::MatrixXd h0, std::vector<double> eri, bool orthonormalized)
    : h0_(std::move(h0)), eri_(std::move(eri)), orthonormalized_(orthonormalized) {
  const auto d = static_cast<std::size_t>(h0_.rows());
  if (d == 0 || h0_.cols() != h0_.rows()) throw ParameterError("OneBodyBasis: h0 must be square");
  if (d > 63) throw CapacityError("OneBodyBasis: at most 63 orbitals");
  if (eri_.size() != d * d * d * d) throw ParameterError("OneBodyBasis: eri must have d^4 entries");
  if ((h0_ - h0_.transpose()).cwiseAbs().maxCoeff() > 1e-12 * (1.0 + h0_.cwiseAbs().maxCoeff())) {
    throw ParameterError("OneBodyBasis: h0 must be symmetric");
  }
}

double OneBodyBasis::eri_asymmetry() const {
  const int d = dim();
  double worst = 0.0;
  for (int i = 0; i < d; ++i) {
    for (int j = 0; j < d; ++j) {
      for (int k = 0; k < d; ++k) {
        for (int l = 0; l < d; ++l) {
          const double v = eri(i, j, k, l);
          worst = std::max({worst, std::abs(v - eri(j, i, k, l)), std::abs(v - eri(i, j, l, k)),
                            std::abs(v - eri(k, l, i, j))});
        }
      }
    }
  }
  return worst;
}

double boys_f0(double t) {
  if (t < 0.0) throw DomainError("boys_f0: negative argument");
  if (t < 1e-6) return 1.0 - t / 3.0 + t * t / 10.0;
  return 0.5 * std::sqrt(kPi / t) * std::erf(std::sqrt(t));
}

OneBodyBasis build_sgauss_basis(double z, const std::vector<double>& exponents) {
  if (!(z >= 0.0) || !std::isfinite(z)) throw ParameterError("sgauss: z must be nonnegative");
  const int d = static_cast<int>(exponents.size());
  if (d == 0) throw ParameterError("sgauss: empty exponent list");
  for (int i = 0; i < d; ++i) {
    if (!(exponents[i] > 0.0) || !std::isfinite(exponents[i])) {
      throw ParameterError("sgauss: exponents must be positive");
    }
    for (int j = 0; j < i; ++j) {
      if (exponents[i] == exponents[j]) throw BasisError("sgauss: duplicate exponent");
    }
  }
  Eigen::VectorXd norm(d);
  for (int i = 0; i < d; ++i) norm[i] = std::pow(2.0 * exponents[i] / kPi, 0.75);
  Eigen::MatrixXd s(d, d), h(d, d);
  for (int i = 0; i < d; ++i) {
    for (int j = 0; j < d; ++j) {
      const double a = exponents[i], b = exponents[j], p = a + b;
      const double nn = norm[i] * norm[j];
      const double ov = std::pow(kPi / p, 1.5);
      s(i, j) = nn * ov;
      h(i, j) = nn * (6.0 * a * b / p * ov - z * 2.0 * kPi / p * boys_f0(0.0));
    }
  }
  const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(s);
  const double lmin = es.eigenvalues().minCoeff(), lmax = es.eigenvalues().maxCoeff();
  if (!(lmin > 0.0) || lmax / lmin > kMaxOverlapCondition) {
    throw BasisError("sgauss: overlap condition number exceeds 1e10");
  }
  const Eigen::MatrixXd x = es.eigenvectors() *
                            es.eigenvalues().cwiseInverse().cwiseSqrt().asDiagonal() *
                            es.eigenvectors().transpose();

  const auto du = static_cast<std::size_t>(d);
  auto at = [du](int i, int j, int k, int l) {
    return ((static_cast<std::size_t>(i) * du + j) * du + k) * du + l;
  };
  std::vector<double> prim(du * du * du * du);
  for (int i = 0; i < d; ++i) {
    for (int j = 0; j < d; ++j) {
      for (int k = 0; k < d; ++k) {
        for (int l = 0; l < d; ++l) {
          const double p = exponents[i] + exponents[j];
          const double q = exponents[k] + exponents[l];
          prim[at(i, j, k, l)] = norm[i] * norm[j] * norm[k] * norm[l] * 2.0 *
                                 std::pow(kPi, 2.5) / (p * q * std::sqrt(p + q)) *
                                 boys_f0(0.0);
        }
      }
    }
  }
  // Four quarter transforms with the symmetric X = S^{-1/2}.
  std::vector<double> tmp(prim.size());
  auto quarter = [&](const std::vector<double>& in, std::vector<double>& out, int axis) {
    std::fill(out.begin(), out.end(), 0.0);
    int idx[4];
    for (idx[0] = 0; idx[0] < d; ++idx[0]) {
      for (idx[1] = 0; idx[1] < d; ++idx[1]) {
        for (idx[2] = 0; idx[2] < d; ++idx[2]) {
          for (idx[3] = 0; idx[3] < d; ++idx[3]) {
            const double v = in[at(idx[0], idx[1], idx[2], idx[3])];
            int o[4] = {idx[0], idx[1], idx[2], idx[3]};
            for (int m = 0; m < d; ++m) {
              o[axis] = m;
              out[at(o[0], o[1], o[2], o[3])] += x(idx[axis], m) * v;
            }
          }
        }
      }
    }
  };
  quarter(prim, tmp, 0);
  quarter(tmp, prim, 1);
  quarter(prim, tmp, 2);
  quarter(tmp, prim, 3);
  // Restore the exact permutation symmetry lost to rounding.
  for (int i = 0; i < d; ++i) {
    for (int j = 0; j < d; ++j) {
      for (int k = 0; k < d; ++k) {
        for (int l = 0; l < d; ++l) {
          const std::size_t idx[8] = {at(i, j, k, l), at(j, i, k, l), at(i, j, l, k),
                                      at(j, i, l, k), at(k, l, i, j), at(l, k, i, j),
                                      at(k, l, j, i), at(l, k, j, i)};
          double mean = 0.0;
          for (auto t : idx) mean += prim[t];
          mean /= 8.0;
          for (auto t : idx) prim[t] = mean;
        }
      }
    }
  }
  return OneBodyBasis(symmetrize(x * h * x), std::move(prim), true);
}

OneBodyBasis random_sgauss_basis(std::uint64_t seed, int dim) {
  if (dim < 1 || dim > 12) throw ParameterError("random_sgauss_basis: dim must be in [1, 12]");
  std::mt19937_64 rng(split_seed(seed, 0));
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const double z = 0.5 + 3.5 * unit(rng);
  const double lo = std::log(0.05), hi = std::log(50.0);
  const double step = dim > 1 ? (hi - lo) / (dim - 1) : 0.0;
  std::vector<double> exps(static_cast<std::size_t>(dim));
  for (int i = 0; i < dim; ++i) {
    const double base = dim > 1 ? lo + i * step : lo + (hi - lo) * unit(rng);
    exps[static_cast<std::size_t>(i)] = std::exp(base + 0.25 * step * (2.0 * unit(rng) - 1.0));
  }
  return build_sgauss_basis(z, exps);
}

Interaction hf_interaction(const Eigen::MatrixXd& gamma, const OneBodyBasis& basis) {
  const int d = basis.dim();
  if (gamma.rows() != d || gamma.cols() != d) throw ParameterError("hf: gamma has wrong size");
  double direct = 0.0, exchange = 0.0;
  for (int i = 0; i < d; ++i) {
    for (int j = 0; j < d; ++j) {
      for (int k = 0; k < d; ++k) {
        for (int l = 0; l < d; ++l) {
          const double v = basis.eri(i, j, k, l);
          direct += v * gamma(j, i) * gamma(l, k);
          exchange += v * gamma(j, k) * gamma(l, i);
        }
      }
    }
  }
  return {0.5 * direct, 0.5 * exchange};
}

double hf_energy(const Eigen::MatrixXd& gamma, const OneBodyBasis& basis) {
  const auto in = hf_interaction(gamma, basis);
  return (basis.h0().cwiseProduct(gamma.transpose())).sum() + in.direct - in.exchange;
}

Eigen::MatrixXd fock_matrix(const Eigen::MatrixXd& gamma, const OneBodyBasis& basis) {
  const int d = basis.dim();
  if (gamma.rows() != d || gamma.cols() != d) throw ParameterError("hf: gamma has wrong size");
  Eigen::MatrixXd f = basis.h0();
  for (int a = 0; a < d; ++a) {
    for (int b = 0; b < d; ++b) {
      double s = 0.0;
      for (int k = 0; k < d; ++k) {
        for (int l = 0; l < d; ++l) {
          s += basis.eri(a, b, k, l) * gamma(l, k) - basis.eri(a, k, l, b) * gamma(k, l);
        }
      }
      f(a, b) += s;
    }
  }
  return symmetrize(f);
}

double stationarity_gap(const Eigen::MatrixXd& gamma, const OneBodyBasis& basis) {
  const auto f = fock_matrix(gamma, basis);
  const double n = gamma.trace();
  const Eigen::VectorXd eps =
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(f, Eigen::EigenvaluesOnly).eigenvalues();
  // Minimum of Tr(F g) over the box is attained by filling the lowest levels.
  double best = 0.0, left = n;
  for (Eigen::Index i = 0; i < eps.size() && left > 0.0; ++i) {
    const double take = std::min(1.0, left);
    best += take * eps[i];
    left -= take;
  }
  return (f.cwiseProduct(gamma)).sum() - best;
}

Eigen::MatrixXd project_density_box(const Eigen::MatrixXd& gamma, double n) {
  const int d = static_cast<int>(gamma.rows());
  if (!(n >= 0.0 && n <= d)) throw ParameterError("project_density_box: need 0 <= n <= d");
  const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(symmetrize(gamma));
  const Eigen::VectorXd occ = project_occupations(es.eigenvalues(), n);
  return symmetrize(es.eigenvectors() * occ.asDiagonal() * es.eigenvectors().transpose());
}

Eigen::MatrixXd push_to_projection(const Eigen::MatrixXd& gamma, const OneBodyBasis& basis) {
  constexpr double kFrac = 1e-9;
  Eigen::MatrixXd g = symmetrize(gamma);
  for (int round = 0; round <= 2 * basis.dim(); ++round) {
    const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(g);
    const Eigen::VectorXd l = es.eigenvalues();
    std::vector<Eigen::Index> frac;
    for (Eigen::Index i = 0; i < l.size(); ++i) {
      if (l[i] > kFrac && l[i] < 1.0 - kFrac) frac.push_back(i);
    }
    if (frac.size() < 2) {
      Eigen::VectorXd occ = l.unaryExpr([](double x) { return x > 0.5 ? 1.0 : 0.0; });
      return symmetrize(es.eigenvectors() * occ.asDiagonal() * es.eigenvectors().transpose());
    }
    const Eigen::VectorXd u = es.eigenvectors().col(frac[0]);
    const Eigen::VectorXd v = es.eigenvectors().col(frac[1]);
    const Eigen::MatrixXd delta = u * u.transpose() - v * v.transpose();
    const double lu = l[frac[0]], lv = l[frac[1]];
    const double t_lo = std::max(-lu, lv - 1.0), t_hi = std::min(1.0 - lu, lv);
    const Eigen::MatrixXd a = g + t_lo * delta, b = g + t_hi * delta;
    g = hf_energy(a, basis) <= hf_energy(b, basis) ? a : b;
  }
  throw NumericError("push_to_projection: occupations did not settle");
}

DensityMatrixState solve_hf_scf(const OneBodyBasis& basis, int n, const HFOptions& opts) {
  check_n(basis, n, 1);
  if (!(opts.tol > 0.0) || opts.max_iterations < 1 || !(opts.damping >= 0.0 && opts.damping < 1.0) ||
      opts.restarts < 0) {
    throw ParameterError("hf: bad solver options");
  }
  std::optional<DensityMatrixState> best;
  int total = 0;
  double last_change = std::numeric_limits<double>::infinity();
  for (const auto& start : starting_points(basis, n, opts)) {
    // Fixed damping first; heavier damping when the iteration oscillates.
    for (double damping : {opts.damping, 0.5 * (1.0 + opts.damping), 0.95}) {
      const auto run = run_scf(basis, n, start, damping, opts);
      total += run.iterations;
      if (!run.converged) {
        last_change = (aufbau(fock_matrix(run.gamma, basis), n).gamma - run.gamma).norm();
        continue;
      }
      const auto f = fock_matrix(run.gamma, basis);
      DensityMatrixState st;
      st.gamma = run.gamma;
      st.trace_n = run.gamma.trace();
      st.energy = hf_energy(run.gamma, basis);
      st.residual = (f * run.gamma - run.gamma * f).norm();
      st.degenerate = aufbau(f, n).degenerate;
      if (!best || st.energy < best->energy - 1e-12) best = std::move(st);
      break;
    }
  }
  if (!best) throw ConvergenceError("hf: SCF did not converge from any start", last_change, total);
  best->iterations = total;
  return *best;
}

DensityMatrixState solve_hf_relaxed(const OneBodyBasis& basis, int n, const HFOptions& opts) {
  check_n(basis, n, 0);
  const int d = basis.dim();
  if (n == 0) return {Eigen::MatrixXd::Zero(d, d), 0.0, 0.0, 0, 0.0, false};
  if (!(opts.tol > 0.0) || opts.max_iterations < 1 || opts.restarts < 0) {
    throw ParameterError("hf: bad solver options");
  }
  auto starts = starting_points(basis, n, opts);
  starts.push_back(Eigen::MatrixXd::Identity(d, d) * (static_cast<double>(n) / d));
  const int budget = 20 * opts.max_iterations;
  std::optional<DensityMatrixState> best;
  int total = 0;
  double last_gap = std::numeric_limits<double>::infinity();
  for (auto g : starts) {
    double e = hf_energy(g, basis);
    double step = 1.0;
    bool converged = false;
    int it = 0;
    while (it < budget) {
      ++it;
      const auto f = fock_matrix(g, basis);
      if (stationarity_gap(g, basis) <= opts.tol * (1.0 + f.norm())) {
        converged = true;
        break;
      }
      for (int k = 0; k < 60; ++k, step *= 0.5) {
        const Eigen::MatrixXd trial = project_density_box(g - step * f, n);
        const Eigen::MatrixXd dg = trial - g;
        const double et = hf_energy(trial, basis);
        if (et <= e + (f.cwiseProduct(dg)).sum() + 0.5 / step * dg.squaredNorm() + 1e-15 * std::abs(e)) {
          g = trial;
          e = et;
          break;
        }
      }
      step = std::min(2.0 * step, 1e3);
    }
    total += it;
    last_gap = stationarity_gap(g, basis);
    if (!converged) continue;
    DensityMatrixState st{g, g.trace(), e, 0, last_gap, false};
    if (!best || st.energy < best->energy - 1e-12) best = std::move(st);
  }
  if (!best) {
    throw ConvergenceError("hf: relaxed minimization did not converge", last_gap, total);
  }
  best->iterations = total;
  return *best;
}

std::uint64_t binomial(int d, int n) {
  if (n < 0 || n > d) return 0;
  std::uint64_t r = 1;
  for (int k = 1; k <= n; ++k) r = r * static_cast<std::uint64_t>(d - n + k) / static_cast<std::uint64_t>(k);
  return r;
}

double exact_diagonalization(const OneBodyBasis& basis, int n) {
  check_n(basis, n, 0);
  const auto size = binomial(basis.dim(), n);
  if (size > kMaxSectorDimension) {
    throw CapacityError("exact_diagonalization: sector dimension " + std::to_string(size) +
                        " exceeds 1e6");
  }
  if (n == 0) return 0.0;
  return lowest_eigenvalue(sector_hamiltonian(basis, n));
}

FockSpectrum spectrum_scan(const OneBodyBasis& basis) {
  const int d = basis.dim();
  std::vector<int> ns(static_cast<std::size_t>(d + 1));
  for (int k = 0; k <= d; ++k) {
    ns[static_cast<std::size_t>(k)] = k;
    if (binomial(d, k) > kMaxSectorDimension) {
      throw CapacityError("spectrum_scan: sector N = " + std::to_string(k) + " exceeds 1e6");
    }
  }
  FockSpectrum out;
  out.energies = parallel_map(ns, [&](int k) { return exact_diagonalization(basis, k); });
  for (int k = 1; k <= d; ++k) {
    const auto e = [&](int i) { return out.energies[static_cast<std::size_t>(i)]; };
    if (e(k) > e(k - 1)) out.monotonicity_violations.push_back(k);
    if (k < d && e(k + 1) + e(k - 1) - 2.0 * e(k) < 0.0) out.convexity_violations.push_back(k);
  }
  return out;
}

}  // namespace ionlab
