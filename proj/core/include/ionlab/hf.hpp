#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include <Eigen/Dense>

namespace ionlab {

/// Orthonormal one-particle basis with h0 = -Delta - z/|x| and real
/// two-electron integrals eri(i, j, k, l) = (ij|kl).
class OneBodyBasis {
 public:
  OneBodyBasis(Eigen::MatrixXd h0, std::vector<double> eri, bool orthonormalized = true);

  int dim() const noexcept { return static_cast<int>(h0_.rows()); }
  const Eigen::MatrixXd& h0() const noexcept { return h0_; }
  bool orthonormalized() const noexcept { return orthonormalized_; }
  double eri(int i, int j, int k, int l) const {
    const std::size_t d = static_cast<std::size_t>(dim());
    return eri_[((static_cast<std::size_t>(i) * d + j) * d + k) * d + l];
  }
  const std::vector<double>& eri_tensor() const noexcept { return eri_; }
  /// Largest violation of the 8-fold permutation symmetry.
  double eri_asymmetry() const;

 private:
  Eigen::MatrixXd h0_;
  std::vector<double> eri_;
  bool orthonormalized_;
};

/// Overlap condition number above which a Gaussian basis is rejected.
inline constexpr double kMaxOverlapCondition = 1e10;

/// Concentric normalized s-Gaussians (2a/pi)^{3/4} e^{-a r^2}, Lowdin
/// orthonormalized.
OneBodyBasis build_sgauss_basis(double z, const std::vector<double>& exponents);

/// Random basis for property sweeps: z in [0.5, 4], log-spaced exponents in
/// [0.05, 50] with jitter.
OneBodyBasis random_sgauss_basis(std::uint64_t seed, int dim);

/// Boys function F0(t) = int_0^1 e^{-t s^2} ds.
double boys_f0(double t);

struct DensityMatrixState {
  Eigen::MatrixXd gamma;
  double trace_n = 0.0;
  double energy = 0.0;
  int iterations = 0;
  /// SCF: ||[F, gamma]||; relaxed: stationarity gap.
  double residual = 0.0;
  /// Fermi level degenerate (gap below 1e-8); occupation by index order.
  bool degenerate = false;
};

/// Tr(h0 gamma) + (1/2) sum V[ijkl](gamma_ji gamma_lk - gamma_jk gamma_li).
double hf_energy(const Eigen::MatrixXd& gamma, const OneBodyBasis& basis);

/// Direct and exchange parts of the interaction, (1/2) sum of each term.
struct Interaction {
  double direct, exchange;
};
Interaction hf_interaction(const Eigen::MatrixXd& gamma, const OneBodyBasis& basis);

/// h0 + J(gamma) - K(gamma), the gradient of hf_energy.
Eigen::MatrixXd fock_matrix(const Eigen::MatrixXd& gamma, const OneBodyBasis& basis);

/// Tr(F gamma) - (sum of the n lowest eigenvalues of F) >= 0; zero at a
/// stationary point of the relaxed problem.
double stationarity_gap(const Eigen::MatrixXd& gamma, const OneBodyBasis& basis);

struct HFOptions {
  double tol = 1e-10;
  int max_iterations = 2000;
  double damping = 0.5;
  /// Random restarts besides the core guess; the lowest energy wins.
  int restarts = 8;
  std::uint64_t seed = 0x5eed;
};

/// Projection-constrained SCF with aufbau occupation.
DensityMatrixState solve_hf_scf(const OneBodyBasis& basis, int n, const HFOptions& opts = {});

/// Projected gradient on {0 <= gamma <= 1, Tr gamma = n}, stopped when the
/// stationarity gap drops below tol (1 + ||F||).
DensityMatrixState solve_hf_relaxed(const OneBodyBasis& basis, int n,
                                    const HFOptions& opts = {});

/// Euclidean projection onto {0 <= gamma <= 1, Tr gamma = n}.
Eigen::MatrixXd project_density_box(const Eigen::MatrixXd& gamma, double n);

/// Pushes fractional occupations to 0 or 1 along directions where the energy
/// is concave; the result is a projection with energy <= hf_energy(gamma).
Eigen::MatrixXd push_to_projection(const Eigen::MatrixXd& gamma, const OneBodyBasis& basis);

/// Largest binomial(d, n) sector handled by exact_diagonalization.
inline constexpr std::uint64_t kMaxSectorDimension = 1000000;

std::uint64_t binomial(int d, int n);

/// Ground energy of the second-quantized Hamiltonian in the n-particle
/// sector.
double exact_diagonalization(const OneBodyBasis& basis, int n);

struct FockSpectrum {
  std::vector<double> energies;  // E_0 .. E_d
  std::vector<int> monotonicity_violations;  // N with E_N > E_{N-1}
  std::vector<int> convexity_violations;     // N with E_{N+1} + E_{N-1} - 2 E_N < 0
};

FockSpectrum spectrum_scan(const OneBodyBasis& basis);

}  // namespace ionlab
