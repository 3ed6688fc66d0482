#include "ionlab/band_eigen.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <string>

#include <lapacke.h>

#include "ionlab/errors.hpp"

namespace ionlab {

namespace {

EigenPairs dense_extremal(const Eigen::MatrixXd& a, int count, SpectrumEnd end) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(a);
  if (es.info() != Eigen::Success) throw NumericError("dense eigensolver failed");
  const auto n = static_cast<int>(a.rows());
  EigenPairs p;
  p.vectors.resize(n, count);
  for (int k = 0; k < count; ++k) {
    const int idx = end == SpectrumEnd::lowest ? k : n - 1 - k;
    p.values.push_back(es.eigenvalues()[idx]);
    p.vectors.col(k) = es.eigenvectors().col(idx);
  }
  return p;
}

}  // namespace

int bandwidth(const Eigen::SparseMatrix<double>& m) {
  int kd = 0;
  for (int k = 0; k < m.outerSize(); ++k) {
    for (Eigen::SparseMatrix<double>::InnerIterator it(m, k); it; ++it) {
      if (it.value() != 0.0) {
        kd = std::max(kd, static_cast<int>(std::abs(it.row() - it.col())));
      }
    }
  }
  return kd;
}

EigenPairs tridiagonal_lowest(const std::vector<double>& diag,
                              const std::vector<double>& off, int count) {
  const auto n = static_cast<lapack_int>(diag.size());
  if (n == 0 || count < 1 || count > n || off.size() + 1 != diag.size()) {
    throw ParameterError("tridiagonal_lowest: bad dimensions");
  }
  std::vector<double> d = diag;
  std::vector<double> e = off;
  e.push_back(0.0);
  std::vector<double> w(static_cast<std::size_t>(n));
  Eigen::MatrixXd z(n, count);
  std::vector<lapack_int> ifail(static_cast<std::size_t>(n));
  lapack_int found = 0;
  const double abstol = 2.0 * LAPACKE_dlamch('S');
  const lapack_int info = LAPACKE_dstevx(
      LAPACK_COL_MAJOR, 'V', 'I', n, d.data(), e.data(), 0.0, 0.0, 1, count,
      abstol, &found, w.data(), z.data(), n, ifail.data());
  if (info != 0 || found != count) {
    throw NumericError("dstevx failed with info " + std::to_string(info));
  }
  EigenPairs p;
  p.values.assign(w.begin(), w.begin() + count);
  p.vectors = std::move(z);
  return p;
}

EigenPairs extremal_eigenpairs(const Eigen::SparseMatrix<double>& m, int count,
                               SpectrumEnd end) {
  const auto n = static_cast<int>(m.rows());
  if (m.rows() != m.cols() || count < 1 || count > n) {
    throw ParameterError("extremal_eigenpairs: bad dimensions");
  }
  if (n <= 64) return dense_extremal(Eigen::MatrixXd(m), count, end);

  const int kd = bandwidth(m);
  const double sign = end == SpectrumEnd::lowest ? 1.0 : -1.0;

  if (kd <= 1) {
    std::vector<double> diag(static_cast<std::size_t>(n));
    std::vector<double> off(static_cast<std::size_t>(n - 1));
    for (int i = 0; i < n; ++i) diag[static_cast<std::size_t>(i)] = sign * m.coeff(i, i);
    for (int i = 0; i + 1 < n; ++i) off[static_cast<std::size_t>(i)] = sign * m.coeff(i, i + 1);
    auto p = tridiagonal_lowest(diag, off, count);
    for (double& v : p.values) v *= sign;
    return p;
  }

  // Upper band storage, column major: ab(kd + i - j, j) = A(i, j).
  const lapack_int ldab = kd + 1;
  std::vector<double> ab(static_cast<std::size_t>(ldab) * n, 0.0);
  for (int k = 0; k < m.outerSize(); ++k) {
    for (Eigen::SparseMatrix<double>::InnerIterator it(m, k); it; ++it) {
      const int i = static_cast<int>(it.row());
      const int j = static_cast<int>(it.col());
      if (i <= j) {
        ab[static_cast<std::size_t>(kd + i - j + j * ldab)] = sign * it.value();
      }
    }
  }
  std::vector<double> q(static_cast<std::size_t>(n) * n);
  std::vector<double> w(static_cast<std::size_t>(n));
  Eigen::MatrixXd z(n, count);
  std::vector<lapack_int> ifail(static_cast<std::size_t>(n));
  lapack_int found = 0;
  const double abstol = 2.0 * LAPACKE_dlamch('S');
  const lapack_int info = LAPACKE_dsbevx(
      LAPACK_COL_MAJOR, 'V', 'I', 'U', n, kd, ab.data(), ldab, q.data(), n, 0.0,
      0.0, 1, count, abstol, &found, w.data(), z.data(), n, ifail.data());
  if (info != 0 || found != count) {
    throw NumericError("dsbevx failed with info " + std::to_string(info));
  }
  EigenPairs p;
  for (int k = 0; k < count; ++k) p.values.push_back(sign * w[static_cast<std::size_t>(k)]);
  p.vectors = std::move(z);
  return p;
}

std::vector<double> extremal_eigenvalues(const Eigen::SparseMatrix<double>& m,
                                         int count, SpectrumEnd end) {
  const auto n = static_cast<int>(m.rows());
  const int kd = bandwidth(m);
  if (n <= 64 || kd <= 1) return extremal_eigenpairs(m, count, end).values;
  if (count < 1 || count > n) throw ParameterError("extremal_eigenvalues: bad count");
  const double sign = end == SpectrumEnd::lowest ? 1.0 : -1.0;
  const lapack_int ldab = kd + 1;
  std::vector<double> ab(static_cast<std::size_t>(ldab) * n, 0.0);
  for (int k = 0; k < m.outerSize(); ++k) {
    for (Eigen::SparseMatrix<double>::InnerIterator it(m, k); it; ++it) {
      const int i = static_cast<int>(it.row());
      const int j = static_cast<int>(it.col());
      if (i <= j) ab[static_cast<std::size_t>(kd + i - j + j * ldab)] = sign * it.value();
    }
  }
  std::vector<double> w(static_cast<std::size_t>(n));
  std::vector<lapack_int> ifail(static_cast<std::size_t>(n));
  lapack_int found = 0;
  double dummy = 0.0;
  const lapack_int info = LAPACKE_dsbevx(
      LAPACK_COL_MAJOR, 'N', 'I', 'U', n, kd, ab.data(), ldab, &dummy, 1, 0.0,
      0.0, 1, count, 2.0 * LAPACKE_dlamch('S'), &found, w.data(), &dummy, 1,
      ifail.data());
  if (info != 0 || found != count) {
    throw NumericError("dsbevx failed with info " + std::to_string(info));
  }
  std::vector<double> out;
  for (int k = 0; k < count; ++k) out.push_back(sign * w[static_cast<std::size_t>(k)]);
  return out;
}

}  // namespace ionlab
