#pragma once

#include <vector>

#include <Eigen/Dense>
#include <Eigen/SparseCore>

namespace ionlab {

enum class SpectrumEnd { lowest, highest };

struct EigenPairs {
  std::vector<double> values;  // ascending for `lowest`, descending for `highest`
  Eigen::MatrixXd vectors;     // column k belongs to values[k]
};

/// `count` extremal eigenpairs of a symmetric banded sparse matrix. Tridiagonal
/// input goes straight to Sturm bisection (relative accuracy on graded
/// matrices); wider bands are reduced first. Dense fallback for tiny sizes.
EigenPairs extremal_eigenpairs(const Eigen::SparseMatrix<double>& m, int count,
                               SpectrumEnd end);

/// Lowest `count` eigenpairs of the symmetric tridiagonal matrix with the
/// given diagonal and first off-diagonal.
EigenPairs tridiagonal_lowest(const std::vector<double>& diag,
                              const std::vector<double>& off, int count);

/// Half-bandwidth of a sparse matrix (0 for diagonal).
int bandwidth(const Eigen::SparseMatrix<double>& m);

/// Eigenvalues only; skips eigenvector accumulation on wide bands.
std::vector<double> extremal_eigenvalues(const Eigen::SparseMatrix<double>& m,
                                         int count, SpectrumEnd end);

}  // namespace ionlab
