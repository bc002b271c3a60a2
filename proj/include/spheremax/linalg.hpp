#pragma once

// Dense kernels on Eigen types: nonsymmetric and symmetric eigensolvers, SVD
// and a symmetric-pivoted Cholesky that also accepts semidefinite input.

#include <Eigen/Dense>

#include <vector>

#include "spheremax/multiform.hpp"

namespace spheremax {

using Matrix = Eigen::MatrixXd;

struct EigenDecomposition {
  Eigen::VectorXcd eigenvalues;   // descending |lambda|, then Re, then Im
  Eigen::MatrixXcd eigenvectors;  // column k pairs with eigenvalues[k], unit 2-norm
};

/// Right eigenpairs of a real square matrix.  Throws NoConvergence if the QR
/// iteration fails.
EigenDecomposition eig_general(const Matrix& m);

struct SymmetricEigenDecomposition {
  Eigen::VectorXd eigenvalues;  // descending
  Matrix eigenvectors;          // orthonormal columns
};

/// Throws NotSymmetric when max |m - m^T| exceeds 1e-12 * max(1, ||m||_F).
SymmetricEigenDecomposition eig_symmetric(const Matrix& m);

struct SingularValueDecomposition {
  Matrix u;
  Eigen::VectorXd singularValues;  // descending, nonnegative
  Matrix v;
};

SingularValueDecomposition svd(const Matrix& m);

/// P m P^T = L L^T with L lower triangular; `permutation[k]` is the row of m
/// placed at position k.  Without pivoting needs the permutation is identity.
struct CholeskyFactor {
  Matrix lower;
  std::vector<Index> permutation;
  Index rank = 0;

  /// F with F F^T = m (the lower factor with rows moved back).
  Matrix factor() const;
};

/// Throws NotSymmetric, or NotPSD if a pivot drops below -1e-10 * scale.
CholeskyFactor cholesky(const Matrix& m);

double frobenius_norm(const Matrix& m);

}  // namespace spheremax
