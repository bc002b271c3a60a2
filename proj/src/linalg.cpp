#include "spheremax/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <numeric>
#include <string>

namespace spheremax {

namespace {

void require_square(const Matrix& m, const char* who) {
  if (m.rows() != m.cols())
    throw Error(ErrorCode::DimensionMismatch, std::string(who) + " needs a square matrix, got " +
                                                  std::to_string(m.rows()) + "x" + std::to_string(m.cols()));
}

void require_symmetric(const Matrix& m, const char* who) {
  require_square(m, who);
  const double asym = m.size() == 0 ? 0.0 : (m - m.transpose()).cwiseAbs().maxCoeff();
  if (asym > 1e-12 * std::max(1.0, frobenius_norm(m)))
    throw Error(ErrorCode::NotSymmetric, std::string(who) + ": asymmetry " + std::to_string(asym));
}

bool eigen_order(const std::complex<double>& a, const std::complex<double>& b) {
  const double ma = std::abs(a), mb = std::abs(b);
  if (ma != mb) return ma > mb;
  if (a.real() != b.real()) return a.real() > b.real();
  return a.imag() > b.imag();
}

}  // namespace

double frobenius_norm(const Matrix& m) { return m.norm(); }

EigenDecomposition eig_general(const Matrix& m) {
  require_square(m, "eig_general");
  const Index n = m.rows();
  EigenDecomposition out;
  if (n == 0) return out;

  Eigen::EigenSolver<Matrix> solver(m, /*computeEigenvectors=*/true);
  if (solver.info() != Eigen::Success)
    throw Error(ErrorCode::NoConvergence, "Hessenberg QR iteration did not converge");

  const Eigen::VectorXcd values = solver.eigenvalues();
  const Eigen::MatrixXcd vectors = solver.eigenvectors();
  std::vector<Index> order(n);
  std::iota(order.begin(), order.end(), Index{0});
  std::stable_sort(order.begin(), order.end(), [&](Index a, Index b) { return eigen_order(values[a], values[b]); });

  out.eigenvalues.resize(n);
  out.eigenvectors.resize(n, n);
  for (Index k = 0; k < n; ++k) {
    out.eigenvalues[k] = values[order[k]];
    Eigen::VectorXcd v = vectors.col(order[k]);
    const double nv = v.norm();
    out.eigenvectors.col(k) = nv > 0 ? Eigen::VectorXcd(v / nv) : v;
  }
  return out;
}

SymmetricEigenDecomposition eig_symmetric(const Matrix& m) {
  require_symmetric(m, "eig_symmetric");
  const Index n = m.rows();
  SymmetricEigenDecomposition out;
  if (n == 0) return out;
  Eigen::SelfAdjointEigenSolver<Matrix> solver(m);
  if (solver.info() != Eigen::Success) throw Error(ErrorCode::NoConvergence, "symmetric eigensolver failed");
  // Eigen returns ascending order.
  out.eigenvalues = solver.eigenvalues().reverse();
  out.eigenvectors = solver.eigenvectors().rowwise().reverse();
  return out;
}

SingularValueDecomposition svd(const Matrix& m) {
  Eigen::JacobiSVD<Matrix> solver(m, Eigen::ComputeThinU | Eigen::ComputeThinV);
  if (solver.info() != Eigen::Success) throw Error(ErrorCode::NoConvergence, "Jacobi SVD failed");
  return {solver.matrixU(), solver.singularValues(), solver.matrixV()};
}

Matrix CholeskyFactor::factor() const {
  Matrix f(lower.rows(), lower.cols());
  for (Index k = 0; k < lower.rows(); ++k) f.row(permutation[k]) = lower.row(k);
  return f;
}

namespace {

// Outer-product Cholesky on a working copy, pivoting on the largest remaining
// diagonal when `pivot` is set.  Returns false if an unpivoted step hit a
// (near-)zero pivot and the caller should retry with pivoting.
bool cholesky_sweep(const Matrix& m, bool pivot, CholeskyFactor& out) {
  const Index n = m.rows();
  const double scale = std::max(1.0, m.diagonal().cwiseAbs().maxCoeff());
  const double zeroTol = 1e-12 * scale;
  const double negTol = -1e-10 * scale;

  Matrix a = m;
  out.permutation.resize(n);
  std::iota(out.permutation.begin(), out.permutation.end(), Index{0});
  out.lower = Matrix::Zero(n, n);
  out.rank = n;

  for (Index k = 0; k < n; ++k) {
    if (pivot) {
      Index best = k;
      for (Index i = k + 1; i < n; ++i)
        if (a(i, i) > a(best, best)) best = i;
      if (best != k) {
        a.row(k).swap(a.row(best));
        a.col(k).swap(a.col(best));
        out.lower.row(k).swap(out.lower.row(best));
        std::swap(out.permutation[k], out.permutation[best]);
      }
    }
    const double d = a(k, k);
    if (d < negTol) throw Error(ErrorCode::NotPSD, "negative pivot " + std::to_string(d));
    if (d <= zeroTol) {
      if (!pivot) return false;
      // Remaining Schur complement must vanish for a semidefinite input.
      const double rest = a.bottomRightCorner(n - k, n - k).cwiseAbs().maxCoeff();
      if (rest > 1e-10 * scale) throw Error(ErrorCode::NotPSD, "indefinite trailing block");
      out.rank = k;
      return true;
    }
    const double l = std::sqrt(d);
    out.lower(k, k) = l;
    const Index tail = n - k - 1;
    if (tail > 0) {
      out.lower.col(k).tail(tail) = a.col(k).tail(tail) / l;
      a.bottomRightCorner(tail, tail).noalias() -=
          out.lower.col(k).tail(tail) * out.lower.col(k).tail(tail).transpose();
    }
  }
  return true;
}

}  // namespace

CholeskyFactor cholesky(const Matrix& m) {
  require_symmetric(m, "cholesky");
  CholeskyFactor out;
  if (cholesky_sweep(m, false, out)) return out;
  cholesky_sweep(m, true, out);
  return out;
}

}  // namespace spheremax
