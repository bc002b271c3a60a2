#include <cmath>
#include <complex>

#include "spheremax/linalg.hpp"
#include "test_support.hpp"

using namespace spheremax;
using namespace spheremax::test;

namespace {

Matrix mat(Index r, Index c, std::initializer_list<double> v) {
  Matrix m(r, c);
  Index k = 0;
  for (double x : v) m(k / c, k % c) = x, ++k;
  return m;
}

Matrix random_orthogonal(Index n, std::mt19937_64& rng) {
  Eigen::HouseholderQR<Matrix> qr(random_matrix(n, n, rng));
  return qr.householderQ();
}

}  // namespace

TEST(EigGeneral, Diagonal) {
  const auto e = eig_general(mat(2, 2, {1, 0, 0, 3}));
  EXPECT_NEAR(e.eigenvalues[0].real(), 3, 1e-14);
  EXPECT_NEAR(e.eigenvalues[1].real(), 1, 1e-14);
}

TEST(EigGeneral, RotationHasImaginaryPair) {
  const auto e = eig_general(mat(2, 2, {0, -1, 1, 0}));
  EXPECT_NEAR(std::abs(e.eigenvalues[0] - std::complex<double>(0, 1)), 0, 1e-14);
  EXPECT_NEAR(std::abs(e.eigenvalues[1] - std::complex<double>(0, -1)), 0, 1e-14);
}

TEST(EigGeneral, CompanionOfGoldenPolynomial) {
  // t^2 - t - 1
  const auto e = eig_general(mat(2, 2, {0, 1, 1, 1}));
  EXPECT_NEAR(e.eigenvalues[0].real(), (1 + std::sqrt(5.0)) / 2, 1e-14);
  EXPECT_NEAR(e.eigenvalues[1].real(), (1 - std::sqrt(5.0)) / 2, 1e-14);
}

TEST(EigGeneral, ResidualAndOrdering) {
  std::mt19937_64 rng(1);
  std::uniform_int_distribution<Index> n(1, 40);
  for (int trial = 0; trial < 100; ++trial) {
    const Index k = n(rng);
    const Matrix a = random_matrix(k, k, rng);
    const auto e = eig_general(a);
    ASSERT_EQ(e.eigenvalues.size(), k);
    const double tol = 1e-9 * (1 + frobenius_norm(a));
    for (Index j = 0; j < k; ++j) {
      const Eigen::VectorXcd v = e.eigenvectors.col(j);
      EXPECT_NEAR(v.norm(), 1.0, 1e-12);
      EXPECT_LE((a.cast<std::complex<double>>() * v - e.eigenvalues[j] * v).norm(), tol);
      if (j > 0) {
        EXPECT_LE(std::abs(e.eigenvalues[j]), std::abs(e.eigenvalues[j - 1]) + 1e-12);
      }
    }
  }
}

TEST(EigGeneral, AgreesWithSymmetricSolver) {
  std::mt19937_64 rng(2);
  for (int trial = 0; trial < 20; ++trial) {
    const Matrix b = random_matrix(6, 6, rng);
    const Matrix s = b + b.transpose();
    const auto g = eig_general(s);
    const auto h = eig_symmetric(s);
    std::vector<double> gr, hr(h.eigenvalues.data(), h.eigenvalues.data() + 6);
    for (Index j = 0; j < 6; ++j) gr.push_back(g.eigenvalues[j].real());
    std::sort(gr.begin(), gr.end());
    std::sort(hr.begin(), hr.end());
    for (int j = 0; j < 6; ++j) EXPECT_NEAR(gr[j], hr[j], 1e-8);
  }
}

TEST(EigGeneral, RequiresSquare) { EXPECT_THROW(eig_general(Matrix::Zero(2, 3)), Error); }

TEST(EigSymmetric, Identity) {
  const auto e = eig_symmetric(Matrix::Identity(4, 4));
  EXPECT_TRUE(e.eigenvalues.isApprox(Eigen::VectorXd::Ones(4)));
}

TEST(EigSymmetric, StateWeights) {
  const DensityState s = load_state("state1.json");
  const auto e = eig_symmetric(s.matrix);
  const double expected[] = {0.5435016101, 0.4146107959, 0.04113792919, 0.0007496649711};
  for (int i = 0; i < 4; ++i) EXPECT_NEAR(e.eigenvalues[i], expected[i], 1e-10);
  EXPECT_NEAR(e.eigenvalues.sum(), 1.0, 1e-10);
}

TEST(EigSymmetric, RoundTrip) {
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 100; ++trial) {
    const Index n = 1 + trial % 40;
    const Matrix q = random_orthogonal(n, rng);
    const Eigen::VectorXd lambda = random_matrix(n, 1, rng);
    const Matrix m = q * lambda.asDiagonal() * q.transpose();
    const auto e = eig_symmetric(0.5 * (m + m.transpose()));
    const double scale = std::max(1.0, frobenius_norm(m));
    EXPECT_LE(frobenius_norm(e.eigenvectors * e.eigenvalues.asDiagonal() * e.eigenvectors.transpose() - m),
              1e-10 * scale);
    EXPECT_LE(frobenius_norm(e.eigenvectors.transpose() * e.eigenvectors - Matrix::Identity(n, n)), 1e-10);
    for (Index j = 1; j < n; ++j) EXPECT_GE(e.eigenvalues[j - 1], e.eigenvalues[j]);
  }
}

TEST(EigSymmetric, RejectsAsymmetric) {
  try {
    eig_symmetric(mat(2, 2, {1, 2, 3, 4}));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::NotSymmetric);
  }
}

TEST(Svd, MatrixExampleTopSingularValue) {
  const Matrix a = load_matrix("matrix_4x3.json");
  const double s1 = svd(a).singularValues[0];
  EXPECT_NEAR(s1, 48.46054603, 1e-6);
  // Oracle: square root of the top eigenvalue of A^T A.
  EXPECT_NEAR(s1, std::sqrt(eig_symmetric(a.transpose() * a).eigenvalues[0]), 1e-10 * s1);
}

TEST(Svd, RightSingularVector) {
  const auto d = svd(mat(3, 2, {4, -9, 2, 1, -5, -7}));
  EXPECT_LT(sign_class_distance(d.v.col(0), (VectorXd(2) << 0.01162554952, 0.99993242102).finished()), 1e-9);
  EXPECT_LT(sign_class_distance(d.u.col(0), (VectorXd(3) << -0.7821828866, 0.08939199251, -0.6166027924).finished()),
            1e-9);
}

TEST(Svd, Diagonal) {
  const auto d = svd(mat(2, 2, {2, 0, 0, 1}));
  EXPECT_NEAR(d.singularValues[0], 2, 1e-15);
  EXPECT_NEAR(d.singularValues[1], 1, 1e-15);
}

TEST(Svd, Reconstruction) {
  std::mt19937_64 rng(4);
  std::uniform_int_distribution<Index> n(1, 40);
  for (int trial = 0; trial < 100; ++trial) {
    const Matrix a = random_matrix(n(rng), n(rng), rng);
    const auto d = svd(a);
    EXPECT_LE(frobenius_norm(d.u * d.singularValues.asDiagonal() * d.v.transpose() - a), 1e-10 * frobenius_norm(a));
    const Index k = d.singularValues.size();
    EXPECT_LE(frobenius_norm(d.u.transpose() * d.u - Matrix::Identity(k, k)), 1e-10);
    EXPECT_LE(frobenius_norm(d.v.transpose() * d.v - Matrix::Identity(k, k)), 1e-10);
    for (Index j = 0; j < k; ++j) {
      EXPECT_GE(d.singularValues[j], 0);
      if (j) {
        EXPECT_GE(d.singularValues[j - 1], d.singularValues[j]);
      }
    }
  }
}

TEST(Cholesky, Identity) {
  const auto c = cholesky(Matrix::Identity(3, 3));
  EXPECT_TRUE(c.factor().isApprox(Matrix::Identity(3, 3)));
}

TEST(Cholesky, HandCheckable) {
  const auto c = cholesky(mat(2, 2, {4, 2, 2, 5}));
  EXPECT_LE(frobenius_norm(c.factor() * c.factor().transpose() - mat(2, 2, {4, 2, 2, 5})), 1e-14);
  EXPECT_EQ(c.permutation, (std::vector<Index>{0, 1}));
  EXPECT_TRUE(c.lower.isApprox(mat(2, 2, {2, 0, 1, 2})));
}

TEST(Cholesky, RoundTripIncludingSemidefinite) {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 100; ++trial) {
    const Index n = 1 + trial % 40;
    const Index rank = trial % 3 == 0 ? std::max<Index>(1, n / 2) : n;
    const Matrix l = random_matrix(n, rank, rng);
    const Matrix m = l * l.transpose();
    const auto c = cholesky(m);
    EXPECT_LE(frobenius_norm(c.factor() * c.factor().transpose() - m), 1e-10 * frobenius_norm(m));
    EXPECT_EQ(c.rank, rank);
  }
}

TEST(Cholesky, RejectsIndefinite) {
  try {
    cholesky(mat(2, 2, {1, 0, 0, -1}));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::NotPSD);
  }
  EXPECT_THROW(cholesky(mat(2, 2, {1, 2, 0, 1})), Error);
}
