#include <gtest/gtest.h>

#include <Eigen/Dense>
#include <cmath>
#include <random>

#include "heatbasis/numerics.hpp"

using namespace heatbasis;

namespace {

SymmetricMatrix random_symmetric(int n, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  SymmetricMatrix a(n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j <= i; ++j) a.set(i, j, u(rng));
  return a;
}

SymmetricMatrix random_spd(int n, std::mt19937_64& rng, int rank = -1) {
  if (rank < 0) rank = n;
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  Matrix m(rank, n);
  for (int i = 0; i < rank; ++i)
    for (int j = 0; j < n; ++j) m(i, j) = u(rng);
  return SymmetricMatrix::from_lower(m.transpose() * m);
}

Eigen::MatrixXd to_eigen(const SymmetricMatrix& a) {
  Eigen::MatrixXd e(a.order(), a.order());
  for (int i = 0; i < a.order(); ++i)
    for (int j = 0; j < a.order(); ++j) e(i, j) = a(i, j);
  return e;
}

double norm(std::span<const double> v) {
  double s = 0.0;
  for (double x : v) s += x * x;
  return std::sqrt(s);
}

}  // namespace

TEST(SymmetricMatrix, StructuralSymmetry) {
  SymmetricMatrix a(3);
  a.set(2, 0, 5.0);
  EXPECT_EQ(a(0, 2), 5.0);
  Matrix m(2, 2);
  m(0, 0) = 1;
  m(1, 0) = 2;
  m(0, 1) = 99;
  m(1, 1) = 3;
  const auto s = SymmetricMatrix::from_lower(m);
  EXPECT_EQ(s(0, 1), 2.0);
  EXPECT_EQ(s.trace(), 4.0);
  EXPECT_THROW(SymmetricMatrix::from_lower(Matrix(2, 3)), InvalidArgument);
}

TEST(SymmetricEig, TwoByTwo) {
  SymmetricMatrix a(2);
  a.set(0, 0, 2);
  a.set(1, 1, 2);
  a.set(1, 0, 1);
  const auto e = symmetric_eig(a);
  EXPECT_NEAR(e.eigenvalues[0], 3.0, 1e-14);
  EXPECT_NEAR(e.eigenvalues[1], 1.0, 1e-14);
  const double r = 1 / std::sqrt(2.0);
  EXPECT_NEAR(std::abs(e.eigenvectors(0, 0)), r, 1e-14);
  EXPECT_NEAR(e.eigenvectors(0, 0) * e.eigenvectors(1, 0), 0.5, 1e-14);
  EXPECT_NEAR(e.eigenvectors(0, 1) * e.eigenvectors(1, 1), -0.5, 1e-14);
}

TEST(SymmetricEig, IdentityAndDiagonal) {
  const auto id = symmetric_eig(SymmetricMatrix::identity(5));
  for (double v : id.eigenvalues) EXPECT_EQ(v, 1.0);
  const std::vector<double> d{1, 5, 3};
  const auto e = symmetric_eig(SymmetricMatrix::diagonal(d));
  EXPECT_EQ(e.eigenvalues, (std::vector<double>{5, 3, 1}));
  EXPECT_EQ(e.eigenvectors(1, 0), 1.0);
  EXPECT_EQ(e.eigenvectors(2, 1), 1.0);
  EXPECT_EQ(e.eigenvectors(0, 2), 1.0);
  const auto empty = symmetric_eig(SymmetricMatrix(0));
  EXPECT_TRUE(empty.eigenvalues.empty());
}

TEST(SymmetricEig, RandomInvariants) {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 100; ++trial) {
    const int n = 1 + trial % 12;
    const auto a = random_symmetric(n, rng);
    const auto e = symmetric_eig(a);
    const double fro = a.frobenius();
    double sum = 0.0, sq = 0.0;
    for (int i = 0; i < n; ++i) {
      sum += e.eigenvalues[i];
      sq += e.eigenvalues[i] * e.eigenvalues[i];
      if (i > 0) EXPECT_GE(e.eigenvalues[i - 1], e.eigenvalues[i]);
      const auto v = e.eigenvectors.column(i);
      auto av = a.dense() * std::span<const double>(v);
      for (int k = 0; k < n; ++k) av[k] -= e.eigenvalues[i] * v[k];
      EXPECT_LE(norm(av), 1e-10 * fro) << trial << " " << i;
    }
    EXPECT_NEAR(sum, a.trace(), 1e-12 * std::max(1.0, fro));
    EXPECT_NEAR(sq, fro * fro, 1e-12 * fro * fro);
    const Matrix vtv = e.eigenvectors.transpose() * e.eigenvectors;
    EXPECT_LE((vtv - Matrix::identity(n)).max_abs(), 1e-12) << trial;
  }
}

TEST(SymmetricEig, AgreesWithEigen) {
  std::mt19937_64 rng(11);
  for (int n : {3, 10, 40}) {
    const auto a = random_symmetric(n, rng);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> ref(to_eigen(a));
    const auto e = symmetric_eig(a);
    for (int i = 0; i < n; ++i) EXPECT_NEAR(e.eigenvalues[i], ref.eigenvalues()[n - 1 - i], 1e-12 * a.frobenius());
  }
}

TEST(SymmetricEig, Deterministic) {
  std::mt19937_64 rng(3);
  const auto a = random_symmetric(20, rng);
  const auto e1 = symmetric_eig(a), e2 = symmetric_eig(a);
  EXPECT_EQ(e1.eigenvalues, e2.eigenvalues);
  EXPECT_EQ(e1.eigenvectors, e2.eigenvectors);
}

TEST(CholeskyTrunc, Identity) {
  const auto f = cholesky_trunc(SymmetricMatrix::identity(3), 1e-10);
  EXPECT_EQ(f.rank, 3);
  EXPECT_EQ(f.L, Matrix::identity(3));
}

TEST(CholeskyTrunc, RankOne) {
  const double v[] = {1, 2, 2};
  SymmetricMatrix a(3);
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j <= i; ++j) a.set(i, j, v[i] * v[j]);
  const auto f = cholesky_trunc(a, 1e-10);
  EXPECT_EQ(f.rank, 1);
  EXPECT_EQ(f.perm[0], 1);  // first of the two largest diagonals
  for (int i = 0; i < 3; ++i) EXPECT_NEAR(f.L(i, 0), v[f.perm[i]], 1e-14);
  EXPECT_LE((f.reconstruct().dense() - a.dense()).max_abs(), 1e-14);
}

TEST(CholeskyTrunc, ReconstructionAndRank) {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 30; ++trial) {
    const int n = 4 + trial % 9, r = 1 + trial % n;
    const auto a = random_spd(n, rng, r);
    const double tol = 1e-10;
    const auto f = cholesky_trunc(a, tol);
    EXPECT_EQ(f.rank, r) << trial;
    const double err = (f.reconstruct().dense() - a.dense()).frobenius();
    EXPECT_LE(err, n * tol * a.frobenius()) << trial;
  }
}

TEST(CholeskyTrunc, AgreesWithEigenLlt) {
  std::mt19937_64 rng(13);
  const auto a = random_spd(9, rng);
  const auto f = cholesky_trunc(a, 1e-14);
  ASSERT_EQ(f.rank, 9);
  Eigen::MatrixXd p = to_eigen(a);
  Eigen::MatrixXd permuted(9, 9);
  for (int i = 0; i < 9; ++i)
    for (int j = 0; j < 9; ++j) permuted(i, j) = p(f.perm[i], f.perm[j]);
  const Eigen::MatrixXd ref = permuted.llt().matrixL();
  for (int i = 0; i < 9; ++i)
    for (int j = 0; j <= i; ++j) EXPECT_NEAR(f.L(i, j), ref(i, j), 1e-12);
}

TEST(CholeskyTrunc, RejectsIndefinite) {
  SymmetricMatrix a(2);
  a.set(0, 0, 1);
  a.set(1, 1, -1);
  EXPECT_THROW(cholesky_trunc(a, 1e-10), NotPositiveSemidefinite);
  const auto zero = cholesky_trunc(SymmetricMatrix(3), 1e-10);
  EXPECT_EQ(zero.rank, 0);
}

TEST(CholeskySequential, KeepsOrderAndDropsDependentIndices) {
  // Column 2 duplicates column 0.
  SymmetricMatrix a(4);
  const double g[4][4] = {{4, 1, 4, 0}, {1, 3, 1, 1}, {4, 1, 4, 0}, {0, 1, 0, 2}};
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j <= i; ++j) a.set(i, j, g[i][j]);
  const auto f = cholesky_sequential(a);
  EXPECT_EQ(f.rank, 3);
  EXPECT_EQ(f.perm, (std::vector<int>{0, 1, 3, 2}));
  EXPECT_LE((f.reconstruct().dense() - a.dense()).max_abs(), 1e-14);
}

TEST(CholeskySequential, PrefixProperty) {
  std::mt19937_64 rng(17);
  const auto a = random_spd(10, rng);
  const auto full = cholesky_sequential(a);
  for (int m = 1; m <= 10; ++m) {
    SymmetricMatrix lead(m);
    for (int i = 0; i < m; ++i)
      for (int j = 0; j <= i; ++j) lead.set(i, j, a(i, j));
    const auto part = cholesky_sequential(lead);
    ASSERT_EQ(part.rank, m);
    for (int i = 0; i < m; ++i)
      for (int j = 0; j <= i; ++j) EXPECT_EQ(part.L(i, j), full.L(i, j));
  }
  SymmetricMatrix neg(1);
  neg.set(0, 0, -1);
  EXPECT_THROW(cholesky_sequential(neg), NotPositiveSemidefinite);
}

TEST(SpdSolve, Examples) {
  const std::vector<double> b{0.3, -2, 7};
  EXPECT_EQ(spd_solve(SymmetricMatrix::identity(3), b), b);
  const std::vector<double> d{4, 9};
  const auto x = spd_solve(SymmetricMatrix::diagonal(d), std::vector<double>{8, 27});
  EXPECT_NEAR(x[0], 2.0, 1e-15);
  EXPECT_NEAR(x[1], 3.0, 1e-15);
}

TEST(SpdSolve, RandomResidual) {
  std::mt19937_64 rng(19);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int trial = 0; trial < 20; ++trial) {
    auto a = random_spd(8, rng);
    for (int i = 0; i < 8; ++i) a.set(i, i, a(i, i) + 1.0);
    std::vector<double> b(8);
    for (double& v : b) v = u(rng);
    const auto x = spd_solve(a, b);
    auto r = a.dense() * std::span<const double>(x);
    for (int i = 0; i < 8; ++i) r[i] -= b[i];
    EXPECT_LT(norm(r) / norm(b), 1e-10);
  }
}

TEST(SpdSolve, Errors) {
  EXPECT_THROW(spd_solve(SymmetricMatrix::identity(2), std::vector<double>{1}), InvalidArgument);
  SymmetricMatrix singular(2);
  singular.set(0, 0, 1);
  EXPECT_THROW(spd_solve(singular, std::vector<double>{1, 1}), TruncationRequired);
}
