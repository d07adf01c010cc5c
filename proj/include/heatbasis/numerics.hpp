#pragma once

// Dense symmetric linear algebra: cyclic Jacobi eigensolver, diagonally
// pivoted truncated Cholesky, SPD solve. All routines are deterministic.

#include <algorithm>
#include <cmath>
#include <numeric>
#include <span>
#include <string>
#include <vector>

#include "heatbasis/error.hpp"

namespace heatbasis {

/// Dense row-major matrix.
class Matrix {
 public:
  Matrix() = default;
  Matrix(int rows, int cols, double fill = 0.0) : rows_(rows), cols_(cols), data_(std::size_t(rows) * cols, fill) {}

  static Matrix identity(int n) {
    Matrix m(n, n);
    for (int i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
  }

  int rows() const noexcept { return rows_; }
  int cols() const noexcept { return cols_; }
  double& operator()(int i, int j) { return data_[std::size_t(i) * cols_ + j]; }
  double operator()(int i, int j) const { return data_[std::size_t(i) * cols_ + j]; }
  std::span<const double> data() const noexcept { return data_; }

  std::vector<double> column(int j) const {
    std::vector<double> c(rows_);
    for (int i = 0; i < rows_; ++i) c[i] = (*this)(i, j);
    return c;
  }

  Matrix transpose() const {
    Matrix t(cols_, rows_);
    for (int i = 0; i < rows_; ++i)
      for (int j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
    return t;
  }

  Matrix operator*(const Matrix& o) const {
    if (cols_ != o.rows_) throw InvalidArgument("matrix dimension mismatch");
    Matrix r(rows_, o.cols_);
    for (int i = 0; i < rows_; ++i)
      for (int k = 0; k < cols_; ++k) {
        const double a = (*this)(i, k);
        if (a == 0.0) continue;
        for (int j = 0; j < o.cols_; ++j) r(i, j) += a * o(k, j);
      }
    return r;
  }

  std::vector<double> operator*(std::span<const double> v) const {
    if (static_cast<int>(v.size()) != cols_) throw InvalidArgument("matrix-vector dimension mismatch");
    std::vector<double> r(rows_, 0.0);
    for (int i = 0; i < rows_; ++i) {
      double s = 0.0;
      for (int j = 0; j < cols_; ++j) s += (*this)(i, j) * v[j];
      r[i] = s;
    }
    return r;
  }

  Matrix operator-(const Matrix& o) const {
    Matrix r = *this;
    for (std::size_t i = 0; i < data_.size(); ++i) r.data_[i] -= o.data_[i];
    return r;
  }

  double frobenius() const {
    double s = 0.0;
    for (double v : data_) s += v * v;
    return std::sqrt(s);
  }
  double max_abs() const {
    double m = 0.0;
    for (double v : data_) m = std::max(m, std::abs(v));
    return m;
  }

  friend bool operator==(const Matrix&, const Matrix&) = default;

 private:
  int rows_ = 0;
  int cols_ = 0;
  std::vector<double> data_;
};

/// Square matrix with (i, j) and (j, i) always written together.
class SymmetricMatrix {
 public:
  SymmetricMatrix() = default;
  explicit SymmetricMatrix(int order) : m_(order, order) {}

  /// Takes the lower triangle of `m` and mirrors it.
  static SymmetricMatrix from_lower(const Matrix& m) {
    if (m.rows() != m.cols()) throw InvalidArgument("symmetric matrix must be square");
    SymmetricMatrix s(m.rows());
    for (int i = 0; i < m.rows(); ++i)
      for (int j = 0; j <= i; ++j) s.set(i, j, m(i, j));
    return s;
  }
  static SymmetricMatrix identity(int n) { return from_lower(Matrix::identity(n)); }
  static SymmetricMatrix diagonal(std::span<const double> d) {
    SymmetricMatrix s(static_cast<int>(d.size()));
    for (std::size_t i = 0; i < d.size(); ++i) s.set(int(i), int(i), d[i]);
    return s;
  }

  int order() const noexcept { return m_.rows(); }
  void set(int i, int j, double v) {
    m_(i, j) = v;
    m_(j, i) = v;
  }
  double operator()(int i, int j) const { return m_(i, j); }
  const Matrix& dense() const noexcept { return m_; }
  double frobenius() const { return m_.frobenius(); }
  double trace() const {
    double s = 0.0;
    for (int i = 0; i < order(); ++i) s += m_(i, i);
    return s;
  }

  friend bool operator==(const SymmetricMatrix&, const SymmetricMatrix&) = default;

 private:
  Matrix m_;
};

struct EigenDecomposition {
  std::vector<double> eigenvalues;  ///< descending
  Matrix eigenvectors;              ///< column i pairs with eigenvalues[i]
};

/// Cyclic Jacobi rotations until the off-diagonal Frobenius mass drops below
/// 1e-14·‖A‖_F. Each eigenvector is signed so its largest entry is positive.
inline EigenDecomposition symmetric_eig(const SymmetricMatrix& A, int max_sweeps = 100) {
  const int n = A.order();
  Matrix a = A.dense();
  Matrix v = Matrix::identity(n);
  const double scale = A.frobenius();
  auto off = [&] {
    double s = 0.0;
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        if (i != j) s += a(i, j) * a(i, j);
    return std::sqrt(s);
  };
  int sweep = 0;
  while (scale > 0.0 && off() >= 1e-14 * scale) {
    if (++sweep > max_sweeps) throw ConvergenceError("symmetric_eig: sweep budget exceeded");
    for (int p = 0; p < n - 1; ++p)
      for (int q = p + 1; q < n; ++q) {
        const double apq = a(p, q);
        if (apq == 0.0) continue;
        const double theta = (a(q, q) - a(p, p)) / (2.0 * apq);
        const double t = (theta >= 0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0), s = t * c;
        for (int k = 0; k < n; ++k) {
          const double akp = a(k, p), akq = a(k, q);
          a(k, p) = c * akp - s * akq;
          a(k, q) = s * akp + c * akq;
        }
        for (int k = 0; k < n; ++k) {
          const double apk = a(p, k), aqk = a(q, k);
          a(p, k) = c * apk - s * aqk;
          a(q, k) = s * apk + c * aqk;
        }
        a(p, q) = a(q, p) = 0.0;
        for (int k = 0; k < n; ++k) {
          const double vkp = v(k, p), vkq = v(k, q);
          v(k, p) = c * vkp - s * vkq;
          v(k, q) = s * vkp + c * vkq;
        }
      }
  }
  std::vector<int> idx(n);
  std::iota(idx.begin(), idx.end(), 0);
  std::stable_sort(idx.begin(), idx.end(), [&](int i, int j) { return a(i, i) > a(j, j); });
  EigenDecomposition out;
  out.eigenvalues.resize(n);
  out.eigenvectors = Matrix(n, n);
  for (int c = 0; c < n; ++c) {
    const int src = idx[c];
    out.eigenvalues[c] = a(src, src);
    int big = 0;
    for (int k = 1; k < n; ++k)
      if (std::abs(v(k, src)) > std::abs(v(big, src))) big = k;
    const double sign = v(big, src) < 0 ? -1.0 : 1.0;
    for (int k = 0; k < n; ++k) out.eigenvectors(k, c) = sign * v(k, src);
  }
  return out;
}

/// A[perm[i], perm[j]] ≈ Σ_k L(i,k) L(j,k); L is order × rank, lower
/// trapezoidal in pivoted coordinates.
struct CholeskyFactor {
  Matrix L;
  int rank = 0;
  std::vector<int> perm;

  /// Leading rank × rank triangle.
  Matrix leading() const {
    Matrix t(rank, rank);
    for (int i = 0; i < rank; ++i)
      for (int j = 0; j <= i; ++j) t(i, j) = L(i, j);
    return t;
  }

  /// P L Lᵀ Pᵀ in original coordinates.
  SymmetricMatrix reconstruct() const {
    const int n = L.rows();
    SymmetricMatrix r(n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j <= i; ++j) {
        double s = 0.0;
        for (int k = 0; k < rank; ++k) s += L(i, k) * L(j, k);
        r.set(perm[i], perm[j], s);
      }
    return r;
  }
};

/// Diagonally pivoted Cholesky that stops once the largest remaining pivot
/// falls below rel_tol × the first pivot. Remaining diagonals below
/// −rel_tol·‖A‖_F mean A is not PSD.
inline CholeskyFactor cholesky_trunc(const SymmetricMatrix& A, double rel_tol = 1e-10) {
  const int n = A.order();
  Matrix w = A.dense();
  const double normA = A.frobenius();
  CholeskyFactor f;
  f.perm.resize(n);
  std::iota(f.perm.begin(), f.perm.end(), 0);
  Matrix L(n, n);
  double first = 0.0;
  int k = 0;
  for (; k < n; ++k) {
    int p = k;
    for (int i = k + 1; i < n; ++i)
      if (w(i, i) > w(p, p)) p = i;
    for (int i = k; i < n; ++i)
      if (w(i, i) < -rel_tol * normA)
        throw NotPositiveSemidefinite("cholesky_trunc: pivot " + std::to_string(w(i, i)) + " is significantly negative");
    const double piv = w(p, p);
    if (k == 0) first = piv;
    if (!(piv > 0.0) || piv < rel_tol * first) break;
    if (p != k) {
      std::swap(f.perm[p], f.perm[k]);
      for (int j = 0; j < n; ++j) std::swap(w(p, j), w(k, j));
      for (int i = 0; i < n; ++i) std::swap(w(i, p), w(i, k));
      for (int j = 0; j < k; ++j) std::swap(L(p, j), L(k, j));
    }
    const double d = std::sqrt(piv);
    L(k, k) = d;
    for (int i = k + 1; i < n; ++i) L(i, k) = w(i, k) / d;
    for (int i = k + 1; i < n; ++i)
      for (int j = k + 1; j <= i; ++j) {
        w(i, j) -= L(i, k) * L(j, k);
        w(j, i) = w(i, j);
      }
  }
  f.rank = k;
  f.L = Matrix(n, k);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < k && j <= i; ++j) f.L(i, j) = L(i, j);
  return f;
}

/// Cholesky in the given index order that drops index i whenever its
/// remaining pivot (squared distance from the span of the accepted indices)
/// is below rel_tol·A(i,i). Accepted indices come first in `perm`, in
/// order, so the factor of a leading principal block is a prefix of the
/// factor of the whole matrix.
inline CholeskyFactor cholesky_sequential(const SymmetricMatrix& A, double rel_tol = 1e-12) {
  const int n = A.order();
  CholeskyFactor f;
  std::vector<int> rejected;
  std::vector<std::vector<double>> rows;  // rows[i] = L row of accepted index i
  for (int i = 0; i < n; ++i) {
    const double aii = A(i, i);
    if (aii < 0.0) throw NotPositiveSemidefinite("cholesky_sequential: negative diagonal entry");
    std::vector<double> row(f.perm.size() + 1, 0.0);
    double piv = aii;
    for (std::size_t k = 0; k < f.perm.size(); ++k) {
      double s = A(i, f.perm[k]);
      for (std::size_t q = 0; q < k; ++q) s -= row[q] * rows[k][q];
      row[k] = s / rows[k][k];
      piv -= row[k] * row[k];
    }
    if (aii > 0.0 && piv >= rel_tol * aii) {
      row.back() = std::sqrt(piv);
      rows.push_back(std::move(row));
      f.perm.push_back(i);
    } else {
      rejected.push_back(i);
    }
  }
  f.rank = static_cast<int>(f.perm.size());
  f.L = Matrix(n, f.rank);
  for (int i = 0; i < f.rank; ++i)
    for (int k = 0; k <= i; ++k) f.L(i, k) = rows[i][k];
  for (std::size_t r = 0; r < rejected.size(); ++r) {
    const int i = rejected[r], row_index = f.rank + static_cast<int>(r);
    for (int k = 0; k < f.rank; ++k) {
      double s = A(i, f.perm[k]);
      for (int q = 0; q < k; ++q) s -= f.L(row_index, q) * f.L(k, q);
      f.L(row_index, k) = s / f.L(k, k);
    }
  }
  f.perm.insert(f.perm.end(), rejected.begin(), rejected.end());
  return f;
}

/// Solves L y = b for lower-triangular L.
inline std::vector<double> solve_lower(const Matrix& L, std::span<const double> b) {
  const int n = L.rows();
  std::vector<double> y(b.begin(), b.end());
  for (int i = 0; i < n; ++i) {
    double s = y[i];
    for (int k = 0; k < i; ++k) s -= L(i, k) * y[k];
    y[i] = s / L(i, i);
  }
  return y;
}

/// Solves Lᵀ x = y for lower-triangular L.
inline std::vector<double> solve_lower_transpose(const Matrix& L, std::span<const double> y) {
  const int n = L.rows();
  std::vector<double> x(y.begin(), y.end());
  for (int i = n - 1; i >= 0; --i) {
    double s = x[i];
    for (int k = i + 1; k < n; ++k) s -= L(k, i) * x[k];
    x[i] = s / L(i, i);
  }
  return x;
}

/// x with A x = b for SPD A via unpivoted Cholesky.
inline std::vector<double> spd_solve(const SymmetricMatrix& A, std::span<const double> b) {
  const int n = A.order();
  if (static_cast<int>(b.size()) != n) throw InvalidArgument("spd_solve dimension mismatch");
  Matrix L(n, n);
  for (int j = 0; j < n; ++j) {
    double d = A(j, j);
    for (int k = 0; k < j; ++k) d -= L(j, k) * L(j, k);
    if (!(d > 0.0)) throw TruncationRequired("spd_solve: matrix is not numerically positive definite; truncate first");
    L(j, j) = std::sqrt(d);
    for (int i = j + 1; i < n; ++i) {
      double s = A(i, j);
      for (int k = 0; k < j; ++k) s -= L(i, k) * L(j, k);
      L(i, j) = s / L(j, j);
    }
  }
  return solve_lower_transpose(L, solve_lower(L, b));
}

}  // namespace heatbasis
