#pragma once

// Small dense and banded linear algebra, templated on the scalar so the same
// code runs in double and in Real.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <utility>
#include <vector>

#include "tw/precision.hpp"
#include "tw/real.hpp"

namespace tw::linalg {

template <class T>
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols, const T& fill) : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  T& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  const T& operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<T> data_;
};

// In-place lower Cholesky factor A = L L^T of a symmetric matrix (upper
// triangle ignored). Throws ConsistencyError on a nonpositive pivot; the
// failing row is reported so callers can distinguish leading minors.
template <class T>
void cholesky_in_place(Matrix<T>& a) {
  const std::size_t n = a.rows();
  for (std::size_t j = 0; j < n; ++j) {
    T d = a(j, j);
    for (std::size_t k = 0; k < j; ++k) d -= a(j, k) * a(j, k);
    if (!(d > 0.0)) {
      throw ConsistencyError("cholesky: matrix not positive definite at pivot " + std::to_string(j));
    }
    using std::sqrt;
    const T ljj = sqrt(d);
    a(j, j) = ljj;
    for (std::size_t i = j + 1; i < n; ++i) {
      T s = a(i, j);
      for (std::size_t k = 0; k < j; ++k) s -= a(i, k) * a(j, k);
      a(i, j) = s / ljj;
    }
    for (std::size_t k = j + 1; k < n; ++k) a(j, k) = a(j, j) * 0.0;
  }
}

// Solves L y = b for lower-triangular L (leading m x m block of `l`).
template <class T>
std::vector<T> forward_substitute(const Matrix<T>& l, std::vector<T> b, std::size_t m) {
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t k = 0; k < i; ++k) b[i] -= l(i, k) * b[k];
    b[i] /= l(i, i);
  }
  return b;
}

// Solves L^T x = y (leading m x m block).
template <class T>
std::vector<T> back_substitute_transposed(const Matrix<T>& l, std::vector<T> y, std::size_t m) {
  for (std::size_t ii = m; ii-- > 0;) {
    for (std::size_t k = ii + 1; k < m; ++k) y[ii] -= l(k, ii) * y[k];
    y[ii] /= l(ii, ii);
  }
  return y;
}

// Gaussian elimination with partial pivoting on a copy of `a`. Returns the
// solution of a x = b and, through log_abs_det/sign, the determinant.
template <class T>
std::vector<T> lu_solve(Matrix<T> a, std::vector<T> b, T* log_abs_det = nullptr, int* sign = nullptr) {
  using std::abs;
  using std::log;
  const std::size_t n = a.rows();
  int sg = 1;
  T ld = a(0, 0) * 0.0;
  for (std::size_t j = 0; j < n; ++j) {
    std::size_t p = j;
    for (std::size_t i = j + 1; i < n; ++i) {
      if (abs(a(i, j)) > abs(a(p, j))) p = i;
    }
    if (a(p, j) == 0.0) throw ConsistencyError("lu_solve: singular matrix");
    if (p != j) {
      for (std::size_t c = 0; c < n; ++c) std::swap(a(p, c), a(j, c));
      if (!b.empty()) std::swap(b[p], b[j]);
      sg = -sg;
    }
    const T piv = a(j, j);
    if (piv < 0.0) sg = -sg;
    ld += log(abs(piv));
    for (std::size_t i = j + 1; i < n; ++i) {
      const T f = a(i, j) / piv;
      for (std::size_t c = j + 1; c < n; ++c) a(i, c) -= f * a(j, c);
      if (!b.empty()) b[i] -= f * b[j];
    }
  }
  if (!b.empty()) {
    for (std::size_t jj = n; jj-- > 0;) {
      for (std::size_t c = jj + 1; c < n; ++c) b[jj] -= a(jj, c) * b[c];
      b[jj] /= a(jj, jj);
    }
  }
  if (log_abs_det) *log_abs_det = ld;
  if (sign) *sign = sg;
  return b;
}

// Banded matrix with kl sub- and ku super-diagonals, stored with kl extra
// rows of headroom for pivoting fill-in (LAPACK gbtrf layout).
template <class T>
class BandMatrix {
 public:
  BandMatrix(std::size_t n, std::size_t kl, std::size_t ku, const T& zero)
      : n_(n), kl_(kl), ku_(ku), ld_(2 * kl + ku + 1), data_(n * (2 * kl + ku + 1), zero), zero_(zero) {}

  std::size_t size() const { return n_; }
  std::size_t kl() const { return kl_; }
  std::size_t ku() const { return ku_; }

  bool in_band(std::size_t i, std::size_t j) const {
    return (j <= i + ku_ + kl_) && (i <= j + kl_);
  }
  T& operator()(std::size_t i, std::size_t j) { return data_[j * ld_ + (kl_ + ku_ + i - j)]; }
  const T& operator()(std::size_t i, std::size_t j) const { return data_[j * ld_ + (kl_ + ku_ + i - j)]; }

  // Gaussian elimination with partial pivoting; overwrites b with the solution.
  void solve_in_place(std::vector<T>& b) {
    using std::abs;
    const std::size_t n = n_;
    const std::size_t kv = ku_ + kl_;
    for (std::size_t j = 0; j < n; ++j) {
      const std::size_t last = std::min(n - 1, j + kl_);
      std::size_t p = j;
      for (std::size_t i = j + 1; i <= last; ++i) {
        if (abs((*this)(i, j)) > abs((*this)(p, j))) p = i;
      }
      if (abs((*this)(p, j)) == abs(zero_)) throw SolverError("banded solve: singular matrix", 0.0);
      const std::size_t jend = std::min(n - 1, j + kv);
      if (p != j) {
        for (std::size_t c = j; c <= jend; ++c) std::swap((*this)(p, c), (*this)(j, c));
        std::swap(b[p], b[j]);
      }
      const T piv = (*this)(j, j);
      for (std::size_t i = j + 1; i <= last; ++i) {
        const T f = (*this)(i, j) / piv;
        if (f == zero_) continue;
        for (std::size_t c = j + 1; c <= jend; ++c) (*this)(i, c) -= f * (*this)(j, c);
        b[i] -= f * b[j];
      }
    }
    for (std::size_t jj = n; jj-- > 0;) {
      const std::size_t jend = std::min(n - 1, jj + kv);
      for (std::size_t c = jj + 1; c <= jend; ++c) b[jj] -= (*this)(jj, c) * b[c];
      b[jj] /= (*this)(jj, jj);
    }
  }

 private:
  std::size_t n_, kl_, ku_, ld_;
  std::vector<T> data_;
  T zero_;
};

}  // namespace tw::linalg
