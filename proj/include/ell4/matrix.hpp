#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <vector>

#include "ell4/rational.hpp"

namespace ell4 {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct NotPsdError : Error {
  using Error::Error;
};
struct MaximalEtfError : Error {
  using Error::Error;
};
struct NotOptimalError : Error {
  using Error::Error;
};
struct NotMinimalRankError : Error {
  using Error::Error;
};
struct NotStructuredError : Error {
  using Error::Error;
};
struct AmbiguityError : Error {
  using Error::Error;
};

// Dense row-major matrix over double or Rational.
template <typename T>
struct Mat {
  int rows = 0, cols = 0;
  std::vector<T> a;

  Mat() = default;
  Mat(int r, int c) : rows(r), cols(c), a(static_cast<size_t>(r) * c, T(0)) {}

  T& operator()(int i, int j) { return a[static_cast<size_t>(i) * cols + j]; }
  const T& operator()(int i, int j) const { return a[static_cast<size_t>(i) * cols + j]; }

  static Mat identity(int n) {
    Mat m(n, n);
    for (int i = 0; i < n; ++i) m(i, i) = T(1);
    return m;
  }

  Mat transpose() const {
    Mat t(cols, rows);
    for (int i = 0; i < rows; ++i)
      for (int j = 0; j < cols; ++j) t(j, i) = (*this)(i, j);
    return t;
  }

  Mat operator*(const Mat& b) const {
    if (cols != b.rows) throw Error("matmul: dimension mismatch");
    Mat c(rows, b.cols);
    for (int i = 0; i < rows; ++i)
      for (int k = 0; k < cols; ++k) {
        const T& aik = (*this)(i, k);
        if (aik == T(0)) continue;
        for (int j = 0; j < b.cols; ++j) c(i, j) += aik * b(k, j);
      }
    return c;
  }

  Mat operator+(const Mat& b) const {
    if (rows != b.rows || cols != b.cols) throw Error("add: dimension mismatch");
    Mat c(rows, cols);
    for (size_t t = 0; t < a.size(); ++t) c.a[t] = a[t] + b.a[t];
    return c;
  }

  Mat operator-(const Mat& b) const {
    if (rows != b.rows || cols != b.cols) throw Error("sub: dimension mismatch");
    Mat c(rows, cols);
    for (size_t t = 0; t < a.size(); ++t) c.a[t] = a[t] - b.a[t];
    return c;
  }

  Mat scaled(const T& s) const {
    Mat c(rows, cols);
    for (size_t t = 0; t < a.size(); ++t) c.a[t] = a[t] * s;
    return c;
  }

  bool operator==(const Mat& b) const { return rows == b.rows && cols == b.cols && a == b.a; }
};

using DenseMatrix = Mat<double>;
using RationalMatrix = Mat<Rational>;

inline double abs_of(double x) { return std::fabs(x); }
inline Rational abs_of(const Rational& x) { return rat_abs(x); }

template <typename T>
auto max_abs(const Mat<T>& m) {
  auto best = abs_of(T(0));
  for (const auto& x : m.a) best = std::max(best, abs_of(x));
  return best;
}

template <typename T>
auto sym_violation(const Mat<T>& m) {
  auto best = abs_of(T(0));
  for (int i = 0; i < m.rows; ++i)
    for (int j = i + 1; j < m.cols; ++j) best = std::max(best, abs_of(m(i, j) - m(j, i)));
  return best;
}

inline void require_symmetric(const DenseMatrix& m, double reltol = 1e-10,
                              const char* what = "matrix") {
  if (m.rows != m.cols) throw Error(std::string(what) + ": not square");
  double scale = std::max(1.0, max_abs(m));
  if (sym_violation(m) > reltol * scale) throw Error(std::string(what) + ": not symmetric");
}

inline void require_symmetric(const RationalMatrix& m, const char* what = "matrix") {
  if (m.rows != m.cols) throw Error(std::string(what) + ": not square");
  if (sym_violation(m) != 0) throw Error(std::string(what) + ": not exactly symmetric");
}

inline DenseMatrix to_dense(const RationalMatrix& q) {
  DenseMatrix d(q.rows, q.cols);
  for (size_t t = 0; t < q.a.size(); ++t) d.a[t] = to_double(q.a[t]);
  return d;
}

inline double frob_norm(const DenseMatrix& m) {
  double s = 0;
  for (double x : m.a) s += x * x;
  return std::sqrt(s);
}

inline double dot(const DenseMatrix& x, const DenseMatrix& y) {
  double s = 0;
  for (size_t t = 0; t < x.a.size(); ++t) s += x.a[t] * y.a[t];
  return s;
}

// rN x rN block matrix layout: block (i,j) sits at rows [i*r, (i+1)*r).
struct BlockLayout {
  int N = 0;
  int r = 0;
  int dim() const { return N * r; }
};

template <typename T>
Mat<T> block_of(const Mat<T>& m, const BlockLayout& lay, int i, int j) {
  Mat<T> b(lay.r, lay.r);
  for (int p = 0; p < lay.r; ++p)
    for (int q = 0; q < lay.r; ++q) b(p, q) = m(i * lay.r + p, j * lay.r + q);
  return b;
}

template <typename T>
void set_block(Mat<T>& m, const BlockLayout& lay, int i, int j, const Mat<T>& b) {
  for (int p = 0; p < lay.r; ++p)
    for (int q = 0; q < lay.r; ++q) m(i * lay.r + p, j * lay.r + q) = b(p, q);
}

// Blockwise transpose: result block (i,j) = A_[ij]^T.
template <typename T>
Mat<T> partial_transpose(const Mat<T>& m, const BlockLayout& lay) {
  if (m.rows != m.cols) throw Error("partial_transpose: not square");
  if (lay.r <= 0 || m.rows % lay.r != 0 || m.rows != lay.dim())
    throw Error("partial_transpose: dimension not divisible into r x r blocks");
  Mat<T> out(m.rows, m.cols);
  for (int i = 0; i < lay.N; ++i)
    for (int j = 0; j < lay.N; ++j)
      for (int p = 0; p < lay.r; ++p)
        for (int q = 0; q < lay.r; ++q)
          out(i * lay.r + p, j * lay.r + q) = m(i * lay.r + q, j * lay.r + p);
  return out;
}

template <typename T>
T trace_of(const Mat<T>& m) {
  T s(0);
  for (int i = 0; i < std::min(m.rows, m.cols); ++i) s += m(i, i);
  return s;
}

// vec(V) for V in R^{r x N}: concatenation of columns, block i of length r is v_i.
inline std::vector<double> vec_of_columns(const DenseMatrix& V) {
  std::vector<double> v(static_cast<size_t>(V.rows) * V.cols);
  for (int i = 0; i < V.cols; ++i)
    for (int p = 0; p < V.rows; ++p) v[static_cast<size_t>(i) * V.rows + p] = V(p, i);
  return v;
}

inline DenseMatrix outer(const std::vector<double>& x, const std::vector<double>& y) {
  DenseMatrix m(static_cast<int>(x.size()), static_cast<int>(y.size()));
  for (size_t i = 0; i < x.size(); ++i)
    for (size_t j = 0; j < y.size(); ++j) m(static_cast<int>(i), static_cast<int>(j)) = x[i] * y[j];
  return m;
}

inline std::vector<double> matvec(const DenseMatrix& m, const std::vector<double>& x) {
  std::vector<double> y(m.rows, 0.0);
  for (int i = 0; i < m.rows; ++i) {
    double s = 0;
    for (int j = 0; j < m.cols; ++j) s += m(i, j) * x[j];
    y[i] = s;
  }
  return y;
}

}  // namespace ell4
