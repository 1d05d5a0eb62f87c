// Dense exact linear algebra over Q for small dimensions (vectors are rows;
// matrices act on the right: w |-> w * g).
#pragma once

#include "lw/rat.hpp"

#include <initializer_list>
#include <stdexcept>
#include <vector>

namespace lw {

using Vec = std::vector<Rat>;

struct Mat {
  long rows = 0, cols = 0;
  std::vector<Rat> a;  // row-major

  Mat() = default;
  Mat(long r, long c) : rows(r), cols(c), a(static_cast<std::size_t>(r) * c, Rat(0)) {}

  static Mat identity(long n) {
    Mat m(n, n);
    for (long i = 0; i < n; ++i) m(i, i) = 1;
    return m;
  }
  static Mat from_rows(const std::vector<Vec>& rws) {
    if (rws.empty()) return Mat();
    Mat m(static_cast<long>(rws.size()), static_cast<long>(rws[0].size()));
    for (long i = 0; i < m.rows; ++i) {
      if (static_cast<long>(rws[i].size()) != m.cols)
        throw std::invalid_argument("Mat::from_rows: ragged rows");
      for (long j = 0; j < m.cols; ++j) m(i, j) = rws[i][j];
    }
    return m;
  }

  Rat& operator()(long i, long j) { return a[static_cast<std::size_t>(i) * cols + j]; }
  const Rat& operator()(long i, long j) const { return a[static_cast<std::size_t>(i) * cols + j]; }

  Vec row(long i) const {
    Vec v(cols);
    for (long j = 0; j < cols; ++j) v[j] = (*this)(i, j);
    return v;
  }

  bool operator==(const Mat& o) const { return rows == o.rows && cols == o.cols && a == o.a; }
  bool operator!=(const Mat& o) const { return !(*this == o); }
};

inline Mat operator*(const Mat& x, const Mat& y) {
  if (x.cols != y.rows) throw std::invalid_argument("Mat product: shape mismatch");
  Mat z(x.rows, y.cols);
  for (long i = 0; i < x.rows; ++i)
    for (long k = 0; k < x.cols; ++k) {
      const Rat& v = x(i, k);
      if (v == 0) continue;
      for (long j = 0; j < y.cols; ++j) z(i, j) += v * y(k, j);
    }
  return z;
}

inline Vec operator*(const Vec& v, const Mat& m) {
  if (static_cast<long>(v.size()) != m.rows) throw std::invalid_argument("Vec*Mat: shape mismatch");
  Vec out(m.cols, Rat(0));
  for (long i = 0; i < m.rows; ++i) {
    if (v[i] == 0) continue;
    for (long j = 0; j < m.cols; ++j) out[j] += v[i] * m(i, j);
  }
  return out;
}

inline Vec operator+(const Vec& x, const Vec& y) {
  Vec z(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) z[i] = x[i] + y[i];
  return z;
}
inline Vec operator-(const Vec& x, const Vec& y) {
  Vec z(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) z[i] = x[i] - y[i];
  return z;
}
inline Vec operator-(const Vec& x) {
  Vec z(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) z[i] = -x[i];
  return z;
}
inline Vec scaled(const Vec& x, const Rat& c) {
  Vec z(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) z[i] = c * x[i];
  return z;
}
inline bool is_zero_vec(const Vec& x) {
  for (const Rat& r : x)
    if (r != 0) return false;
  return true;
}

inline Mat operator+(const Mat& x, const Mat& y) {
  if (x.rows != y.rows || x.cols != y.cols)
    throw std::invalid_argument("Mat sum: shape mismatch");
  Mat z = x;
  for (std::size_t i = 0; i < z.a.size(); ++i) z.a[i] += y.a[i];
  return z;
}

inline Mat operator-(const Mat& x, const Mat& y) {
  if (x.rows != y.rows || x.cols != y.cols)
    throw std::invalid_argument("Mat difference: shape mismatch");
  Mat z = x;
  for (std::size_t i = 0; i < z.a.size(); ++i) z.a[i] -= y.a[i];
  return z;
}

inline Mat transpose(const Mat& m) {
  Mat t(m.cols, m.rows);
  for (long i = 0; i < m.rows; ++i)
    for (long j = 0; j < m.cols; ++j) t(j, i) = m(i, j);
  return t;
}

inline Mat scaled(const Mat& m, const Rat& c) {
  Mat z = m;
  for (Rat& r : z.a) r *= c;
  return z;
}

// Gauss-Jordan inverse (throws if singular).
inline Mat inverse(const Mat& m) {
  if (m.rows != m.cols) throw std::invalid_argument("inverse: not square");
  long n = m.rows;
  Mat a = m, inv = Mat::identity(n);
  for (long col = 0; col < n; ++col) {
    long piv = -1;
    for (long i = col; i < n; ++i)
      if (a(i, col) != 0) { piv = i; break; }
    if (piv < 0) throw std::domain_error("inverse: singular matrix");
    if (piv != col)
      for (long j = 0; j < n; ++j) {
        std::swap(a(piv, j), a(col, j));
        std::swap(inv(piv, j), inv(col, j));
      }
    Rat d = a(col, col);
    for (long j = 0; j < n; ++j) { a(col, j) /= d; inv(col, j) /= d; }
    for (long i = 0; i < n; ++i) {
      if (i == col || a(i, col) == 0) continue;
      Rat f = a(i, col);
      for (long j = 0; j < n; ++j) {
        a(i, j) -= f * a(col, j);
        inv(i, j) -= f * inv(col, j);
      }
    }
  }
  return inv;
}

inline Rat determinant(const Mat& m) {
  if (m.rows != m.cols) throw std::invalid_argument("determinant: not square");
  Mat a = m;
  long n = m.rows;
  Rat det = 1;
  for (long col = 0; col < n; ++col) {
    long piv = -1;
    for (long i = col; i < n; ++i)
      if (a(i, col) != 0) { piv = i; break; }
    if (piv < 0) return Rat(0);
    if (piv != col) {
      for (long j = 0; j < n; ++j) std::swap(a(piv, j), a(col, j));
      det = -det;
    }
    det *= a(col, col);
    for (long i = col + 1; i < n; ++i) {
      if (a(i, col) == 0) continue;
      Rat f = a(i, col) / a(col, col);
      for (long j = col; j < n; ++j) a(i, j) -= f * a(col, j);
    }
  }
  return det;
}

// Solve x * M = v exactly (M square invertible).
inline Vec solve_row(const Vec& v, const Mat& m) { return v * inverse(m); }

inline bool all_integer(const Mat& m) {
  for (const Rat& r : m.a)
    if (!is_integer(r)) return false;
  return true;
}

}  // namespace lw
