// The symplectic space W = F^{2m} with row vectors acted on by matrices from
// the right. Basis order (e_1..e_m; e*_1..e*_m), Gram matrix
// J = (0 I; -I 0), pairing <x,y> = x J y^T. B(w,w') pairs the X-part of w
// with the X*-part of w': B(w,w') = sum_i w_i w'_{m+i}, so that
// <w,w'> = B(w,w') - B(w',w).
#pragma once

#include "lw/linalg.hpp"

#include <set>
#include <vector>

namespace lw {

inline Mat gram_J(long m) {
  Mat j(2 * m, 2 * m);
  for (long i = 0; i < m; ++i) {
    j(i, m + i) = 1;
    j(m + i, i) = -1;
  }
  return j;
}

inline Rat sym_pair(const Vec& x, const Vec& y) {
  long m = static_cast<long>(x.size()) / 2;
  Rat s = 0;
  for (long i = 0; i < m; ++i) s += x[i] * y[m + i] - x[m + i] * y[i];
  return s;
}

inline Rat b_form(const Vec& w, const Vec& wp) {
  long m = static_cast<long>(w.size()) / 2;
  Rat s = 0;
  for (long i = 0; i < m; ++i) s += w[i] * wp[m + i];
  return s;
}

inline bool is_symplectic(const Mat& g) {
  if (g.rows != g.cols || g.rows % 2 != 0) return false;
  Mat j = gram_J(g.rows / 2);
  return g * j * transpose(g) == j;
}

// Similitude factor lambda with g J g^T = lambda J; throws if g is not in GSp.
inline Rat similitude(const Mat& g) {
  if (g.rows != g.cols || g.rows % 2 != 0)
    throw std::invalid_argument("similitude: bad shape");
  long m = g.rows / 2;
  Mat j = gram_J(m);
  Mat lhs = g * j * transpose(g);
  Rat lambda = lhs(0, m);
  if (lhs != scaled(j, lambda)) throw std::domain_error("similitude: not a similitude");
  if (lambda == 0) throw std::domain_error("similitude: singular");
  return lambda;
}

// The quadratic form q_g attached to g = (a b; c d) in block form:
//   q_g(x + x*) = 1/2 B(xa, xb) + 1/2 B(x*c, x*d) + B(x*c, xb),
// where for m-vectors u (an X-block image) and v (an X*-block image)
// B(u, v) = sum_i u_i v_i. Satisfies
//   q_g(w + w') - q_g(w) - q_g(w') = B(wg, w'g) - B(w, w')
// and the cocycle identity q_{gg'}(w) = q_g(w) + q_{g'}(wg).
inline Rat q_form(const Mat& g, const Vec& w) {
  long m = g.rows / 2;
  Vec xa(m, Rat(0)), xb(m, Rat(0)), xc(m, Rat(0)), xd(m, Rat(0));
  for (long j = 0; j < m; ++j)
    for (long i = 0; i < m; ++i) {
      xa[j] += w[i] * g(i, j);          // x * a
      xb[j] += w[i] * g(i, m + j);      // x * b
      xc[j] += w[m + i] * g(m + i, j);  // x* * c
      xd[j] += w[m + i] * g(m + i, m + j);  // x* * d
    }
  Rat s = 0;
  for (long j = 0; j < m; ++j)
    s += Rat(1, 2) * xa[j] * xb[j] + Rat(1, 2) * xc[j] * xd[j] + xc[j] * xb[j];
  return s;
}

// Signed-permutation Weyl representative omega_s * omega_S: first the pair
// permutation s (e_i -> e_{s(i)}, e*_i -> e*_{s(i)}), then for i in S the
// flip e_i -> -e*_i, e*_i -> e_i. Indices are 0-based.
inline Mat weyl_element(long m, const std::vector<long>& s, const std::set<long>& S) {
  Mat perm(2 * m, 2 * m);
  for (long i = 0; i < m; ++i) {
    perm(i, s[i]) = 1;
    perm(m + i, m + s[i]) = 1;
  }
  Mat flip = Mat::identity(2 * m);
  for (long i : S) {
    flip(i, i) = 0;
    flip(m + i, m + i) = 0;
    flip(i, m + i) = -1;
    flip(m + i, i) = 1;
  }
  return perm * flip;
}

// diag(t_1..t_m, 1/t_1..1/t_m)
inline Mat sp_diag(const std::vector<Rat>& t) {
  long m = static_cast<long>(t.size());
  Mat d(2 * m, 2 * m);
  for (long i = 0; i < m; ++i) {
    d(i, i) = t[i];
    d(m + i, m + i) = Rat(1) / t[i];
  }
  return d;
}

// GSp block-diagonal diag(g1, g2) built from two m x m blocks.
inline Mat gsp_block_diag(const Mat& g1, const Mat& g2) {
  long m = g1.rows;
  Mat d(2 * m, 2 * m);
  for (long i = 0; i < m; ++i)
    for (long j = 0; j < m; ++j) {
      d(i, j) = g1(i, j);
      d(m + i, m + j) = g2(i, j);
    }
  return d;
}

// Inverse of a symplectic matrix via g^{-1} = J g^T J^{-1} (cheap and exact).
inline Mat sp_inverse(const Mat& g) {
  long m = g.rows / 2;
  Mat j = gram_J(m);
  Mat jinv = scaled(j, Rat(-1));  // J^{-1} = -J
  return j * transpose(g) * jinv;
}

}  // namespace lw
