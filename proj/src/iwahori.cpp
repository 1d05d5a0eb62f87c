#include "lw/iwahori.hpp"

#include "lw/lattice.hpp"

#include <algorithm>
#include <climits>
#include <map>
#include <numeric>
#include <stdexcept>

namespace lw {

namespace {

// 2-adic valuation with the convention vv(0) = +infinity.
long vv(const Rat& x) { return x == 0 ? LONG_MAX : val_p(x, Int(2)); }

Rat abs_rat(const Rat& x) { return x < 0 ? -x : x; }

Int round_div(const Int& a, const Int& b) {
  if (b < 0) return round_div(-a, -b);
  return floor_div(2 * a + b, 2 * b);
}

// Nearest integer to a rational (mpq denominators are positive).
Int round_rat(const Rat& x) { return round_div(rat_num(x), rat_den(x)); }

}  // namespace

// --- Arithmetic over F_2 -------------------------------------------------

F2Mat f2_mul(const F2Mat& x, const F2Mat& y) {
  if (x.n != y.n) throw std::invalid_argument("f2_mul: shape mismatch");
  F2Mat z(x.n);
  for (long i = 0; i < x.n; ++i)
    for (long k = 0; k < x.n; ++k)
      if (x(i, k))
        for (long j = 0; j < x.n; ++j) z(i, j) ^= y(k, j);
  return z;
}

F2Mat f2_reduce(const Mat& g) {
  if (g.rows != g.cols) throw std::invalid_argument("f2_reduce: square matrix required");
  F2Mat out(g.rows);
  for (long i = 0; i < g.rows; ++i)
    for (long j = 0; j < g.cols; ++j) {
      const Rat& x = g(i, j);
      if (!is_p_integral(x, Int(2)))
        throw std::domain_error("f2_reduce: entry is not 2-integral");
      out(i, j) = (x != 0 && val_p(x, Int(2)) == 0) ? 1 : 0;
    }
  return out;
}

F2Mat f2_sp_inverse(const F2Mat& g) {
  long m = g.n / 2;
  F2Mat j(g.n);
  for (long i = 0; i < m; ++i) j(i, m + i) = j(m + i, i) = 1;
  F2Mat gt(g.n);
  for (long r = 0; r < g.n; ++r)
    for (long c = 0; c < g.n; ++c) gt(r, c) = g(c, r);
  return f2_mul(j, f2_mul(gt, j));
}

bool f2_is_symplectic(const F2Mat& g) {
  if (g.n % 2 != 0) return false;
  long m = g.n / 2;
  F2Mat j(g.n);
  for (long i = 0; i < m; ++i) j(i, m + i) = j(m + i, i) = 1;
  F2Mat gt(g.n);
  for (long r = 0; r < g.n; ++r)
    for (long c = 0; c < g.n; ++c) gt(r, c) = g(c, r);
  return f2_mul(g, f2_mul(j, gt)) == j;
}

bool f2_in_borel(const F2Mat& g) {
  long m = g.n / 2;
  for (long i = 0; i < m; ++i)
    for (long j = 0; j < m; ++j) {
      if (g(m + i, j)) return false;
      if (i > j && g(i, j)) return false;
    }
  return true;
}

const std::vector<F2Mat>& borel_f2_list(long m) {
  static std::map<long, std::vector<F2Mat>> cache;
  auto it = cache.find(m);
  if (it != cache.end()) return it->second;

  long na = m * (m - 1) / 2;  // strict upper entries of a
  long ns = m * (m + 1) / 2;  // entries of a symmetric matrix
  std::vector<F2Mat> out;
  out.reserve(1L << (na + ns));
  for (long amask = 0; amask < (1L << na); ++amask) {
    // a: upper unitriangular.
    F2Mat a(m);
    long bit = 0;
    for (long i = 0; i < m; ++i) {
      a(i, i) = 1;
      for (long j = i + 1; j < m; ++j) a(i, j) = (amask >> bit++) & 1;
    }
    // Invert the unitriangular a by back substitution over F_2.
    F2Mat ainv = F2Mat::identity(m);
    for (long col = m - 1; col >= 0; --col)
      for (long i = col - 1; i >= 0; --i)
        if (a(i, col))
          for (long j = 0; j < m; ++j) ainv(i, j) ^= ainv(col, j);
    for (long smask = 0; smask < (1L << ns); ++smask) {
      F2Mat s(m);
      bit = 0;
      for (long i = 0; i < m; ++i)
        for (long j = i; j < m; ++j) s(i, j) = s(j, i) = (smask >> bit++) & 1;
      // b = s * (a^T)^{-1} = s * (a^{-1})^T so that a b^T = a (a^{-1}) s = s.
      F2Mat b(m);
      for (long i = 0; i < m; ++i)
        for (long j = 0; j < m; ++j) {
          unsigned char acc = 0;
          for (long k = 0; k < m; ++k) acc ^= s(i, k) & ainv(j, k);
          b(i, j) = acc;
        }
      F2Mat g(2 * m);
      for (long i = 0; i < m; ++i)
        for (long j = 0; j < m; ++j) {
          g(i, j) = a(i, j);
          g(i, m + j) = b(i, j);
          g(m + i, m + j) = ainv(j, i);  // (a^T)^{-1}
        }
      out.push_back(g);
    }
  }
  return cache.emplace(m, std::move(out)).first->second;
}

// --- Weyl elements -------------------------------------------------------

WeylLabel WeylLabel::trivial(long m) {
  WeylLabel w;
  w.s.resize(m);
  std::iota(w.s.begin(), w.s.end(), 0);
  return w;
}

Mat WeylLabel::mat() const { return weyl_element(static_cast<long>(s.size()), s, S); }

bool WeylLabel::is_trivial() const {
  if (!S.empty()) return false;
  for (long i = 0; i < static_cast<long>(s.size()); ++i)
    if (s[i] != i) return false;
  return true;
}

const std::vector<WeylLabel>& weyl_list(long m) {
  static std::map<long, std::vector<WeylLabel>> cache;
  auto it = cache.find(m);
  if (it != cache.end()) return it->second;

  std::vector<WeylLabel> out;
  std::vector<long> perm(m);
  std::iota(perm.begin(), perm.end(), 0);
  do {
    for (long mask = 0; mask < (1L << m); ++mask) {
      WeylLabel w;
      w.s = perm;
      for (long i = 0; i < m; ++i)
        if ((mask >> i) & 1) w.S.insert(i);
      out.push_back(std::move(w));
    }
  } while (std::next_permutation(perm.begin(), perm.end()));
  return cache.emplace(m, std::move(out)).first->second;
}

WeylAffineElem WeylAffineElem::trivial(long m) {
  WeylAffineElem w;
  w.s.resize(m);
  std::iota(w.s.begin(), w.s.end(), 0);
  w.k.assign(m, 0);
  return w;
}

Mat WeylAffineElem::mat() const {
  long m = static_cast<long>(s.size());
  std::vector<Rat> t(m);
  for (long i = 0; i < m; ++i) {
    Int pw = 1;
    for (long j = 0; j < (k[i] >= 0 ? k[i] : -k[i]); ++j) pw *= 2;
    t[i] = k[i] >= 0 ? Rat(pw) : Rat(1, pw);
  }
  return sp_diag(t) * weyl_element(m, s, S);
}

bool WeylAffineElem::is_trivial() const {
  if (!S.empty()) return false;
  for (long i = 0; i < static_cast<long>(s.size()); ++i)
    if (s[i] != i || k[i] != 0) return false;
  return true;
}

std::vector<Int> WeylAffineElem::d0_part() const {
  std::vector<Int> out;
  for (long e : k) {
    Int pw = 1;
    for (long j = 0; j < (e >= 0 ? e : -e); ++j) pw *= 2;
    out.push_back(pw);
  }
  std::sort(out.begin(), out.end(), std::greater<Int>());
  return out;
}

// --- Bruhat decomposition over F_2 ---------------------------------------

BruhatF2 bruhat_f2(const F2Mat& g) {
  if (g.n % 2 != 0 || !f2_is_symplectic(g))
    throw std::domain_error("bruhat_f2: input is not symplectic over F_2");
  long m = g.n / 2;
  for (const WeylLabel& w : weyl_list(m)) {
    F2Mat winv = f2_sp_inverse(f2_reduce(w.mat()));
    for (const F2Mat& b1 : borel_f2_list(m)) {
      F2Mat b2 = f2_mul(winv, f2_mul(f2_sp_inverse(b1), g));
      if (f2_in_borel(b2)) return {b1, w, b2};
    }
  }
  throw std::logic_error("bruhat_f2: no cell found");  // unreachable
}

Mat borel_lift(const F2Mat& bbar) {
  long m = bbar.n / 2;
  if (!f2_in_borel(bbar) || !f2_is_symplectic(bbar))
    throw std::domain_error("borel_lift: input is not in B(F_2)");
  // a must be unitriangular so that the 0/1 lift is unipotent.
  for (long i = 0; i < m; ++i)
    if (!bbar(i, i)) throw std::domain_error("borel_lift: a block is not unitriangular");
  Mat a(m, m);
  for (long i = 0; i < m; ++i)
    for (long j = 0; j < m; ++j) a(i, j) = Rat(bbar(i, j));
  // s = a b^T is symmetric over F_2; lift s by 0/1 entries and set
  // b = s (a^T)^{-1} over Z, so the result is exactly symplectic.
  F2Mat sbar(m);
  for (long i = 0; i < m; ++i)
    for (long j = 0; j < m; ++j) {
      unsigned char acc = 0;
      for (long k = 0; k < m; ++k) acc ^= bbar(i, k) & bbar(j, m + k);
      sbar(i, j) = acc;
    }
  for (long i = 0; i < m; ++i)
    for (long j = 0; j < m; ++j)
      if (sbar(i, j) != sbar(j, i)) throw std::logic_error("borel_lift: s not symmetric");
  Mat s(m, m);
  for (long i = 0; i < m; ++i)
    for (long j = 0; j < m; ++j) s(i, j) = Rat(sbar(i, j));
  Mat at_inv = inverse(transpose(a));
  Mat b = s * at_inv;
  Mat out(2 * m, 2 * m);
  for (long i = 0; i < m; ++i)
    for (long j = 0; j < m; ++j) {
      out(i, j) = a(i, j);
      out(i, m + j) = b(i, j);
      out(m + i, m + j) = at_inv(i, j);
    }
  if (!is_symplectic(out)) throw std::logic_error("borel_lift: lift is not symplectic");
  if (!(f2_reduce(out) == bbar)) throw std::logic_error("borel_lift: lift does not reduce back");
  return out;
}

// --- Integral Iwahori-Bruhat form ----------------------------------------

SpZIwahori sp_z_iwahori(const Mat& g) {
  BruhatF2 cell = bruhat_f2(f2_reduce(g));
  Mat n = borel_lift(cell.b2);
  Mat i = g * sp_inverse(n) * sp_inverse(cell.omega.mat());
  if (!is_iwahori(i)) throw std::logic_error("sp_z_iwahori: residual factor not in I");
  if (!(i * cell.omega.mat() * n == g)) throw std::logic_error("sp_z_iwahori: product mismatch");
  return {i, cell.omega, n};
}

// --- Elementary divisors --------------------------------------------------

namespace {

// Express target in the rational span of the given rows; throws if the
// system is inconsistent.
Vec solve_coords(const std::vector<Vec>& rows, const Vec& target) {
  long k = static_cast<long>(rows.size());
  long n = static_cast<long>(target.size());
  std::vector<Vec> w(rows);
  std::vector<Vec> t(k, Vec(k, Rat(0)));
  for (long i = 0; i < k; ++i) t[i][i] = 1;
  Vec residual = target;
  Vec coeffs(k, Rat(0));
  std::vector<char> used(k, 0);
  for (long col = 0; col < n; ++col) {
    long piv = -1;
    for (long i = 0; i < k; ++i)
      if (!used[i] && w[i][col] != 0) { piv = i; break; }
    if (piv < 0) continue;
    for (long i = 0; i < k; ++i)
      if (i != piv && w[i][col] != 0) {
        Rat f = w[i][col] / w[piv][col];
        w[i] = w[i] - scaled(w[piv], f);
        t[i] = t[i] - scaled(t[piv], f);
      }
    used[piv] = 1;
    if (residual[col] != 0) {
      Rat f = residual[col] / w[piv][col];
      residual = residual - scaled(w[piv], f);
      for (long j = 0; j < k; ++j) coeffs[j] += f * t[piv][j];
    }
  }
  if (!is_zero_vec(residual)) throw std::logic_error("solve_coords: target not in span");
  return coeffs;
}

bool integral_coords(const std::vector<Vec>& rows, const Vec& target) {
  Vec c = solve_coords(rows, target);
  for (const Rat& x : c)
    if (!is_integer(x)) return false;
  return true;
}

// Z-module basis (column echelon form) of the module generated by the given
// rational row vectors, via per-column Euclidean reduction.
std::vector<Vec> zmodule_basis(std::vector<Vec> rows) {
  std::vector<Vec> out;
  if (rows.empty()) return out;
  long dim = static_cast<long>(rows[0].size());
  for (long col = 0; col < dim; ++col) {
    for (;;) {
      long r = -1;
      for (long i = 0; i < static_cast<long>(rows.size()); ++i)
        if (rows[i][col] != 0 && (r < 0 || abs_rat(rows[i][col]) < abs_rat(rows[r][col]))) r = i;
      if (r < 0) break;
      bool done = true;
      for (long i = 0; i < static_cast<long>(rows.size()); ++i) {
        if (i == r || rows[i][col] == 0) continue;
        Int q = round_rat(rows[i][col] / rows[r][col]);
        rows[i] = rows[i] - scaled(rows[r], Rat(q));
        if (rows[i][col] != 0) done = false;
      }
      if (done) {
        out.push_back(rows[r]);
        rows.erase(rows.begin() + r);
        break;
      }
    }
  }
  for (const Vec& v : rows)
    if (!is_zero_vec(v)) throw std::logic_error("zmodule_basis: nonzero remainder");
  return out;
}

// Integer matrix with tracked row/col transforms realizing the gcd of all
// entries as x^T P y: returns (g, x, y) with g > 0.
struct GcdRealize {
  Int g;
  std::vector<Int> x, y;
};

GcdRealize gcd_realize(std::vector<std::vector<Int>> w) {
  long r = static_cast<long>(w.size());
  long c = static_cast<long>(w[0].size());
  std::vector<std::vector<Int>> u(r, std::vector<Int>(r, 0)), v(c, std::vector<Int>(c, 0));
  for (long i = 0; i < r; ++i) u[i][i] = 1;
  for (long j = 0; j < c; ++j) v[j][j] = 1;
  auto abs_int = [](const Int& x) { return x < 0 ? Int(-x) : x; };
  for (;;) {
    // Move a minimal nonzero entry to (0, 0).
    long bi = -1, bj = -1;
    for (long i = 0; i < r; ++i)
      for (long j = 0; j < c; ++j)
        if (w[i][j] != 0 && (bi < 0 || abs_int(w[i][j]) < abs_int(w[bi][bj]))) { bi = i; bj = j; }
    if (bi < 0) throw std::domain_error("gcd_realize: zero matrix");
    std::swap(w[0], w[bi]);
    std::swap(u[0], u[bi]);
    if (bj != 0)
      for (long i = 0; i < r; ++i) std::swap(w[i][0], w[i][bj]);
    if (bj != 0)
      for (long j2 = 0; j2 < c; ++j2) std::swap(v[j2][0], v[j2][bj]);
    // Clear the first row and column.
    bool clean = true;
    for (long i = 1; i < r; ++i)
      if (w[i][0] != 0) {
        Int q = round_div(w[i][0], w[0][0]);
        for (long j = 0; j < c; ++j) w[i][j] -= q * w[0][j];
        for (long j = 0; j < r; ++j) u[i][j] -= q * u[0][j];
        if (w[i][0] != 0) clean = false;
      }
    for (long j = 1; j < c; ++j)
      if (w[0][j] != 0) {
        Int q = round_div(w[0][j], w[0][0]);
        for (long i = 0; i < r; ++i) w[i][j] -= q * w[i][0];
        for (long i = 0; i < c; ++i) v[i][j] -= q * v[i][0];
        if (w[0][j] != 0) clean = false;
      }
    if (!clean) continue;
    // Enforce divisibility of the remaining block.
    long ndi = -1, ndj = -1;
    for (long i = 1; i < r && ndi < 0; ++i)
      for (long j = 1; j < c; ++j)
        if (w[i][j] % w[0][0] != 0) { ndi = i; ndj = j; break; }
    if (ndi >= 0) {
      for (long j = 0; j < c; ++j) w[0][j] += w[ndi][j];
      for (long j = 0; j < r; ++j) u[0][j] += u[ndi][j];
      continue;
    }
    break;
  }
  GcdRealize out;
  if (w[0][0] < 0)
    for (long j = 0; j < r; ++j) u[0][j] = -u[0][j];
  out.g = abs_int(w[0][0]);
  out.x = u[0];
  out.y.resize(c);
  for (long j = 0; j < c; ++j) out.y[j] = v[j][0];
  return out;
}

// Recursive core: given Z-bases lam (of the standard self-dual lattice in the
// current symplectic subspace, under the ambient pairing) and mv (of the row
// module of A), produce hyperbolic chains xs (primitive in lam-span),
// us = d * w with w in mv-span, and the divisors d.
void divisor_step(std::vector<Vec> lam, std::vector<Vec> mv,
                  std::vector<Vec>& xs, std::vector<Vec>& us, std::vector<Int>& ds) {
  if (lam.empty()) return;
  long nl = static_cast<long>(lam.size());
  long nm = static_cast<long>(mv.size());
  // Pairing matrix and common denominator.
  Int den = 1;
  std::vector<std::vector<Rat>> pr(nl, std::vector<Rat>(nm));
  for (long i = 0; i < nl; ++i)
    for (long j = 0; j < nm; ++j) {
      pr[i][j] = sym_pair(lam[i], mv[j]);
      den = lcm(den, rat_den(pr[i][j]));
    }
  std::vector<std::vector<Int>> pint(nl, std::vector<Int>(nm));
  for (long i = 0; i < nl; ++i)
    for (long j = 0; j < nm; ++j) pint[i][j] = rat_num(pr[i][j]) * (den / rat_den(pr[i][j]));
  GcdRealize gr = gcd_realize(pint);
  Rat c(gr.g, den);
  if (rat_num(c) != 1) throw std::logic_error("symplectic_divisors: pairing gcd exceeds 1");
  Int d1 = rat_den(c);
  Vec xhat(lam[0].size(), Rat(0)), w(lam[0].size(), Rat(0));
  for (long i = 0; i < nl; ++i) xhat = xhat + scaled(lam[i], Rat(gr.x[i]));
  for (long j = 0; j < nm; ++j) w = w + scaled(mv[j], Rat(gr.y[j]));
  if (sym_pair(xhat, w) != c) throw std::logic_error("symplectic_divisors: pairing mismatch");
  Vec u1 = scaled(w, Rat(d1));       // <xhat, u1> = 1
  Vec xm = scaled(xhat, Rat(d1));    // <xm, w> = 1
  if (!integral_coords(lam, u1)) throw std::logic_error("symplectic_divisors: u1 not integral");
  if (!integral_coords(mv, xm)) throw std::logic_error("symplectic_divisors: d1*xhat not in M");
  xs.push_back(xhat);
  us.push_back(u1);
  ds.push_back(d1);
  // Project both modules onto the symplectic complement of (xhat, u1).
  std::vector<Vec> lamp, mvp;
  for (const Vec& vvec : lam)
    lamp.push_back(vvec - scaled(xhat, sym_pair(vvec, u1)) + scaled(u1, sym_pair(vvec, xhat)));
  for (const Vec& vvec : mv)
    mvp.push_back(vvec - scaled(xm, sym_pair(vvec, w)) + scaled(w, sym_pair(vvec, xm)));
  std::vector<Vec> lamb = zmodule_basis(std::move(lamp));
  std::vector<Vec> mvb = zmodule_basis(std::move(mvp));
  if (static_cast<long>(lamb.size()) != nl - 2 || static_cast<long>(mvb.size()) != nm - 2)
    throw std::logic_error("symplectic_divisors: projected rank mismatch");
  divisor_step(std::move(lamb), std::move(mvb), xs, us, ds);
}

}  // namespace

SymplecticDivisors symplectic_divisors(const Mat& A) {
  if (!is_symplectic(A)) throw std::domain_error("symplectic_divisors: input not symplectic");
  long m = A.rows / 2;
  std::vector<Vec> lam, mv;
  Mat id = Mat::identity(2 * m);
  for (long i = 0; i < 2 * m; ++i) {
    lam.push_back(id.row(i));
    mv.push_back(A.row(i));
  }
  std::vector<Vec> xs, us;
  std::vector<Int> ds;
  divisor_step(std::move(lam), std::move(mv), xs, us, ds);
  for (long i = 0; i + 1 < m; ++i)
    if (ds[i] % ds[i + 1] != 0) throw std::logic_error("symplectic_divisors: divisor chain broken");
  std::vector<Vec> vrows(xs);
  vrows.insert(vrows.end(), us.begin(), us.end());
  Mat v = Mat::from_rows(vrows);
  if (!is_symplectic(v) || !all_integer(v))
    throw std::logic_error("symplectic_divisors: v not in Sp(Z)");
  std::vector<Rat> dd(ds.begin(), ds.end());
  Mat d = sp_diag(dd);
  Mat u = A * sp_inverse(v) * sp_inverse(d);
  if (!is_symplectic(u) || !all_integer(u))
    throw std::logic_error("symplectic_divisors: u not in Sp(Z)");
  if (!(u * d * v == A)) throw std::logic_error("symplectic_divisors: product mismatch");
  return {u, d, v};
}

// --- Iwahori decomposition at 2 ------------------------------------------

namespace {

long partner(long m, long i) { return i < m ? i + m : i - m; }

// True when an elementary coefficient at entry position (r, c) may be odd:
// the B block, the upper triangle of the A block, the lower triangle of the
// D block, and the diagonal.
bool position_free(long m, long r, long c) {
  if (r >= m && c < m) return false;                 // C block: even
  if (r < m && c < m && r > c) return false;         // A block below diagonal
  if (r >= m && c >= m && r < c) return false;       // D block above diagonal
  return true;
}

// Symplectic elementary matrix with entry mu at (a, b); for b = partner(a)
// this is a long-root element, otherwise a paired short-root element with
// the companion entry at (partner(b), partner(a)).
Mat sp_elem(long m, long a, long b, const Rat& mu) {
  Mat e = Mat::identity(2 * m);
  e(a, b) += mu;
  if (b != partner(m, a)) {
    bool same_block = (a < m) == (b < m);
    e(partner(m, b), partner(m, a)) += same_block ? -mu : mu;
  }
  if (!is_symplectic(e)) throw std::logic_error("sp_elem: not symplectic");
  return e;
}

void check_legal(long m, long a, long b, const Rat& mu) {
  if (!is_p_integral(mu, Int(2)))
    throw std::logic_error("iwahori_decompose: non-2-integral coefficient");
  long need_even = 0;
  if (!position_free(m, a, b)) need_even = 1;
  if (b != partner(m, a) && !position_free(m, partner(m, b), partner(m, a))) need_even = 1;
  if (need_even && (mu != 0 && val_p(mu, Int(2)) < 1))
    throw std::logic_error("iwahori_decompose: odd coefficient at even-only position");
}

struct MonoState {
  long m;
  Mat x, i1, i2;

  // Row operation row_a += mu * row_b (plus the symplectic companion).
  void left_op(long a, long b, const Rat& mu) {
    if (mu == 0) return;
    check_legal(m, a, b, mu);
    x = sp_elem(m, a, b, mu) * x;
    i1 = i1 * sp_elem(m, a, b, -mu);
  }
  // Column operation col_b += mu * col_a (plus the symplectic companion).
  void right_op(long a, long b, const Rat& mu) {
    if (mu == 0) return;
    check_legal(m, a, b, mu);
    x = x * sp_elem(m, a, b, mu);
    i2 = sp_elem(m, a, b, -mu) * i2;
  }
};

// Row priority for pivot placement: starred rows dominate unstarred ones,
// lower index dominates among starred rows, higher index among unstarred.
long prio_row(long m, long r) { return r >= m ? 3 * m - 1 - r : r; }
// Column priority: unstarred columns dominate, lower index dominates among
// unstarred columns, higher index among starred ones.
long prio_col(long m, long c) { return c < m ? 2 * m - 1 - c : c - m; }

// Deterministic factorization A = i1 * (monomial normal form) * i2 with
// i1, i2 in I, by valuation-minimal pivoting restricted to I-legal
// elementary operations.
IwahoriFactorization monomialize(const Mat& A) {
  long m = A.rows / 2;
  MonoState st{m, A, Mat::identity(2 * m), Mat::identity(2 * m)};
  std::vector<char> row_active(2 * m, 1), col_active(2 * m, 1);

  for (long phase = 0; phase < m; ++phase) {
    // Global minimal valuation over the active block.
    long minval = LONG_MAX;
    long r = -1, c = -1;
    for (long i = 0; i < 2 * m; ++i)
      for (long j = 0; j < 2 * m; ++j)
        if (row_active[i] && col_active[j] && vv(st.x(i, j)) < minval) {
          minval = vv(st.x(i, j));
          r = i;
          c = j;
        }
    if (r < 0) throw std::logic_error("iwahori_decompose: active block is zero");
    // Corner walk: move the pivot to a position dominating every other
    // minimal-valuation entry in its row and column.
    for (;;) {
      bool moved = false;
      for (long i = 0; i < 2 * m; ++i)
        if (row_active[i] && i != r && i != partner(m, r) && vv(st.x(i, c)) == minval &&
            prio_row(m, i) > prio_row(m, r)) {
          r = i;
          moved = true;
        }
      for (long j = 0; j < 2 * m; ++j)
        if (col_active[j] && j != c && j != partner(m, c) && vv(st.x(r, j)) == minval &&
            prio_col(m, j) > prio_col(m, c)) {
          c = j;
          moved = true;
        }
      if (!moved) break;
    }
    long rbar = partner(m, r), cbar = partner(m, c);
    // Clear the pivot column, then the pivot row; the partner line is
    // zeroed automatically by symplecticity.
    for (long i = 0; i < 2 * m; ++i)
      if (row_active[i] && i != r && i != rbar && st.x(i, c) != 0)
        st.left_op(i, r, -st.x(i, c) / st.x(r, c));
    for (long j = 0; j < 2 * m; ++j)
      if (col_active[j] && j != c && j != cbar && st.x(r, j) != 0)
        st.right_op(c, j, -st.x(r, j) / st.x(r, c));
    for (long i = 0; i < 2 * m; ++i)
      if (row_active[i] && i != r && i != rbar && st.x(i, cbar) != 0)
        throw std::logic_error("iwahori_decompose: partner column not forced to zero");
    for (long j = 0; j < 2 * m; ++j)
      if (col_active[j] && j != c && j != cbar && st.x(rbar, j) != 0)
        throw std::logic_error("iwahori_decompose: partner row not forced to zero");
    // Finish the isolated 2 x 2 block on rows {r, rbar} x cols {c, cbar}.
    long rx = r < m ? r : rbar, ry = rx + m;  // unstarred / starred row
    long cx = c < m ? c : cbar, cy = cx + m;  // unstarred / starred column
    long v11 = vv(st.x(rx, cx)), v12 = vv(st.x(rx, cy));
    long v21 = vv(st.x(ry, cx)), v22 = vv(st.x(ry, cy));
    if (v21 <= std::min({v11, v12, v22})) {
      st.left_op(rx, ry, -st.x(rx, cx) / st.x(ry, cx));
      st.right_op(cx, cy, -st.x(ry, cy) / st.x(ry, cx));
    } else if (v11 <= std::min(v12, v22)) {
      st.left_op(ry, rx, -st.x(ry, cx) / st.x(rx, cx));
      st.right_op(cx, cy, -st.x(rx, cy) / st.x(rx, cx));
    } else if (v22 <= v12) {
      st.left_op(rx, ry, -st.x(rx, cy) / st.x(ry, cy));
      st.right_op(cy, cx, -st.x(ry, cx) / st.x(ry, cy));
    } else {
      st.left_op(ry, rx, -st.x(ry, cy) / st.x(rx, cy));
      st.right_op(cy, cx, -st.x(rx, cx) / st.x(rx, cy));
    }
    row_active[r] = row_active[rbar] = 0;
    col_active[c] = col_active[cbar] = 0;
  }

  // st.x is now monomial; peel off the odd unit parts into i1 and the sign
  // diagonal into i2, leaving sp_diag(2^k) * weyl_element(s, S).
  Mat mhat(2 * m, 2 * m);
  for (long i = 0; i < 2 * m; ++i) {
    long nz = -1;
    for (long j = 0; j < 2 * m; ++j)
      if (st.x(i, j) != 0) {
        if (nz >= 0) throw std::logic_error("iwahori_decompose: result not monomial");
        nz = j;
      }
    if (nz < 0) throw std::logic_error("iwahori_decompose: zero row in monomial form");
    long e = val_p(st.x(i, nz), Int(2));
    Int pw = 1;
    for (long t = 0; t < (e >= 0 ? e : -e); ++t) pw *= 2;
    Rat mag = e >= 0 ? Rat(pw) : Rat(1, pw);
    mhat(i, nz) = st.x(i, nz) < 0 ? -mag : mag;
  }
  Mat unit = st.x * sp_inverse(mhat);
  if (!is_iwahori(unit)) throw std::logic_error("iwahori_decompose: unit factor not in I");
  st.i1 = st.i1 * unit;

  WeylAffineElem w;
  w.s.assign(m, -1);
  w.k.assign(m, 0);
  for (long i = 0; i < m; ++i) {
    for (long j = 0; j < 2 * m; ++j)
      if (mhat(i, j) != 0) {
        if (j < m) {
          w.s[i] = j;
        } else {
          w.s[i] = j - m;
          w.S.insert(j - m);
        }
        w.k[i] = val_p(mhat(i, j), Int(2));
      }
  }
  Mat delta = sp_inverse(w.mat()) * mhat;
  for (long i = 0; i < 2 * m; ++i)
    for (long j = 0; j < 2 * m; ++j)
      if (i == j ? (delta(i, j) != 1 && delta(i, j) != -1) : delta(i, j) != 0)
        throw std::logic_error("iwahori_decompose: sign normalization failed");
  st.i2 = delta * st.i2;

  IwahoriFactorization out{st.i1, w, st.i2, false};
  out.certificate = is_iwahori(out.i1) && is_iwahori(out.i2) &&
                    (out.i1 * w.mat() * out.i2 == A);
  if (!out.certificate) throw std::logic_error("iwahori_decompose: certificate failed");
  return out;
}

}  // namespace

IwahoriFactorization iwahori_decompose(const Mat& A) {
  if (A.rows != A.cols || A.rows % 2 != 0)
    throw std::invalid_argument("iwahori_decompose: even square matrix required");
  long m = A.rows / 2;
  if (m > 3) throw std::invalid_argument("iwahori_decompose: rank m <= 3 required");
  if (!is_symplectic(A)) throw std::domain_error("iwahori_decompose: input not symplectic");
  if (is_iwahori(A)) {
    IwahoriFactorization out{A, WeylAffineElem::trivial(m), Mat::identity(2 * m), true};
    return out;
  }
  return monomialize(A);
}

ReduceWND reduce_wnd(const WeylLabel& omega, const Mat& n, const Mat& d) {
  long m = static_cast<long>(omega.s.size());
  if (n.rows != 2 * m || d.rows != 2 * m)
    throw std::invalid_argument("reduce_wnd: shape mismatch");
  if (!is_symplectic(n)) throw std::domain_error("reduce_wnd: n must be symplectic");
  for (long i = 0; i < m; ++i) {
    if (n(i, i) != 1) throw std::domain_error("reduce_wnd: n must be unipotent");
    for (long j = 0; j < m; ++j) {
      if (n(m + i, j) != 0) throw std::domain_error("reduce_wnd: n must have zero lower-left block");
      if (j < i && n(i, j) != 0)
        throw std::domain_error("reduce_wnd: a block of n must be upper triangular");
    }
  }
  for (long i = 0; i < 2 * m; ++i)
    for (long j = 0; j < 2 * m; ++j)
      if (i != j && d(i, j) != 0) throw std::domain_error("reduce_wnd: d must be diagonal");
  for (long i = 0; i < 2 * m; ++i) {
    const Rat& t = d(i, i);
    if (t <= 0) throw std::domain_error("reduce_wnd: d must have positive entries");
    long e = val_p(t, Int(2));
    Int pw = 1;
    for (long j = 0; j < (e >= 0 ? e : -e); ++j) pw *= 2;
    if (t != (e >= 0 ? Rat(pw) : Rat(1, pw)))
      throw std::domain_error("reduce_wnd: d must have 2-power entries");
  }
  Mat A = omega.mat() * n * d;
  IwahoriFactorization f = monomialize(A);
  std::vector<Rat> dp(m);
  for (long i = 0; i < m; ++i) {
    Int pw = 1;
    for (long t = 0; t < (f.w.k[i] >= 0 ? f.w.k[i] : -f.w.k[i]); ++t) pw *= 2;
    dp[i] = f.w.k[i] >= 0 ? Rat(pw) : Rat(1, pw);
  }
  WeylLabel wl;
  wl.s = f.w.s;
  wl.S = f.w.S;
  ReduceWND out{f.i1, sp_diag(dp), wl, f.i2};
  if (!(out.i * out.dprime * wl.mat() * out.iprime == A))
    throw std::logic_error("reduce_wnd: product mismatch");
  return out;
}

}  // namespace lw
