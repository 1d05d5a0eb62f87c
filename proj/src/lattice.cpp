#include "lw/lattice.hpp"

#include "lw/symplectic.hpp"

#include <algorithm>
#include <stdexcept>

namespace lw {

namespace {

Rat rat_pow(const Rat& base, long k) {
  Rat r = 1;
  for (long i = 0; i < (k >= 0 ? k : -k); ++i) r *= base;
  return k >= 0 ? r : Rat(1) / r;
}

// 2-adic valuation of a nonzero rational.
long nu2(const Rat& x) { return val_p(x, Int(2)); }

void check_same_ring(const Lattice& a, const Lattice& b) {
  if (a.mode != b.mode || (a.mode == Mode::PADIC && a.p != b.p))
    throw std::invalid_argument("lattice: mixed coefficient rings");
}

}  // namespace

bool ring_elem(const Rat& x, Mode mode, const Int& p) {
  return mode == Mode::PADIC ? is_p_integral(x, p) : is_integer(x);
}

Lattice lattice_from_rows(Mode mode, const Int& p, const std::vector<Vec>& rows) {
  Lattice L;
  L.mode = mode;
  L.p = p;
  L.basis = Mat::from_rows(rows);
  if (determinant(L.basis) == 0)
    throw std::invalid_argument("lattice_from_rows: rank-deficient basis");
  return L;
}

static bool rows_in_lattice(const Mat& rows, const Lattice& L) {
  Mat m = rows * inverse(L.basis);
  for (const Rat& x : m.a)
    if (!ring_elem(x, L.mode, L.p)) return false;
  return true;
}

bool lattice_contains(const Lattice& outer, const Lattice& inner) {
  check_same_ring(outer, inner);
  return rows_in_lattice(inner.basis, outer);
}

bool lattice_eq(const Lattice& a, const Lattice& b) {
  return lattice_contains(a, b) && lattice_contains(b, a);
}

bool vector_in(const Lattice& L, const Vec& w) {
  Vec u = w * inverse(L.basis);
  for (const Rat& x : u)
    if (!ring_elem(x, L.mode, L.p)) return false;
  return true;
}

Lattice lattice_act(const Lattice& L, const Mat& g) {
  Lattice out = L;
  out.basis = L.basis * g;
  if (determinant(out.basis) == 0)
    throw std::invalid_argument("lattice_act: singular image");
  return out;
}

Lattice lattice_scale(const Lattice& L, const Rat& c) {
  if (c == 0) throw std::invalid_argument("lattice_scale: zero scalar");
  Lattice out = L;
  out.basis = scaled(L.basis, c);
  return out;
}

Lattice lattice_sum(const Lattice& a, const Lattice& b) {
  check_same_ring(a, b);
  long n = a.dim();
  // Stack both bases and echelonize with R-invertible row operations; the
  // nonzero rows left over span the module generated by all 2n rows.
  std::vector<Vec> rows;
  for (long i = 0; i < n; ++i) rows.push_back(a.basis.row(i));
  for (long i = 0; i < n; ++i) rows.push_back(b.basis.row(i));
  long r = 0;
  for (long j = 0; j < n && r < static_cast<long>(rows.size()); ++j) {
    if (a.mode == Mode::PADIC) {
      long piv = -1, best = 0;
      for (long i = r; i < static_cast<long>(rows.size()); ++i) {
        if (rows[i][j] == 0) continue;
        long v = val_p(rows[i][j], a.p);
        if (piv < 0 || v < best) { piv = i; best = v; }
      }
      if (piv < 0) continue;
      std::swap(rows[r], rows[piv]);
      for (long i = r + 1; i < static_cast<long>(rows.size()); ++i) {
        if (rows[i][j] == 0) continue;
        Rat c = rows[i][j] / rows[r][j];  // p-integral by pivot choice
        for (long k = 0; k < n; ++k) rows[i][k] -= c * rows[r][k];
      }
    } else {
      // Integer column reduction by repeated division (all entries are
      // rational with a common denominator per column step; use the entry
      // of least nonzero 2-adic-free "size" via Euclid on numerators after
      // clearing denominators).
      Int den = 1;
      for (long i = r; i < static_cast<long>(rows.size()); ++i)
        den = boost::multiprecision::lcm(den, rat_den(rows[i][j]));
      auto ival = [&](long i) { return rat_num(rows[i][j] * Rat(den)); };
      while (true) {
        long piv = -1;
        for (long i = r; i < static_cast<long>(rows.size()); ++i) {
          if (rows[i][j] == 0) continue;
          if (piv < 0 || boost::multiprecision::abs(ival(i)) < boost::multiprecision::abs(ival(piv)))
            piv = i;
        }
        if (piv < 0) break;
        std::swap(rows[r], rows[piv]);
        bool clean = true;
        for (long i = r + 1; i < static_cast<long>(rows.size()); ++i) {
          if (rows[i][j] == 0) continue;
          Rat c = Rat(floor_div(ival(i), ival(r)));
          for (long k = 0; k < n; ++k) rows[i][k] -= c * rows[r][k];
          if (rows[i][j] != 0) clean = false;
        }
        if (clean) break;
      }
      if (rows[r][j] == 0) continue;
    }
    ++r;
  }
  std::vector<Vec> out(rows.begin(), rows.begin() + r);
  if (r != n) throw std::logic_error("lattice_sum: rank defect");
  Lattice s = lattice_from_rows(a.mode, a.p, out);
  if (!lattice_contains(s, a) || !lattice_contains(s, b))
    throw std::logic_error("lattice_sum: reduction lost generators");
  return s;
}

Lattice dual_lattice(const Lattice& L, const CharConfig& cfg) {
  // w lies in L* iff <w, b_i> = w J b_i^T lands in the triviality module of
  // psi for every basis row b_i: p^e R in the finite mode, Z in the real
  // mode (kappa = +-1). Hence L* = c (J B^T)^{-1} taken as rows.
  long m = L.m();
  Rat c = 1;
  if (cfg.mode == Mode::PADIC) c = rat_pow(Rat(cfg.p), cfg.e);
  Lattice out = L;
  out.basis = scaled(inverse(gram_J(m) * transpose(L.basis)), c);
  return out;
}

Lattice standard_L1(long m, const CharConfig& cfg) {
  Lattice L;
  L.mode = cfg.mode;
  L.p = cfg.p;
  L.basis = Mat::identity(2 * m);
  if (cfg.mode == Mode::PADIC) {
    long ax = static_cast<long>(floor_div(Int(cfg.e + 1), 2));   // X exponent
    long axs = static_cast<long>(floor_div(Int(cfg.e), 2));      // X* exponent
    for (long i = 0; i < m; ++i) {
      L.basis(i, i) = rat_pow(Rat(cfg.p), ax);
      L.basis(m + i, m + i) = rat_pow(Rat(cfg.p), axs);
    }
  }
  return L;
}

Lattice special_sublattice(const Mat& d_L, const CharConfig& cfg) {
  long m = d_L.rows / 2;
  similitude(d_L);  // throws if d_L is not a similitude
  for (long i = 0; i < m; ++i)
    for (long j = 0; j < m; ++j)
      if (d_L(i, m + j) != 0 || d_L(m + i, j) != 0)
        throw std::invalid_argument("special_sublattice: d_L not block-diagonal");
  Lattice L1 = standard_L1(m, cfg);
  Lattice L = lattice_act(L1, d_L);
  if (!lattice_contains(L1, L))
    throw std::invalid_argument("special_sublattice: L_1 d_L not contained in L_1");
  return L;
}

Mat lattice_intersect_half(const Lattice& L, bool star) {
  // Row-reduce the basis on the complementary coordinate block with
  // R-invertible row operations; the rows left with a vanishing block span
  // the intersection.
  long m = L.m(), n = 2 * m;
  Mat b = L.basis;
  long kill0 = star ? 0 : m;  // columns to clear
  long r = 0;                 // next pivot row
  for (long jj = 0; jj < m; ++jj) {
    long j = kill0 + jj;
    if (L.mode == Mode::PADIC) {
      long piv = -1;
      long best = 0;
      for (long i = r; i < n; ++i) {
        if (b(i, j) == 0) continue;
        long v = val_p(b(i, j), L.p);
        if (piv < 0 || v < best) { piv = i; best = v; }
      }
      if (piv < 0) continue;
      for (long c = 0; c < n; ++c) std::swap(b(piv, c), b(r, c));
      for (long i = r + 1; i < n; ++i) {
        if (b(i, j) == 0) continue;
        Rat f = b(i, j) / b(r, j);
        for (long c = 0; c < n; ++c) b(i, c) -= f * b(r, c);
      }
    } else {
      // Integer column clearing by the Euclidean algorithm.
      for (;;) {
        long piv = -1;
        Int best = 0;
        for (long i = r; i < n; ++i) {
          if (b(i, j) == 0) continue;
          Int v = abs(rat_num(b(i, j)));
          if (piv < 0 || v < best) { piv = i; best = v; }
        }
        if (piv < 0) break;
        for (long c = 0; c < n; ++c) std::swap(b(piv, c), b(r, c));
        bool clean = true;
        for (long i = r + 1; i < n; ++i) {
          if (b(i, j) == 0) continue;
          Int q = floor_div(rat_num(b(i, j)), rat_num(b(r, j)));
          for (long c = 0; c < n; ++c) b(i, c) -= Rat(q) * b(r, c);
          if (b(i, j) != 0) clean = false;
        }
        if (clean) break;
      }
      if (b(r, j) == 0) continue;
    }
    ++r;
  }
  if (n - r != m)
    throw std::domain_error("lattice_intersect_half: unexpected intersection rank");
  Mat out(m, n);
  for (long i = 0; i < m; ++i)
    for (long c = 0; c < n; ++c) out(i, c) = b(r + i, c);
  return out;
}

Lattice lattice_prime(const Lattice& L, const CharConfig& cfg) {
  Mat hx = lattice_intersect_half(L, false);
  Mat hxs = lattice_intersect_half(L, true);
  bool two_on_x = (cfg.mode == Mode::REAL) || (cfg.e % 2 == 0);
  Rat cx = two_on_x ? Rat(2) : Rat(1, 2);
  Rat cxs = two_on_x ? Rat(1, 2) : Rat(2);
  Lattice out = L;
  out.basis = Mat(2 * L.m(), 2 * L.m());
  for (long i = 0; i < L.m(); ++i)
    for (long c = 0; c < 2 * L.m(); ++c) {
      out.basis(i, c) = cx * hx(i, c);
      out.basis(L.m() + i, c) = cxs * hxs(i, c);
    }
  // The construction assumes L = (L cap X) (+) (L cap X*).
  Lattice split = L;
  split.basis = Mat(2 * L.m(), 2 * L.m());
  for (long i = 0; i < L.m(); ++i)
    for (long c = 0; c < 2 * L.m(); ++c) {
      split.basis(i, c) = hx(i, c);
      split.basis(L.m() + i, c) = hxs(i, c);
    }
  if (!lattice_eq(split, L))
    throw std::invalid_argument("lattice_prime: lattice is not split");
  return out;
}

// Elementary-divisor reduction of M (the basis of L_small in L_big
// coordinates) with row operations acting freely and every column operation
// mirrored on the adapted basis: replacing M by M F forces the adapted
// basis A to become F^{-1} A so that the row span of M A is unchanged.
QuotientData quotient_data(const Lattice& big, const Lattice& small,
                           const Int& index_cap) {
  check_same_ring(big, small);
  long n = big.dim();
  Mat m = small.basis * inverse(big.basis);
  for (const Rat& x : m.a)
    if (!ring_elem(x, big.mode, big.p))
      throw std::invalid_argument("quotient_data: L_small not contained in L_big");
  Mat adapted = big.basis;

  auto col_axpy = [&](long dst, long src, const Rat& f) {
    // column_dst -= f * column_src; adapted row_src += f * adapted row_dst
    for (long i = 0; i < n; ++i) m(i, dst) -= f * m(i, src);
    for (long c = 0; c < n; ++c) adapted(src, c) += f * adapted(dst, c);
  };
  auto col_swap = [&](long i, long j) {
    for (long r = 0; r < n; ++r) std::swap(m(r, i), m(r, j));
    for (long c = 0; c < n; ++c) std::swap(adapted(i, c), adapted(j, c));
  };
  auto col_scale = [&](long j, const Rat& u) {
    for (long r = 0; r < n; ++r) m(r, j) *= u;
    for (long c = 0; c < n; ++c) adapted(j, c) /= u;
  };
  auto row_swap = [&](long i, long j) {
    for (long c = 0; c < n; ++c) std::swap(m(i, c), m(j, c));
  };
  auto row_axpy = [&](long dst, long src, const Rat& f) {
    for (long c = 0; c < n; ++c) m(dst, c) -= f * m(src, c);
  };

  std::vector<Int> divisors(n, 1);
  for (long k = 0; k < n; ++k) {
    if (big.mode == Mode::PADIC) {
      long pi = -1, pj = -1, best = 0;
      for (long i = k; i < n; ++i)
        for (long j = k; j < n; ++j) {
          if (m(i, j) == 0) continue;
          long v = val_p(m(i, j), big.p);
          if (pi < 0 || v < best) { pi = i; pj = j; best = v; }
        }
      if (pi < 0) throw std::domain_error("quotient_data: singular basis matrix");
      if (pi != k) row_swap(pi, k);
      if (pj != k) col_swap(pj, k);
      for (long i = k + 1; i < n; ++i)
        if (m(i, k) != 0) row_axpy(i, k, m(i, k) / m(k, k));
      for (long j = k + 1; j < n; ++j)
        if (m(k, j) != 0) col_axpy(j, k, m(k, j) / m(k, k));
      Int pk = 1;
      for (long i = 0; i < best; ++i) pk *= big.p;
      col_scale(k, Rat(pk) / m(k, k));  // strip the unit part
      divisors[k] = pk;
    } else {
      for (;;) {
        long pi = -1, pj = -1;
        Int best = 0;
        for (long i = k; i < n; ++i)
          for (long j = k; j < n; ++j) {
            if (m(i, j) == 0) continue;
            Int v = abs(rat_num(m(i, j)));
            if (pi < 0 || v < best) { pi = i; pj = j; best = v; }
          }
        if (pi < 0) throw std::domain_error("quotient_data: singular basis matrix");
        if (pi != k) row_swap(pi, k);
        if (pj != k) col_swap(pj, k);
        bool clean = true;
        for (long i = k + 1; i < n; ++i) {
          if (m(i, k) == 0) continue;
          row_axpy(i, k, Rat(floor_div(rat_num(m(i, k)), rat_num(m(k, k)))));
          if (m(i, k) != 0) clean = false;
        }
        for (long j = k + 1; j < n; ++j) {
          if (m(k, j) == 0) continue;
          col_axpy(j, k, Rat(floor_div(rat_num(m(k, j)), rat_num(m(k, k)))));
          if (m(k, j) != 0) clean = false;
        }
        if (!clean) continue;
        // Enforce the divisibility chain: fold in any entry the pivot
        // misses, then redo the reduction at this pivot.
        bool chain_ok = true;
        for (long i = k + 1; i < n && chain_ok; ++i)
          for (long j = k + 1; j < n && chain_ok; ++j)
            if (rat_num(m(i, j)) % rat_num(m(k, k)) != 0) {
              for (long c = 0; c < n; ++c) m(k, c) += m(i, c);
              chain_ok = false;
            }
        if (chain_ok) break;
      }
      if (m(k, k) < 0) col_scale(k, Rat(-1));
      divisors[k] = rat_num(m(k, k));
    }
  }

  QuotientData q;
  q.big = big;
  q.small = small;
  q.adapted = adapted;
  q.adapted_inv = inverse(adapted);
  q.divisors = divisors;
  q.index = 1;
  for (const Int& d : divisors) q.index *= d;
  if (index_cap > 0 && q.index > index_cap)
    throw std::domain_error("quotient_data: index " + q.index.convert_to<std::string>() +
                            " exceeds the enumeration cap");
  return q;
}

Int lattice_index(const Lattice& big, const Lattice& small) {
  return quotient_data(big, small, Int(0)).index;
}

std::vector<Int> QuotientData::digits_of(const Vec& w) const {
  Vec u = w * adapted_inv;
  long n = static_cast<long>(u.size());
  std::vector<Int> digits(n, 0);
  for (long i = 0; i < n; ++i) {
    if (!ring_elem(u[i], big.mode, big.p))
      throw std::invalid_argument("digits_of: vector not in the ambient lattice");
    if (divisors[i] == 1) continue;
    Int num = rat_num(u[i]), den = rat_den(u[i]);
    digits[i] = mod_pos(num * mod_inverse(den, divisors[i]), divisors[i]);
  }
  return digits;
}

Vec QuotientData::rep_of(const std::vector<Int>& digits) const {
  long n = adapted.rows;
  Vec w(n, Rat(0));
  for (long i = 0; i < n; ++i) {
    if (digits[i] == 0) continue;
    for (long c = 0; c < n; ++c) w[c] += Rat(digits[i]) * adapted(i, c);
  }
  return w;
}

long QuotientData::index_of(const std::vector<Int>& digits) const {
  Int idx = 0;
  for (std::size_t i = 0; i < digits.size(); ++i) idx = idx * divisors[i] + digits[i];
  return idx.convert_to<long>();
}

std::vector<Int> QuotientData::digits_at(long idx) const {
  long n = adapted.rows;
  std::vector<Int> digits(n, 0);
  Int rem = idx;
  for (long i = n - 1; i >= 0; --i) {
    digits[i] = rem % divisors[i];
    rem /= divisors[i];
  }
  return digits;
}

Vec QuotientData::canonical_rep(const Vec& w) const { return rep_of(digits_of(w)); }

long QuotientData::canonical_index(const Vec& w) const { return index_of(digits_of(w)); }

CosetList quotient_enum(const Lattice& big, const Lattice& small,
                        const Int& index_cap) {
  QuotientData q = quotient_data(big, small, index_cap);
  CosetList out;
  out.modulus = small;
  long total = q.index.convert_to<long>();
  out.reps.reserve(total);
  for (long i = 0; i < total; ++i) out.reps.push_back(q.rep_of(q.digits_at(i)));
  return out;
}

ModSplit reduce_mod(const Lattice& L, const Vec& w) {
  Vec u = w * inverse(L.basis);
  long n = L.dim();
  Vec frac(n);
  for (long i = 0; i < n; ++i)
    frac[i] = (L.mode == Mode::PADIC) ? p_fractional_part(u[i], L.p)
                                      : real_fractional_part(u[i]);
  ModSplit s;
  s.rep = frac * L.basis;
  s.in_lattice = w - s.rep;
  return s;
}

std::optional<WeylAffineShape> parse_weyl_affine(const Mat& g) {
  long n = g.rows, m = n / 2;
  if (g.cols != n || n % 2 != 0) return std::nullopt;
  WeylAffineShape sh;
  sh.s.assign(m, -1);
  sh.d.assign(m, Rat(0));
  auto single_nonzero = [&](long row, long& col, Rat& val) -> bool {
    col = -1;
    for (long j = 0; j < n; ++j)
      if (g(row, j) != 0) {
        if (col >= 0) return false;
        col = j;
        val = g(row, j);
      }
    return col >= 0;
  };
  for (long i = 0; i < m; ++i) {
    long c;
    Rat v;
    if (!single_nonzero(i, c, v)) return std::nullopt;
    if (c < m) {
      sh.s[i] = c;
      sh.d[c] = v;
    } else {
      sh.s[i] = c - m;
      sh.S.insert(c - m);
      sh.d[c - m] = -v;
    }
  }
  std::vector<bool> seen(m, false);
  for (long i = 0; i < m; ++i) {
    if (sh.s[i] < 0 || seen[sh.s[i]] || sh.d[sh.s[i]] == 0) return std::nullopt;
    seen[sh.s[i]] = true;
  }
  for (long i = 0; i < m; ++i) {
    long c;
    Rat v;
    long si = sh.s[i];
    if (!single_nonzero(m + i, c, v)) return std::nullopt;
    bool flip = sh.S.count(si) > 0;
    long expect_col = flip ? si : m + si;
    if (c != expect_col || v != Rat(1) / sh.d[si]) return std::nullopt;
  }
  return sh;
}

ExceptionalData exceptional_data(const Mat& g, const Mat& d_L,
                                 const CharConfig& cfg) {
  long m = g.rows / 2;
  Mat gprime = d_L * g * inverse(d_L);
  auto sh = parse_weyl_affine(gprime);
  if (!sh)
    throw std::invalid_argument("exceptional_data: conjugate not monomial of Weyl-affine shape");
  Rat t = similitude(d_L);

  // Per-coordinate exceptional window on (n_d, n_t); only flipped
  // coordinates with even similitude factor can be exceptional, and the
  // window selects the sign of the diag(2, 1/2) correction.
  auto window = [&](long j) -> int {  // +1 -> 2, -1 -> 2^{-1}, 0 -> regular
    if (!sh->S.count(j)) return 0;
    if (cfg.mode == Mode::PADIC && cfg.p != 2) return 0;
    long nt = nu2(t);
    if (nt < 1) return 0;
    long nd = nu2(sh->d[j]);
    if (cfg.mode == Mode::REAL || cfg.e % 2 == 0) {
      if (nd - nt == -1) return 1;
      if (nd + nt == 1) return -1;
    } else {
      if (nd - nt == -2) return 1;
      if (nd + nt == 0) return -1;
    }
    return 0;
  };

  ExceptionalData out;
  Mat dpp = Mat::identity(2 * m);
  for (long i = 0; i < m; ++i) {
    int w = window(sh->s[i]);
    if (w == 0) continue;
    out.I.insert(i);
    dpp(i, i) = w > 0 ? Rat(2) : Rat(1, 2);
    dpp(m + i, m + i) = w > 0 ? Rat(1, 2) : Rat(2);
  }
  if (d_L * dpp != dpp * d_L)
    throw std::invalid_argument("exceptional_data: d_L does not commute with d''");
  out.dpp = dpp;
  out.Lpp = lattice_act(special_sublattice(d_L, cfg), dpp);
  return out;
}

bool is_iwahori(const Mat& g) {
  long m = g.rows / 2;
  for (const Rat& x : g.a)
    if (!is_p_integral(x, Int(2))) return false;
  auto bit = [&](long i, long j) { return mod_pos(rat_num(g(i, j)) * rat_den(g(i, j)), 2); };
  for (long i = 0; i < m; ++i)
    for (long j = 0; j < m; ++j) {
      if (bit(m + i, j) != 0) return false;            // c block vanishes mod 2
      if (i > j && bit(i, j) != 0) return false;       // alpha upper-triangular
    }
  return true;
}

bool subgroup_membership(const Mat& g, const Lattice& L, const Lattice& L1,
                         SubgroupKind which, const CharConfig& cfg) {
  switch (which) {
    case SubgroupKind::J1: {
      Lattice Ld = dual_lattice(L, cfg);
      Mat t = Ld.basis * g - Ld.basis;
      return rows_in_lattice(t, L);
    }
    case SubgroupKind::Ha1: {
      Lattice Ld = dual_lattice(L, cfg);
      Mat t = Ld.basis * g - Ld.basis;
      return rows_in_lattice(t, L1);
    }
    case SubgroupKind::K:
      return rows_in_lattice(L1.basis * g, L1);
    case SubgroupKind::Iwahori:
      return is_iwahori(g);
  }
  return false;
}

}  // namespace lw
