#include "lw/small_model.hpp"

#include "lw/symplectic.hpp"

#include <stdexcept>

namespace lw {

SmallOp SmallOp::identity(long n) {
  SmallOp a;
  a.n = n;
  a.mono = true;
  a.col.resize(n);
  a.ph.assign(n, Cyc::one());
  for (long i = 0; i < n; ++i) a.col[i] = i;
  return a;
}

SmallOp SmallOp::zero(long n) {
  SmallOp a;
  a.n = n;
  a.mono = false;
  a.dense.assign(static_cast<std::size_t>(n) * n, Cyc::zero());
  return a;
}

SmallOp SmallOp::monomial(std::vector<long> col, std::vector<Cyc> ph) {
  SmallOp a;
  a.n = static_cast<long>(col.size());
  a.mono = true;
  a.col = std::move(col);
  a.ph = std::move(ph);
  for (const Cyc& c : a.ph)
    if (c.is_zero()) throw std::invalid_argument("SmallOp::monomial: zero phase");
  return a;
}

SmallOp SmallOp::from_dense(long n, std::vector<Cyc> entries) {
  SmallOp a;
  a.n = n;
  a.mono = false;
  a.dense = std::move(entries);
  if (static_cast<long>(a.dense.size()) != n * n)
    throw std::invalid_argument("SmallOp::from_dense: size mismatch");
  return a;
}

Cyc SmallOp::at(long i, long j) const {
  if (mono) return col[i] == j ? ph[i] : Cyc::zero();
  return dense[static_cast<std::size_t>(i) * n + j];
}

SmallOp SmallOp::densified() const {
  if (!mono) return *this;
  SmallOp a = zero(n);
  for (long i = 0; i < n; ++i) a.dense[static_cast<std::size_t>(i) * n + col[i]] = ph[i];
  return a;
}

SmallOp SmallOp::scaled(const Cyc& c) const {
  SmallOp a = *this;
  if (mono) {
    if (c.is_zero()) return zero(n);
    for (Cyc& x : a.ph) x *= c;
  } else {
    for (Cyc& x : a.dense) x *= c;
  }
  return a;
}

bool SmallOp::operator==(const SmallOp& o) const {
  if (n != o.n) return false;
  for (long i = 0; i < n; ++i)
    for (long j = 0; j < n; ++j)
      if (at(i, j) != o.at(i, j)) return false;
  return true;
}

bool SmallOp::is_zero() const {
  if (mono) return false;
  for (const Cyc& x : dense)
    if (!x.is_zero()) return false;
  return true;
}

std::optional<Cyc> SmallOp::as_scalar() const {
  Cyc d0 = at(0, 0);
  for (long i = 0; i < n; ++i)
    for (long j = 0; j < n; ++j) {
      if (i == j && at(i, j) != d0) return std::nullopt;
      if (i != j && !at(i, j).is_zero()) return std::nullopt;
    }
  return d0;
}

SmallOp operator*(const SmallOp& a, const SmallOp& b) {
  if (a.n != b.n) throw std::invalid_argument("SmallOp product: size mismatch");
  long n = a.n;
  if (a.mono && b.mono) {
    // (AB f)(i) = a_i (B f)(col_a[i]) = a_i b_{col_a[i]} f(col_b[col_a[i]])
    std::vector<long> col(n);
    std::vector<Cyc> ph(n);
    for (long i = 0; i < n; ++i) {
      col[i] = b.col[a.col[i]];
      ph[i] = a.ph[i] * b.ph[a.col[i]];
    }
    return SmallOp::monomial(std::move(col), std::move(ph));
  }
  SmallOp out = SmallOp::zero(n);
  if (a.mono) {
    for (long i = 0; i < n; ++i)
      for (long j = 0; j < n; ++j)
        out.dense[static_cast<std::size_t>(i) * n + j] = a.ph[i] * b.at(a.col[i], j);
    return out;
  }
  if (b.mono) {
    // (AB)(i,j) = sum_k A(i,k) B(k,j); B(k,j) nonzero iff j = col_b[k].
    for (long i = 0; i < n; ++i)
      for (long k = 0; k < n; ++k) {
        const Cyc& v = a.dense[static_cast<std::size_t>(i) * n + k];
        if (v.is_zero()) continue;
        out.dense[static_cast<std::size_t>(i) * n + b.col[k]] += v * b.ph[k];
      }
    return out;
  }
  for (long i = 0; i < n; ++i)
    for (long k = 0; k < n; ++k) {
      const Cyc& v = a.dense[static_cast<std::size_t>(i) * n + k];
      if (v.is_zero()) continue;
      for (long j = 0; j < n; ++j) {
        const Cyc& w = b.dense[static_cast<std::size_t>(k) * n + j];
        if (!w.is_zero()) out.dense[static_cast<std::size_t>(i) * n + j] += v * w;
      }
    }
  return out;
}

SmallOp operator+(const SmallOp& a, const SmallOp& b) {
  if (a.n != b.n) throw std::invalid_argument("SmallOp sum: size mismatch");
  SmallOp out = SmallOp::zero(a.n);
  for (long i = 0; i < a.n; ++i)
    for (long j = 0; j < a.n; ++j)
      out.dense[static_cast<std::size_t>(i) * a.n + j] = a.at(i, j) + b.at(i, j);
  return out;
}

SmallOp operator-(const SmallOp& a, const SmallOp& b) {
  return a + b.scaled(Cyc::from_rational(Rat(-1)));
}

SmallVec apply(const SmallOp& a, const SmallVec& f) {
  if (static_cast<long>(f.size()) != a.n)
    throw std::invalid_argument("SmallOp apply: size mismatch");
  SmallVec out(a.n, Cyc::zero());
  if (a.mono) {
    for (long i = 0; i < a.n; ++i) out[i] = a.ph[i] * f[a.col[i]];
    return out;
  }
  for (long i = 0; i < a.n; ++i)
    for (long j = 0; j < a.n; ++j) {
      const Cyc& v = a.dense[static_cast<std::size_t>(i) * a.n + j];
      if (!v.is_zero()) out[i] += v * f[j];
    }
  return out;
}

long SmallModel::rep_index(const Vec& w) const { return q.canonical_index(w); }

Cyc SmallModel::cov(const Vec& l, const Vec& rep) const {
  Rat arg = -Rat(1, 2) * sym_pair(l, rep);
  if (case_two) arg -= Rat(1, 2) * b_form(l, l);
  return psi_eval(cfg, arg);
}

std::pair<long, Cyc> SmallModel::resolve(const Vec& w) const {
  Vec rep = q.canonical_rep(w);
  Vec l = w - rep;
  return {q.canonical_index(w), cov(l, rep)};
}

SmallModel make_small_model_lattice(const Lattice& L, const CharConfig& cfg,
                                    const Int& index_cap) {
  SmallModel sm;
  sm.cfg = cfg;
  sm.case_two = (cfg.mode == Mode::REAL) || (cfg.p == 2);
  sm.L1 = standard_L1(L.m(), cfg);
  sm.L = L;
  sm.Lstar = dual_lattice(sm.L, cfg);
  if (!lattice_contains(sm.Lstar, sm.L))
    throw std::invalid_argument("make_small_model: L not contained in L*");
  sm.q = quotient_data(sm.Lstar, sm.L, index_cap);
  if (lattice_contains(sm.L1, sm.L) && lattice_contains(sm.Lstar, sm.L1)) {
    sm.q1 = quotient_data(sm.Lstar, sm.L1, index_cap);
    sm.ql1 = quotient_data(sm.L1, sm.L, index_cap);
    sm.has_l1_data = true;
  }
  sm.dim = sm.q.index.convert_to<long>();
  sm.reps.reserve(sm.dim);
  for (long i = 0; i < sm.dim; ++i) sm.reps.push_back(sm.q.rep_of(sm.q.digits_at(i)));
  return sm;
}

SmallModel make_small_model(const Mat& d_L, const CharConfig& cfg,
                            const Int& index_cap) {
  return make_small_model_lattice(special_sublattice(d_L, cfg), cfg, index_cap);
}

SmallOp sigma_op(const SmallModel& sm, const HeisElem& h) {
  if (h.form != HeisForm::Std)
    throw std::invalid_argument("sigma_op: expects a standard-form element");
  if (!vector_in(sm.Lstar, h.w))
    throw std::invalid_argument("sigma_op: w-part outside L*");
  Cyc central = psi_eval(sm.cfg, h.t);
  std::vector<long> col(sm.dim);
  std::vector<Cyc> ph(sm.dim);
  for (long i = 0; i < sm.dim; ++i) {
    const Vec& r = sm.reps[i];
    auto [j, fac] = sm.resolve(r + h.w);
    col[i] = j;
    ph[i] = central * psi_eval(sm.cfg, Rat(1, 2) * sym_pair(r, h.w)) * fac;
  }
  return SmallOp::monomial(std::move(col), std::move(ph));
}

SmallOp v_op(const SmallModel& sm, const Vec& l) {
  if (!vector_in(sm.L1, l)) throw std::invalid_argument("v_op: l outside L_1");
  // The translation family commuting with sigma: note the opposite pairing
  // sign relative to sigma_op, plus the B-term matching the covariance.
  Cyc btwist = sm.case_two ? psi_eval(sm.cfg, Rat(1, 2) * b_form(l, l)) : Cyc::one();
  std::vector<long> col(sm.dim);
  std::vector<Cyc> ph(sm.dim);
  for (long i = 0; i < sm.dim; ++i) {
    const Vec& r = sm.reps[i];
    auto [j, fac] = sm.resolve(r + l);
    col[i] = j;
    ph[i] = btwist * psi_eval(sm.cfg, Rat(1, 2) * sym_pair(l, r)) * fac;
  }
  return SmallOp::monomial(std::move(col), std::move(ph));
}

SmallOp chi_projector(const SmallModel& sm, const DualCharacter& chi) {
  if (!sm.has_l1_data)
    throw std::invalid_argument("chi_projector: model lacks L_1 quotient data");
  long n = sm.ql1.index.convert_to<long>();
  SmallOp acc = SmallOp::zero(sm.dim);
  for (long k = 0; k < n; ++k) {
    Vec l = sm.ql1.rep_of(sm.ql1.digits_at(k));
    acc = acc + v_op(sm, l).scaled(char_eval(chi, l, sm.cfg).conj());
  }
  return acc.scaled(Cyc::from_rational(Rat(1, n)));
}

SmallOp intertwiner_A(const SmallModel& sm, const DualCharacter& chi1,
                      const DualCharacter& chi2) {
  Vec delta = chi1.ystar - chi2.ystar;
  std::vector<long> col(sm.dim);
  std::vector<Cyc> ph(sm.dim);
  for (long i = 0; i < sm.dim; ++i) {
    const Vec& r = sm.reps[i];
    auto [j, fac] = sm.resolve(r + delta);
    col[i] = j;
    ph[i] = psi_eval(sm.cfg, -Rat(1, 2) * sym_pair(r, delta)) * fac;
  }
  return SmallOp::monomial(std::move(col), std::move(ph));
}

SmallOp transport_D(const SmallModel& src, const SmallModel& dst, const Mat& d) {
  long m = d.rows / 2;
  for (long i = 0; i < 2 * m; ++i)
    for (long j = 0; j < 2 * m; ++j)
      if (i != j && d(i, j) != 0)
        throw std::invalid_argument("transport_D: d must be diagonal");
  for (long i = 0; i < m; ++i)
    if (d(m + i, m + i) * d(i, i) != 1)
      throw std::invalid_argument("transport_D: d not of torus shape");
  if (!lattice_eq(dst.L, lattice_act(src.L, d)))
    throw std::invalid_argument("transport_D: destination is not L d");
  Mat dinv = inverse(d);
  std::vector<long> col(dst.dim);
  std::vector<Cyc> ph(dst.dim);
  for (long i = 0; i < dst.dim; ++i) {
    auto [j, fac] = src.resolve(dst.reps[i] * dinv);
    col[i] = j;
    ph[i] = fac;
  }
  return SmallOp::monomial(std::move(col), std::move(ph));
}

namespace {

// Union-find with multiplicative phase weights: value(v) = gain(v) *
// value(root(v)); components become "dead" (forced zero) when a cycle
// closes with inconsistent phase.
struct PhaseUF {
  std::vector<long> parent;
  std::vector<Cyc> gain;
  std::vector<bool> dead;

  explicit PhaseUF(long n) : parent(n), gain(n, Cyc::one()), dead(n, false) {
    for (long i = 0; i < n; ++i) parent[i] = i;
  }
  std::pair<long, Cyc> find(long v) {
    if (parent[v] == v) return {v, Cyc::one()};
    auto [r, g] = find(parent[v]);
    parent[v] = r;
    gain[v] = gain[v] * g;
    return {r, gain[v]};
  }
  // Impose value(u) = ratio * value(v).
  void unite(long u, long v, const Cyc& ratio) {
    auto [ru, gu] = find(u);
    auto [rv, gv] = find(v);
    if (ru == rv) {
      if (gu != ratio * gv) dead[ru] = true;
      return;
    }
    // value(ru) = gu^{-1} value(u) = gu^{-1} ratio gv value(rv)
    parent[ru] = rv;
    gain[ru] = gu.inverse() * ratio * gv;
    dead[rv] = dead[rv] || dead[ru];
  }
};

long gauss_rank(std::vector<SmallVec>& rows) {
  if (rows.empty()) return 0;
  long cols = static_cast<long>(rows[0].size());
  long rank = 0;
  for (long c = 0; c < cols && rank < static_cast<long>(rows.size()); ++c) {
    long piv = -1;
    for (long i = rank; i < static_cast<long>(rows.size()); ++i)
      if (!rows[i][c].is_zero()) { piv = i; break; }
    if (piv < 0) continue;
    std::swap(rows[piv], rows[rank]);
    Cyc inv = rows[rank][c].inverse();
    for (long j = c; j < cols; ++j) rows[rank][j] *= inv;
    for (long i = 0; i < static_cast<long>(rows.size()); ++i) {
      if (i == rank || rows[i][c].is_zero()) continue;
      Cyc f = rows[i][c];
      for (long j = c; j < cols; ++j) rows[i][j] -= f * rows[rank][j];
    }
    ++rank;
  }
  return rank;
}

}  // namespace

long commutant_dim(const std::vector<SmallOp>& generators) {
  if (generators.empty()) throw std::invalid_argument("commutant_dim: no generators");
  long n = generators[0].n;
  bool all_mono = true;
  for (const SmallOp& a : generators) {
    if (a.n != n) throw std::invalid_argument("commutant_dim: size mismatch");
    if (!a.mono) all_mono = false;
  }
  if (all_mono) {
    // X A = A X for monomial A forces X[s(i)][s(j)] = (a_j / a_i) X[i][j]
    // where (Af)(i) = a_i f(s(i)); count consistent entry orbits.
    PhaseUF uf(n * n);
    for (const SmallOp& a : generators)
      for (long i = 0; i < n; ++i)
        for (long j = 0; j < n; ++j)
          uf.unite(a.col[i] * n + a.col[j], i * n + j, a.ph[j] * a.ph[i].inverse());
    long dim = 0;
    for (long v = 0; v < n * n; ++v) {
      auto [r, g] = uf.find(v);
      (void)g;
      if (r == v && !uf.dead[r]) ++dim;
    }
    return dim;
  }
  if (n > 32) throw std::domain_error("commutant_dim: dense path limited to n <= 32");
  // Dense: rows of the linear system (X A - A X) entry (i,j) in unknowns X.
  std::vector<SmallVec> rows;
  for (const SmallOp& a : generators)
    for (long i = 0; i < n; ++i)
      for (long j = 0; j < n; ++j) {
        SmallVec row(n * n, Cyc::zero());
        // (X A)(i,j) = sum_k X(i,k) A(k,j); (A X)(i,j) = sum_k A(i,k) X(k,j)
        for (long k = 0; k < n; ++k) {
          row[i * n + k] += a.at(k, j);
          row[k * n + j] -= a.at(i, k);
        }
        bool nonzero = false;
        for (const Cyc& x : row)
          if (!x.is_zero()) { nonzero = true; break; }
        if (nonzero) rows.push_back(std::move(row));
      }
  return n * n - gauss_rank(rows);
}

std::vector<SmallVec> op_image_basis(const SmallOp& a) {
  // Row-reduce the set of columns.
  std::vector<SmallVec> cols;
  for (long j = 0; j < a.n; ++j) {
    SmallVec c(a.n);
    for (long i = 0; i < a.n; ++i) c[i] = a.at(i, j);
    cols.push_back(std::move(c));
  }
  long rank = gauss_rank(cols);
  cols.resize(rank);
  return cols;
}

SmallOp restrict_op(const SmallOp& a, const std::vector<SmallVec>& basis) {
  long n = a.n;
  long r = static_cast<long>(basis.size());
  // Augmented system [B | A b_1 ... A b_r] with B the basis as columns.
  std::vector<SmallVec> aug(n, SmallVec(r + r, Cyc::zero()));
  for (long k = 0; k < r; ++k) {
    SmallVec img = apply(a, basis[k]);
    for (long i = 0; i < n; ++i) {
      aug[i][k] = basis[k][i];
      aug[i][r + k] = img[i];
    }
  }
  // Gauss on the left block.
  long rank = 0;
  for (long c = 0; c < r && rank < n; ++c) {
    long piv = -1;
    for (long i = rank; i < n; ++i)
      if (!aug[i][c].is_zero()) { piv = i; break; }
    if (piv < 0) throw std::domain_error("restrict_op: basis not independent");
    std::swap(aug[piv], aug[rank]);
    Cyc inv = aug[rank][c].inverse();
    for (long j = 0; j < 2 * r; ++j) aug[rank][j] *= inv;
    for (long i = 0; i < n; ++i) {
      if (i == rank || aug[i][c].is_zero()) continue;
      Cyc f = aug[i][c];
      for (long j = 0; j < 2 * r; ++j) aug[i][j] -= f * aug[rank][j];
    }
    ++rank;
  }
  // Rows past the rank must have vanished on the right: invariance.
  for (long i = rank; i < n; ++i)
    for (long j = r; j < 2 * r; ++j)
      if (!aug[i][j].is_zero())
        throw std::domain_error("restrict_op: subspace not invariant");
  std::vector<Cyc> entries(static_cast<std::size_t>(r) * r, Cyc::zero());
  for (long i = 0; i < r; ++i)
    for (long k = 0; k < r; ++k) entries[static_cast<std::size_t>(i) * r + k] = aug[i][r + k];
  return SmallOp::from_dense(r, std::move(entries));
}

}  // namespace lw
