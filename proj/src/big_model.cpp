#include "lw/big_model.hpp"

#include "lw/iwahori.hpp"
#include "lw/symplectic.hpp"

#include <algorithm>
#include <set>
#include <sstream>
#include <stdexcept>

namespace lw {

namespace {

Rat rat_pow(const Rat& base, long k) {
  Rat r = 1;
  for (long i = 0; i < (k >= 0 ? k : -k); ++i) r *= base;
  return k >= 0 ? r : Rat(1) / r;
}

bool vec_is_zero(const Vec& v) {
  return std::all_of(v.begin(), v.end(), [](const Rat& x) { return x == 0; });
}

bool small_vec_zero(const SmallVec& v) {
  return std::all_of(v.begin(), v.end(), [](const Cyc& c) { return c.is_zero(); });
}

void prune(BigFun& f) {
  for (auto it = f.supp.begin(); it != f.supp.end();)
    it = small_vec_zero(it->second) ? f.supp.erase(it) : std::next(it);
}

// Inverse of a monomial operator.
SmallOp mono_inverse(const SmallOp& a) {
  if (!a.mono) throw std::invalid_argument("mono_inverse: dense operator");
  std::vector<long> col(a.n);
  std::vector<Cyc> ph(a.n);
  for (long i = 0; i < a.n; ++i) {
    col[a.col[i]] = i;
    ph[a.col[i]] = a.ph[i].inverse();
  }
  return SmallOp::monomial(std::move(col), std::move(ph));
}

long zero_index(const SmallModel& sm) {
  return sm.q.canonical_index(Vec(static_cast<std::size_t>(sm.L.dim()), Rat(0)));
}

}  // namespace

bool VecLess::operator()(const Vec& a, const Vec& b) const {
  if (a.size() != b.size()) return a.size() < b.size();
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i] < b[i]) return true;
    if (b[i] < a[i]) return false;
  }
  return false;
}

BigCanon big_canonicalize(const SmallModel& sm, const Vec& w) {
  ModSplit ms = reduce_mod(sm.Lstar, w);
  BigCanon c;
  c.rep = ms.rep;
  Cyc outer = psi_eval(sm.cfg, Rat(1, 2) * sym_pair(ms.rep, ms.in_lattice));
  c.twist = sigma_op(sm, HeisElem{ms.in_lattice, Rat(0), HeisForm::Std}).scaled(outer);
  return c;
}

void big_set(const SmallModel& sm, BigFun& f, const Vec& w, const SmallVec& v) {
  BigCanon c = big_canonicalize(sm, w);
  SmallVec stored = lw::apply(mono_inverse(c.twist), v);
  if (small_vec_zero(stored))
    f.supp.erase(c.rep);
  else
    f.supp[c.rep] = std::move(stored);
}

SmallVec big_eval(const SmallModel& sm, const BigFun& f, const Vec& w) {
  BigCanon c = big_canonicalize(sm, w);
  auto it = f.supp.find(c.rep);
  if (it == f.supp.end()) return SmallVec(static_cast<std::size_t>(sm.dim));
  return lw::apply(c.twist, it->second);
}

Cyc big_scalar_at(const SmallModel& sm, const BigFun& f, const Vec& w) {
  return big_eval(sm, f, w)[static_cast<std::size_t>(zero_index(sm))];
}

BigFun big_add(const BigFun& a, const BigFun& b) {
  BigFun out = a;
  for (const auto& [k, v] : b.supp) {
    auto it = out.supp.find(k);
    if (it == out.supp.end()) {
      out.supp[k] = v;
    } else {
      for (std::size_t i = 0; i < v.size(); ++i) it->second[i] = it->second[i] + v[i];
    }
  }
  prune(out);
  return out;
}

BigFun big_scale(const BigFun& f, const Cyc& c) {
  BigFun out;
  if (c.is_zero()) return out;
  for (const auto& [k, v] : f.supp) {
    SmallVec s(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) s[i] = v[i] * c;
    out.supp[k] = std::move(s);
  }
  return out;
}

bool big_is_zero(const BigFun& f) {
  for (const auto& [k, v] : f.supp)
    if (!small_vec_zero(v)) return false;
  return true;
}

bool big_eq(const BigFun& a, const BigFun& b) {
  BigFun x = a, y = b;
  prune(x);
  prune(y);
  if (x.supp.size() != y.supp.size()) return false;
  auto it = x.supp.begin(), jt = y.supp.begin();
  for (; it != x.supp.end(); ++it, ++jt) {
    if (it->first != jt->first) return false;
    for (std::size_t i = 0; i < it->second.size(); ++i)
      if (!(it->second[i] == jt->second[i])) return false;
  }
  return true;
}

BigFun pi_act(const SmallModel& sm, const HeisElem& h, const BigFun& f) {
  if (h.form != HeisForm::Std)
    throw std::invalid_argument("pi_act: expects a standard-form element");
  Cyc central = psi_eval(sm.cfg, h.t);
  BigFun out;
  for (const auto& [r, v] : f.supp) {
    Vec w0 = big_canonicalize(sm, r - h.w).rep;
    if (out.supp.count(w0)) continue;  // already produced by another coset
    SmallVec val = big_eval(sm, f, w0 + h.w);
    Cyc ph = central * psi_eval(sm.cfg, Rat(1, 2) * sym_pair(w0, h.w));
    for (auto& c : val) c = c * ph;
    if (!small_vec_zero(val)) out.supp[w0] = std::move(val);
  }
  return out;
}

BigFun s_fun(const SmallModel& sm, const Vec& w1) {
  Vec rep0 = big_canonicalize(sm, w1).rep;
  SmallVec v(static_cast<std::size_t>(sm.dim));
  for (long i = 0; i < sm.dim; ++i) {
    Vec y = sm.reps[static_cast<std::size_t>(i)] + rep0 - w1;
    if (!vector_in(sm.L, y)) continue;
    Rat arg = Rat(1, 2) * sym_pair(sm.reps[static_cast<std::size_t>(i)], rep0) -
              Rat(1, 2) * sym_pair(y, w1);
    if (sm.case_two) arg -= Rat(1, 2) * b_form(y, y);
    v[static_cast<std::size_t>(i)] = psi_eval(sm.cfg, arg);
  }
  BigFun f;
  f.supp[rep0] = std::move(v);
  prune(f);
  return f;
}

BigFun s_chi_fun(const SmallModel& sm, const Vec& w0, const DualCharacter& chi) {
  Vec rep0 = big_canonicalize(sm, w0).rep;
  SmallVec v(static_cast<std::size_t>(sm.dim));
  for (long i = 0; i < sm.dim; ++i) {
    Vec y = sm.reps[static_cast<std::size_t>(i)] + rep0 - w0;
    if (!vector_in(sm.L1, y)) continue;
    Rat arg = Rat(1, 2) * sym_pair(sm.reps[static_cast<std::size_t>(i)], rep0) -
              Rat(1, 2) * sym_pair(y, w0);
    if (sm.case_two) arg -= Rat(1, 2) * b_form(y, y);
    v[static_cast<std::size_t>(i)] = char_eval(chi, y, sm.cfg) * psi_eval(sm.cfg, arg);
  }
  BigFun f;
  f.supp[rep0] = std::move(v);
  prune(f);
  return f;
}

namespace {

// One exact Riemann sum at sampling depth N.
BigFun integral_once(const SmallModel& src, const SmallModel& dst, const Mat& g,
                     const SmallOp& T, bool transported, const BigFun& f,
                     long N, const Rat& mu) {
  const Int& p = dst.cfg.p;
  Rat pn = rat_pow(Rat(p), N);
  Int cap = Int(1) << 22;
  CosetList samples = quotient_enum(dst.Lstar, lattice_scale(dst.Lstar, pn), cap);
  Rat weight = mu / rat_pow(Rat(p), 2 * dst.L.m() * N);

  // Candidate output cosets: supp(out) lies in supp(f) g^{-1} + L*_src g^{-1}
  // modulo L*_dst.
  Mat ginv = inverse(g);
  CosetList shifts =
      quotient_enum(lattice_sum(lattice_act(src.Lstar, ginv), dst.Lstar), dst.Lstar, cap);
  std::set<Vec, VecLess> cands;
  for (const auto& [r, v] : f.supp)
    for (const Vec& s : shifts.reps)
      cands.insert(big_canonicalize(dst, r * ginv + s).rep);

  BigFun out;
  for (const Vec& w0 : cands) {
    SmallVec acc(static_cast<std::size_t>(dst.dim));
    bool any = false;
    for (const Vec& a : samples.reps) {
      SmallVec arg = big_eval(src, f, (a + w0) * g);
      if (small_vec_zero(arg)) continue;
      if (transported) arg = lw::apply(T, arg);
      SmallVec term =
          lw::apply(sigma_op(dst, HeisElem{scaled(a, Rat(-1)), Rat(0), HeisForm::Std}), arg);
      Cyc ph = psi_eval(dst.cfg, Rat(1, 2) * sym_pair(a, w0));
      for (std::size_t i = 0; i < term.size(); ++i) acc[i] = acc[i] + term[i] * ph;
      any = true;
    }
    if (!any) continue;
    Cyc wc = Cyc::from_rational(weight);
    for (auto& c : acc) c = c * wc;
    if (!small_vec_zero(acc)) out.supp[w0] = std::move(acc);
  }
  return out;
}

long auto_depth(const SmallModel& src, const SmallModel& dst, const Mat& g) {
  const Int& p = dst.cfg.p;
  for (long N = 0; N <= 24; ++N) {
    Lattice deep = lattice_scale(dst.Lstar, rat_pow(Rat(p), N));
    if (lattice_contains(dst.L, deep) && lattice_contains(src.L, lattice_act(deep, g)))
      return N;
  }
  throw std::runtime_error("integral_op: no admissible sampling depth");
}

}  // namespace

BigFun integral_op(const SmallModel& src, const SmallModel& dst, const Mat& g,
                   const Mat& d, const BigFun& f, const TruncationCfg& trunc) {
  if (src.cfg.mode != Mode::PADIC)
    throw std::invalid_argument("integral_op: finite mode only");
  bool transported = d != Mat::identity(d.rows);
  SmallOp T = transported ? transport_D(src, dst, d) : SmallOp::identity(src.dim);
  if (!transported && !lattice_eq(src.L, dst.L))
    throw std::invalid_argument("integral_op: lattices differ but d is trivial");

  long N = trunc.N >= 0 ? trunc.N : auto_depth(src, dst, g);
  for (long attempt = 0; attempt < 3; ++attempt, ++N) {
    BigFun at_n = integral_once(src, dst, g, T, transported, f, N, trunc.mu);
    if (!trunc.verify) return at_n;
    // One depth deeper must reproduce the sum exactly (the factor p^{2m}
    // in the sample count is cancelled by the weight).
    BigFun deeper = integral_once(src, dst, g, T, transported, f, N + 1, trunc.mu);
    if (big_eq(at_n, deeper)) return at_n;
    if (trunc.N >= 0) break;  // an explicit depth is not bumped
  }
  throw std::runtime_error("integral_op: truncation unstable");
}

ConditionStats condition_set_stats(const SmallModel& sm, const Mat& Xg, long K) {
  if (sm.cfg.mode != Mode::PADIC)
    throw std::invalid_argument("condition_set_stats: finite mode only");
  const Int& p = sm.cfg.p;
  if (K < 0) {
    for (K = 0; K <= 24; ++K) {
      Lattice deep = lattice_scale(sm.Lstar, rat_pow(Rat(p), K));
      if (lattice_contains(sm.L, deep) &&
          lattice_contains(sm.L, lattice_act(deep, Xg)))
        break;
    }
    if (K > 24) throw std::runtime_error("condition_set_stats: no stable depth");
  }
  auto stats_at = [&](long KK) {
    ConditionStats st;
    CosetList cl =
        quotient_enum(sm.Lstar, lattice_scale(sm.Lstar, rat_pow(Rat(p), KK)), Int(1) << 22);
    st.total = Int(cl.reps.size());
    for (const Vec& a : cl.reps) {
      Vec img = a * Xg;
      if (!vector_in(sm.L, img - a)) continue;
      st.members += 1;
      Rat arg = Rat(-1, 2) * sym_pair(a, img);
      if (sm.case_two) arg -= Rat(1, 2) * b_form(img - a, img - a);
      if (!(psi_eval(sm.cfg, arg) == Cyc::one())) st.phases_trivial = false;
    }
    st.measure = Rat(st.members) / Rat(st.total);
    return st;
  };
  ConditionStats a = stats_at(K), b = stats_at(K + 1);
  if (a.measure != b.measure || a.phases_trivial != b.phases_trivial)
    throw std::runtime_error("condition_set_stats: depth unstable");
  return a;
}

BigContext make_big_context(const Mat& d_L, const CharConfig& cfg,
                            const Int& index_cap) {
  BigContext ctx;
  ctx.cfg = cfg;
  ctx.d_L = d_L;
  ctx.base = make_small_model(d_L, cfg, index_cap);
  ctx.case_two = ctx.base.case_two;
  if (ctx.case_two) {
    long m = d_L.rows / 2;
    bool even_e = cfg.mode == Mode::REAL || cfg.e % 2 == 0;
    ctx.dp = Mat::identity(2 * m);
    for (long i = 0; i < m; ++i) {
      ctx.dp(i, i) = even_e ? Rat(2) : Rat(1, 2);
      ctx.dp(m + i, m + i) = even_e ? Rat(1, 2) : Rat(2);
    }
    Lattice Lp = lattice_prime(ctx.base.L, cfg);
    if (!lattice_eq(Lp, lattice_act(ctx.base.L, ctx.dp)))
      throw std::logic_error("make_big_context: L' mismatch");
    ctx.prime = make_small_model_lattice(Lp, cfg, index_cap);
  }
  return ctx;
}

std::vector<std::string> m_plan(const BigContext& ctx, const Mat& g) {
  if (!ctx.case_two)
    return {"M[g] = integral over L* of psi(1/2 <a, w>) sigma(-a) f((a + w) g)"};
  Mat g0 = ctx.d_L * g * inverse(ctx.d_L);
  if (is_iwahori(g0))
    return {"i^g_{L,L'} : V_L -> V_{L'} (transport by d')",
            "i_{L',L} : V_{L'} -> V_L (transport by d'^{-1})"};
  if (parse_weyl_affine(g0)) {
    ExceptionalData ed = exceptional_data(g, ctx.d_L, ctx.cfg);
    if (ed.I.empty()) return {"i^g_{L,L} : V_L -> V_L"};
    std::ostringstream os;
    os << "exceptional coordinates {";
    bool first = true;
    for (long i : ed.I) {
      if (!first) os << ", ";
      os << i + 1;
      first = false;
    }
    os << "}";
    return {os.str(), "i^g_{L,L''_g} : V_L -> V_{L''_g} (transport by d''_g)",
            "i_{L''_g,L} : V_{L''_g} -> V_L (transport by d''_g^{-1})"};
  }
  return {"factor d_L g d_L^{-1} = i_1 w i_2 with i_1, i_2 Iwahori and w monomial",
          "M[g] = M[d_L^{-1} i_1 d_L] M[d_L^{-1} w d_L] M[d_L^{-1} i_2 d_L]"};
}

BigFun m_apply(const BigContext& ctx, const Mat& g, const BigFun& f,
               const TruncationCfg& trunc) {
  if (ctx.cfg.mode != Mode::PADIC)
    throw std::invalid_argument("m_apply: finite mode only (see m_plan)");
  long n = ctx.d_L.rows;
  if (!ctx.case_two) return integral_op(ctx.base, ctx.base, g, Mat::identity(n), f, trunc);
  Mat g0 = ctx.d_L * g * inverse(ctx.d_L);
  if (is_iwahori(g0)) {
    BigFun mid = integral_op(ctx.base, ctx.prime, g, ctx.dp, f, trunc);
    return integral_op(ctx.prime, ctx.base, Mat::identity(n), inverse(ctx.dp), mid, trunc);
  }
  if (parse_weyl_affine(g0)) {
    ExceptionalData ed = exceptional_data(g, ctx.d_L, ctx.cfg);
    if (ed.I.empty())
      return integral_op(ctx.base, ctx.base, g, Mat::identity(n), f, trunc);
    SmallModel mpp = make_small_model_lattice(ed.Lpp, ctx.cfg);
    BigFun mid = integral_op(ctx.base, mpp, g, ed.dpp, f, trunc);
    return integral_op(mpp, ctx.base, Mat::identity(n), inverse(ed.dpp), mid, trunc);
  }
  // General g: factor the conjugate through the fixed Iwahori decomposition
  // and compose the three routed operators, M[g] = M[g_1] M[g_2] M[g_3].
  IwahoriFactorization fac = iwahori_decompose(g0);
  Mat dinv = inverse(ctx.d_L);
  Mat g1 = dinv * fac.i1 * ctx.d_L;
  Mat g2 = dinv * fac.w.mat() * ctx.d_L;
  Mat g3 = dinv * fac.i2 * ctx.d_L;
  if (!(g1 * g2 * g3 == g)) throw std::logic_error("m_apply: factorization mismatch");
  BigFun h = m_apply(ctx, g3, f, trunc);
  h = m_apply(ctx, g2, h, trunc);
  return m_apply(ctx, g1, h, trunc);
}

}  // namespace lw
