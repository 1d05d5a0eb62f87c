// The big (compactly induced) model V_{L,psi}: functions f on W with values
// in the small model W_small, compactly supported modulo L* and satisfying
// f(l* + w) = psi(1/2 <w, l*>) sigma(l*) f(w) for l* in L*. Provides the
// Heisenberg action pi(h), the distinguished vectors s_w and s_w^chi, the
// intertwining integral operators between big models over different
// lattices, and the assembled operators M[g] with exact truncation-
// stability certification.
#pragma once

#include "lw/heisenberg.hpp"
#include "lw/small_model.hpp"

#include <map>
#include <string>
#include <vector>

namespace lw {

// Strict ordering on coordinate vectors (map key for supports).
struct VecLess {
  bool operator()(const Vec& a, const Vec& b) const;
};

// A big-model vector: finitely many cosets w + L*, each keyed by the
// canonical representative of w mod L* and carrying the value f(w).
struct BigFun {
  std::map<Vec, SmallVec, VecLess> supp;
};

// Splits w = l* + rep with rep the canonical representative of w + L*;
// twist is the covariance operator with f(w) = apply(twist, f(rep)).
struct BigCanon {
  Vec rep;
  SmallOp twist;
};
BigCanon big_canonicalize(const SmallModel& sm, const Vec& w);

// Stores the value at canonical(w), adjusting by the inverse covariance
// twist so that evaluation at w reproduces v exactly.
void big_set(const SmallModel& sm, BigFun& f, const Vec& w, const SmallVec& v);
SmallVec big_eval(const SmallModel& sm, const BigFun& f, const Vec& w);
// The scalar-picture value F(w) = f(w)(0).
Cyc big_scalar_at(const SmallModel& sm, const BigFun& f, const Vec& w);

BigFun big_add(const BigFun& a, const BigFun& b);
BigFun big_scale(const BigFun& f, const Cyc& c);
bool big_is_zero(const BigFun& f);
bool big_eq(const BigFun& a, const BigFun& b);

// pi(w', t): f |-> (w |-> psi(t + 1/2 <w, w'>) f(w + w')).
BigFun pi_act(const SmallModel& sm, const HeisElem& h, const BigFun& f);

// The L-spherical vector supported on L + w1 with scalar value
// psi(-1/2 <y, w1>) (case II: * psi(-1/2 B(y, y))) at y + w1, y in L.
BigFun s_fun(const SmallModel& sm, const Vec& w1);
// The chi-covariant vector supported on L_1 + w0, scalar value
// chi(y) psi(-1/2 <y, w0>) (case II: * psi(-1/2 B(y, y))) at y + w0.
BigFun s_chi_fun(const SmallModel& sm, const Vec& w0, const DualCharacter& chi);

struct TruncationCfg {
  long N = -1;        // sampling depth; -1 selects the least stable depth
  Rat mu = 1;         // the value mu(L*) of the chosen Haar measure
  bool verify = true; // recompute at depth N+1 and require exact agreement
};

// The integral operator from the big model over src.L to the one over
// dst.L along g: out(w) = mu Int_{a in L*_dst} psi(1/2 <a, w>)
// sigma_dst(-a) T f((a + w) g) da, where T is the lattice transport
// W_small(src) -> W_small(dst) for dst.L = src.L d (d = identity when the
// lattices agree). The integral is evaluated exactly by sampling over
// L*_dst / p^N L*_dst and certified by recomputation at depth N + 1.
BigFun integral_op(const SmallModel& src, const SmallModel& dst, const Mat& g,
                   const Mat& d, const BigFun& f,
                   const TruncationCfg& trunc = {});

// Proportion-and-phase statistics of the condition set
// { a in L* : a X g - a in L } sampled over L* / p^K L* (K and K + 1 must
// agree), together with exhaustive verification of the phase identity
// psi(1/2 <-a, a X g> - 1/2 B(a X g - a, a X g - a)) = 1 on the set.
struct ConditionStats {
  Int members = 0;
  Int total = 1;
  Rat measure = 0;  // members / total
  bool phases_trivial = true;
};
ConditionStats condition_set_stats(const SmallModel& sm, const Mat& Xg,
                                   long K = -1);

// Context for the assembled operators M[g]: the base model over L = L_1 d_L
// plus (in case II) the auxiliary model over L'.
struct BigContext {
  CharConfig cfg;
  Mat d_L;
  SmallModel base;
  bool case_two = false;
  SmallModel prime;  // over L' (case II only)
  Mat dp;            // L' = L dp
};
BigContext make_big_context(const Mat& d_L, const CharConfig& cfg,
                            const Int& index_cap = 10000);

// Human-readable composition plan for M[g] (the only output in the real
// mode, where the integrals are not evaluated numerically).
std::vector<std::string> m_plan(const BigContext& ctx, const Mat& g);

// M[g] applied to f. Case I (p odd): the single integral over L*. Case II
// (p = 2): g with d_L g d_L^{-1} Iwahori routes through L'; monomial
// (Weyl-affine) g routes through L''_g when the exceptional set is
// nonempty and directly otherwise. Throws in the real mode.
BigFun m_apply(const BigContext& ctx, const Mat& g, const BigFun& f,
               const TruncationCfg& trunc = {});

}  // namespace lw
