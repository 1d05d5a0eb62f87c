#include "lw/cocycle.hpp"

#include <random>
#include <sstream>
#include <stdexcept>

namespace lw {

namespace {

std::string mat_key(const Mat& g) {
  std::ostringstream os;
  os << g.rows << "x" << g.cols;
  for (const Rat& x : g.a) os << ";" << rat_to_string(x);
  return os.str();
}

// Writes a positive integer as s^2 * d with d squarefree; returns (s, d).
// Trial division suffices: the integers here are products of small primes.
std::pair<Int, Int> squarefree_split(Int n) {
  Int s = 1, d = 1;
  for (Int q = 2; q * q <= n; ++q) {
    long k = 0;
    while (n % q == 0) {
      n /= q;
      ++k;
    }
    for (long i = 0; i < k / 2; ++i) s *= q;
    if (k % 2) d *= q;
  }
  d *= n;  // leftover prime (or 1)
  return {s, d};
}

CocycleValue split_value(const Cyc& v) {
  if (v.is_zero()) throw std::runtime_error("cocycle: extracted value is zero");
  auto norm = (v * v.conj()).as_rational();
  if (!norm || *norm <= 0) throw std::runtime_error("cocycle: |value|^2 is not rational");
  // |v|^2 = num/den = (num * den) / den^2.
  Int num = rat_num(*norm), den = rat_den(*norm);
  auto [s, d] = squarefree_split(num * den);
  CocycleValue out;
  out.magnitude = Rat(s, den);
  out.radicand = d;
  Cyc inv_mag = cyc_sqrt(d).inverse().scaled(Rat(1) / out.magnitude);
  out.phase = v * inv_mag;
  if (out.phase * out.phase.conj() != Cyc::one())
    throw std::runtime_error(
        "cocycle: value does not split as |c| times a unitary cyclotomic phase");
  return out;
}

// Deterministic translation parameters for the probe family.
std::vector<HeisElem> probe_translates(const SmallModel& sm) {
  long rows = sm.Lstar.basis.rows;
  long n = sm.Lstar.basis.cols;
  Vec zero(n, Rat(0));
  std::vector<HeisElem> out;
  out.push_back({zero, Rat(0)});
  for (long i = 0; i < rows && out.size() < 4; ++i) out.push_back({sm.Lstar.basis.row(i), Rat(0)});
  if (rows >= 2) out.push_back({sm.Lstar.basis.row(0) + sm.Lstar.basis.row(1), Rat(0)});
  out.push_back({scaled(sm.Lstar.basis.row(0), Rat(2)), Rat(0)});
  out.push_back({scaled(sm.Lstar.basis.row(0), Rat(-1)), Rat(0)});
  out.push_back({scaled(sm.Lstar.basis.row(rows - 1), Rat(3)), Rat(0)});
  return out;
}

// Ratio of M[g] M[g'] against M[g g'] on probes inside the chi-component;
// requires at least three probes with nonzero denominators, all yielding
// one exact scalar.
Cyc extract_ratio(const Mat& g, const Mat& gp, const DualCharacter& chi,
                  const CocycleCtx& ctx) {
  const SmallModel& sm = ctx.big().base;
  Vec zero(sm.Lstar.basis.cols, Rat(0));
  BigFun base = s_chi_fun(sm, zero, chi);
  Mat prod = g * gp;
  bool have = false;
  Cyc ratio;
  long good = 0;
  for (const HeisElem& h : probe_translates(sm)) {
    BigFun probe = pi_act(sm, h, base);
    BigFun direct = m_apply(ctx.big(), prod, probe, ctx.trunc());
    if (big_is_zero(direct)) continue;  // re-probe on zero denominator
    BigFun comp = m_apply(ctx.big(), g, m_apply(ctx.big(), gp, probe, ctx.trunc()), ctx.trunc());
    // Locate a nonzero evaluation of the denominator.
    Cyc r;
    bool found = false;
    for (const auto& [w, vals] : direct.supp) {
      for (std::size_t i = 0; i < vals.size(); ++i) {
        if (vals[i].is_zero()) continue;
        r = big_eval(sm, comp, w)[i] * vals[i].inverse();
        found = true;
        break;
      }
      if (found) break;
    }
    if (!found) continue;
    if (r.is_zero()) throw std::runtime_error("cocycle: composite vanished on a probe");
    // The ratio must be a single scalar across every evaluation point.
    if (!big_eq(comp, big_scale(direct, r)))
      throw std::runtime_error("cocycle: ratio is not a scalar across evaluation points");
    if (have && r != ratio) throw std::runtime_error("cocycle: ratio differs between probes");
    ratio = r;
    have = true;
    ++good;
    if (good >= 3) break;
  }
  if (good < 3) throw std::runtime_error("cocycle: fewer than three usable probes");
  return ratio;
}

}  // namespace

Cyc cyc_sqrt(const Int& squarefree) {
  if (squarefree <= 0) throw std::invalid_argument("cyc_sqrt: argument must be positive");
  Cyc out = Cyc::one();
  Int n = squarefree;
  for (Int q = 2; q * q <= n || n > 1; ++q) {
    if (q * q > n) q = n;  // leftover prime
    if (n % q != 0) continue;
    n /= q;
    if (n % q == 0) throw std::invalid_argument("cyc_sqrt: argument must be squarefree");
    if (q == 2) {
      out *= Cyc::root(8, 1) + Cyc::root(8, 7);
      continue;
    }
    // Quadratic Gauss sum at the odd prime q: G = sum over x of (x|q)
    // zeta_q^x equals sqrt(q) for q = 1 mod 4 and i sqrt(q) for q = 3 mod 4.
    long ql = q.convert_to<long>();
    std::vector<bool> is_square(static_cast<std::size_t>(ql), false);
    for (long x = 1; x < ql; ++x) is_square[static_cast<std::size_t>((x * x) % ql)] = true;
    Cyc gauss;
    for (long x = 1; x < ql; ++x)
      gauss += Cyc::root(ql, x).scaled(Rat(is_square[static_cast<std::size_t>(x)] ? 1 : -1));
    if (ql % 4 == 3) gauss *= Cyc::root(4, 3);  // divide out i
    out *= gauss;
  }
  auto check = (out * out).as_rational();
  if (!check || *check != Rat(squarefree)) throw std::logic_error("cyc_sqrt: self-check failed");
  return out;
}

Cyc CocycleValue::value() const { return (phase * cyc_sqrt(radicand)).scaled(magnitude); }

std::string CocycleValue::magnitude_string() const {
  std::string s = rat_to_string(magnitude);
  if (radicand != 1) s += "*sqrt(" + radicand.str() + ")";
  return s;
}

Rat m_one_scalar(CocycleCtx& ctx) {
  {
    std::lock_guard<std::mutex> lock(ctx.mu_);
    if (ctx.mone_) return *ctx.mone_;
  }
  const SmallModel& sm = ctx.big().base;
  Vec zero(sm.Lstar.basis.cols, Rat(0));
  DualCharacter chi = sm.has_l1_data ? all_characters(sm.q1).front()
                                     : DualCharacter{zero};
  BigFun probe = s_chi_fun(sm, zero, chi);
  BigFun image = m_apply(ctx.big(), Mat::identity(static_cast<long>(zero.size())), probe,
                         ctx.trunc());
  Cyc r;
  bool found = false;
  for (const auto& [w, vals] : probe.supp) {
    for (std::size_t i = 0; i < vals.size() && !found; ++i)
      if (!vals[i].is_zero()) {
        r = big_eval(sm, image, w)[i] * vals[i].inverse();
        found = true;
      }
    if (found) break;
  }
  if (!found || !big_eq(image, big_scale(probe, r)))
    throw std::runtime_error("cocycle: M[1] is not scalar on the probe");
  auto rr = r.as_rational();
  if (!rr || *rr <= 0) throw std::runtime_error("cocycle: M[1] scalar is not a positive rational");
  std::lock_guard<std::mutex> lock(ctx.mu_);
  ctx.mone_ = *rr;
  return *rr;
}

CocycleValue cocycle(const Mat& g, const Mat& gp, CocycleCtx& ctx) {
  std::string key = mat_key(g) + "|" + mat_key(gp);
  {
    std::lock_guard<std::mutex> lock(ctx.mu_);
    auto it = ctx.memo_.find(key);
    if (it != ctx.memo_.end()) return it->second;
  }
  const SmallModel& sm = ctx.big().base;
  std::vector<DualCharacter> chis;
  if (sm.has_l1_data) {
    std::vector<DualCharacter> all = all_characters(sm.q1);
    chis.push_back(all.front());
    if (all.size() > 1) chis.push_back(all.back());
  } else {
    chis.push_back(DualCharacter{Vec(sm.Lstar.basis.cols, Rat(0))});
  }
  Cyc ratio = extract_ratio(g, gp, chis[0], ctx);
  for (std::size_t i = 1; i < chis.size(); ++i)
    if (extract_ratio(g, gp, chis[i], ctx) != ratio)
      throw std::runtime_error("cocycle: values differ between chi-components");
  // Normalize by the M[1] scalar so that M-hat[g] = M[g] / mu_0 satisfies
  // M-hat[1] = id and c(1, g) = c(g, 1) = 1.
  CocycleValue out = split_value(ratio.scaled(Rat(1) / m_one_scalar(ctx)));
  std::lock_guard<std::mutex> lock(ctx.mu_);
  ctx.memo_.emplace(key, out);
  return out;
}

MpElem mp_mul(const MpElem& a, const MpElem& b, CocycleCtx& ctx) {
  CocycleValue c = cocycle(a.g, b.g, ctx);
  return {a.g * b.g, a.t * b.t * c.phase};
}

RepCheckReport rep_check(long samples, CocycleCtx& ctx, std::uint64_t seed) {
  const SmallModel& sm = ctx.big().base;
  long n = sm.Lstar.basis.cols;
  long m = n / 2;
  // Lattice-stabilizing generator pool: symmetric unipotents both ways, the
  // full Weyl flip, and the center of Sp.
  std::vector<Mat> pool;
  {
    Mat u = Mat::identity(n), l = Mat::identity(n);
    for (long i = 0; i < m; ++i) {
      u(i, m + i) = Rat(1);
      l(m + i, i) = Rat(2);
    }
    std::vector<long> id(m);
    for (long i = 0; i < m; ++i) id[i] = i;
    std::set<long> all;
    for (long i = 0; i < m; ++i) all.insert(i);
    pool = {Mat::identity(n), u, l, weyl_element(m, id, all),
            scaled(Mat::identity(n), Rat(-1))};
  }
  std::mt19937_64 r(seed);
  auto pick = [&](long lo, long hi) {
    return std::uniform_int_distribution<long>(lo, hi)(r);
  };
  Int pe = 1;
  if (sm.cfg.mode == Mode::PADIC)
    for (long i = 0; i <= sm.cfg.e; ++i) pe *= sm.cfg.p;
  auto rand_heis = [&]() {
    Vec w(n, Rat(0));
    for (long i = 0; i < sm.Lstar.basis.rows; ++i)
      w = w + scaled(sm.Lstar.basis.row(i), Rat(pick(-1, 1)));
    Rat t = Rat(pick(-3, 3), pe);
    return HeisElem{w, t};
  };
  Vec zero(n, Rat(0));
  BigFun probe = pi_act(sm, HeisElem{sm.Lstar.basis.row(0), Rat(0)}, s_fun(sm, zero));
  // Normalized operators M-hat[g] = M[g] / mu_0, matching the normalized
  // cocycle: pi([x, h]) f = x.t * M-hat[x.g] pi(h) f.
  Rat mu0 = m_one_scalar(ctx);
  auto act = [&](const MpElem& x, const HeisElem& h, const BigFun& f) {
    return big_scale(m_apply(ctx.big(), x.g, pi_act(sm, h, f), ctx.trunc()),
                     x.t.scaled(Rat(1) / mu0));
  };
  RepCheckReport rep;
  for (long s = 0; s < samples; ++s) {
    MpElem x1{pool[pick(0, static_cast<long>(pool.size()) - 1)],
              Cyc::root_of_unity(Rat(pick(0, 7), 8))};
    MpElem x2{pool[pick(0, static_cast<long>(pool.size()) - 1)],
              Cyc::root_of_unity(Rat(pick(0, 7), 8))};
    HeisElem h1 = rand_heis(), h2 = rand_heis();
    BigFun lhs = act(x1, h1, act(x2, h2, probe));
    CocycleValue c = cocycle(x1.g, x2.g, ctx);
    MpElem x12 = mp_mul(x1, x2, ctx);
    HeisElem h1g2{h1.w * x2.g, h1.t};
    HeisElem hprod = heis_mul(h1g2, h2);
    BigFun rhs = big_scale(act(x12, hprod, probe), cyc_sqrt(c.radicand).scaled(c.magnitude));
    ++rep.total;
    if (c.magnitude != 1 || c.radicand != 1) ++rep.magnitude_nontrivial;
    if (big_eq(lhs, rhs)) {
      ++rep.passed;
    } else {
      std::ostringstream os;
      os << "sample " << s << ": product rule failed for g1 = " << mat_key(x1.g)
         << ", g2 = " << mat_key(x2.g);
      rep.failures.push_back(os.str());
    }
  }
  return rep;
}

long component_count(const SmallModel& sm) {
  if (!sm.has_l1_data)
    throw std::invalid_argument("component_count: model lacks L_1 character data");
  long n = sm.Lstar.basis.cols;
  std::vector<SmallOp> gens;
  for (long i = 0; i < sm.Lstar.basis.rows; ++i)
    gens.push_back(sigma_op(sm, HeisElem{sm.Lstar.basis.row(i), Rat(0)}));
  for (long i = 0; i < sm.L1.basis.rows; ++i) gens.push_back(v_op(sm, sm.L1.basis.row(i)));
  long count = commutant_dim(gens);
  if (Int(count) * count != sm.q.index)
    throw std::logic_error("component_count: count does not square to [L*:L]");
  // Central character: sigma(0, t) acts by psi(t) on every chi-component.
  Vec zero(n, Rat(0));
  std::vector<Rat> ts;
  if (sm.cfg.mode == Mode::PADIC) {
    Int pe = 1;
    for (long i = 0; i <= sm.cfg.e; ++i) pe *= sm.cfg.p;
    ts = {Rat(1, pe), Rat(1)};
  } else {
    ts = {Rat(1, 8), Rat(1, 4)};
  }
  std::vector<DualCharacter> chars = all_characters(sm.q1);
  for (const Rat& t : ts) {
    SmallOp central = sigma_op(sm, HeisElem{zero, t});
    Cyc expected = psi_eval(sm.cfg, t);
    auto sc = central.as_scalar();
    if (!sc || *sc != expected)
      throw std::logic_error("component_count: central character is not psi");
    for (const DualCharacter& chi : {chars.front(), chars.back()}) {
      std::vector<SmallVec> basis = op_image_basis(chi_projector(sm, chi));
      auto rsc = restrict_op(central, basis).as_scalar();
      if (!rsc || *rsc != expected)
        throw std::logic_error("component_count: central character fails on a component");
    }
  }
  return count;
}

}  // namespace lw
