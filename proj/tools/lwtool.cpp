// Command-line front end: JSON reports for the lattice-model toolkit.
//
// Subcommands: dual-lattice, sigma-matrix, intertwiner, mg-matrix, cocycle,
// iwahori-decompose, bruhat-f2, verify. Output is a single JSON document on
// stdout (byte-stable for a fixed config and seed) with a human summary on
// stderr. Exit codes: 0 success, 1 property failure, 2 usage error.
#include "CLI11.hpp"
#include "json.hpp"

#include "lw/big_model.hpp"
#include "lw/cocycle.hpp"
#include "lw/heisenberg.hpp"
#include "lw/iwahori.hpp"
#include "lw/lattice.hpp"
#include "lw/small_model.hpp"

#include <fstream>
#include <iostream>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

using json = nlohmann::ordered_json;
using namespace lw;

namespace {

struct RunConfig {
  std::string mode = "I";  // I | II | real
  long p = 3;
  long e = 0;
  std::string kappa = "1";
  long m = 1;
  std::string d_L;  // comma-separated rationals, row major; empty = identity
  long trunc = -1;
  long cap = 10000;
  std::uint64_t seed = 1;
  std::string measure = "mu(Lstar)=1";
};

Rat parse_rat(const std::string& s) {
  auto trim = [](std::string t) {
    while (!t.empty() && std::isspace(static_cast<unsigned char>(t.front()))) t.erase(t.begin());
    while (!t.empty() && std::isspace(static_cast<unsigned char>(t.back()))) t.pop_back();
    return t;
  };
  std::string t = trim(s);
  if (t.empty()) throw std::invalid_argument("empty rational literal");
  std::size_t slash = t.find('/');
  if (slash == std::string::npos) return Rat(Int(t));
  Int num(trim(t.substr(0, slash)));
  Int den(trim(t.substr(slash + 1)));
  if (den == 0) throw std::invalid_argument("zero denominator in rational literal");
  return Rat(num) / Rat(den);
}

std::vector<Rat> parse_rat_list(const std::string& csv) {
  std::vector<Rat> out;
  std::stringstream ss(csv);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(parse_rat(item));
  return out;
}

Mat parse_square_mat(const std::string& csv) {
  std::vector<Rat> entries = parse_rat_list(csv);
  long n = 0;
  while (n * n < static_cast<long>(entries.size())) ++n;
  if (n * n != static_cast<long>(entries.size()))
    throw std::invalid_argument("matrix entry count is not a perfect square");
  Mat g(n, n);
  for (long i = 0; i < n; ++i)
    for (long j = 0; j < n; ++j) g(i, j) = entries[i * n + j];
  return g;
}

Vec parse_vec(const std::string& csv) {
  std::vector<Rat> entries = parse_rat_list(csv);
  return Vec(entries.begin(), entries.end());
}

json vec_json(const Vec& v) {
  json a = json::array();
  for (const Rat& x : v) a.push_back(rat_to_string(x));
  return a;
}

json mat_json(const Mat& g) {
  json rows = json::array();
  for (long i = 0; i < g.rows; ++i) {
    json r = json::array();
    for (long j = 0; j < g.cols; ++j) r.push_back(rat_to_string(g(i, j)));
    rows.push_back(r);
  }
  return rows;
}

json f2_json(const F2Mat& g) {
  json rows = json::array();
  for (long i = 0; i < g.n; ++i) {
    json r = json::array();
    for (long j = 0; j < g.n; ++j) r.push_back(static_cast<int>(g(i, j)));
    rows.push_back(r);
  }
  return rows;
}

json op_json(const SmallOp& a) {
  SmallOp d = a.densified();
  json entries = json::array();
  for (long i = 0; i < d.n; ++i) {
    json row = json::array();
    for (long j = 0; j < d.n; ++j) row.push_back(d.at(i, j).to_string());
    entries.push_back(row);
  }
  return json{{"dim", d.n}, {"entries", entries}};
}

json bigfun_json(const BigFun& f) {
  json supp = json::array();
  for (const auto& [w, v] : f.supp) {
    json vals = json::array();
    for (const Cyc& c : v) vals.push_back(c.to_string());
    supp.push_back(json{{"w", vec_json(w)}, {"value", vals}});
  }
  return supp;
}

json weyl_affine_json(const WeylAffineElem& w) {
  return json{{"s", w.s}, {"S", std::vector<long>(w.S.begin(), w.S.end())}, {"k", w.k}};
}

CharConfig char_config(const RunConfig& rc) {
  if (rc.mode == "I") return CharConfig::padic(Int(rc.p), rc.e);
  if (rc.mode == "II") {
    if (rc.p != 2) throw std::invalid_argument("mode II requires p = 2");
    return CharConfig::padic(Int(2), rc.e);
  }
  if (rc.mode == "real") {
    Rat kappa = parse_rat(rc.kappa);
    if (kappa != 1 && kappa != -1) throw std::invalid_argument("real mode requires kappa in {1, -1}");
    return CharConfig::real(kappa);
  }
  throw std::invalid_argument("unknown mode: " + rc.mode);
}

Mat d_L_matrix(const RunConfig& rc) {
  if (rc.d_L.empty()) return Mat::identity(2 * rc.m);
  Mat d = parse_square_mat(rc.d_L);
  if (d.rows != 2 * rc.m) throw std::invalid_argument("d_L size does not match 2m");
  return d;
}

json config_json(const RunConfig& rc) {
  json j{{"mode", rc.mode}, {"m", rc.m}, {"seed", rc.seed}, {"measure", rc.measure}};
  if (rc.mode == "real") {
    j["kappa"] = rc.kappa;
  } else {
    j["p"] = rc.mode == "II" ? 2 : rc.p;
    j["e"] = rc.e;
  }
  if (!rc.d_L.empty()) j["d_L"] = mat_json(parse_square_mat(rc.d_L));
  return j;
}

void load_config_file(RunConfig& rc, const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open config file: " + path);
  json j = json::parse(in);
  if (j.contains("mode")) rc.mode = j["mode"].get<std::string>();
  if (j.contains("p")) rc.p = j["p"].get<long>();
  if (j.contains("e")) rc.e = j["e"].get<long>();
  if (j.contains("kappa")) rc.kappa = j["kappa"].get<std::string>();
  if (j.contains("m")) rc.m = j["m"].get<long>();
  if (j.contains("d_L")) rc.d_L = j["d_L"].get<std::string>();
  if (j.contains("trunc")) rc.trunc = j["trunc"].get<long>();
  if (j.contains("cap")) rc.cap = j["cap"].get<long>();
  if (j.contains("seed")) rc.seed = j["seed"].get<std::uint64_t>();
}

void emit(const json& j) { std::cout << j.dump(2) << "\n"; }

long rand_long(std::mt19937_64& r, long lo, long hi) {
  return std::uniform_int_distribution<long>(lo, hi)(r);
}

Rat rand_p_rat(std::mt19937_64& r, long p, long max_num, long max_dpow) {
  long num = rand_long(r, -max_num, max_num);
  long pk = 1;
  for (long i = 0, ub = rand_long(r, 0, max_dpow); i < ub; ++i) pk *= p;
  return Rat(num, pk);
}

Vec rand_lattice_vec(std::mt19937_64& r, const Lattice& L, long bound) {
  Vec v(L.dim(), Rat(0));
  for (long i = 0; i < L.dim(); ++i)
    v = v + scaled(L.basis.row(i), Rat(rand_long(r, -bound, bound)));
  return v;
}

// --- subcommands ----------------------------------------------------------

int cmd_dual_lattice(const RunConfig& rc) {
  CharConfig cfg = char_config(rc);
  Mat d = d_L_matrix(rc);
  Lattice L = special_sublattice(d, cfg);
  Lattice Ls = dual_lattice(L, cfg);
  json j{{"command", "dual-lattice"},
         {"config", config_json(rc)},
         {"L", mat_json(L.basis)},
         {"Lstar", mat_json(Ls.basis)},
         {"self_dual", lattice_eq(L, Ls)}};
  emit(j);
  std::cerr << "dual-lattice: [L*:L] computed, self_dual=" << (lattice_eq(L, Ls) ? "yes" : "no")
            << "\n";
  return 0;
}

int cmd_sigma_matrix(const RunConfig& rc, const std::string& w_csv, const std::string& t_str) {
  CharConfig cfg = char_config(rc);
  SmallModel sm = make_small_model(d_L_matrix(rc), cfg, Int(rc.cap));
  HeisElem h{parse_vec(w_csv), parse_rat(t_str)};
  if (static_cast<long>(h.w.size()) != 2 * rc.m) throw std::invalid_argument("w size does not match 2m");
  SmallOp op = sigma_op(sm, h);
  json j{{"command", "sigma-matrix"},
         {"config", config_json(rc)},
         {"w", vec_json(h.w)},
         {"t", rat_to_string(h.t)},
         {"operator", op_json(op)}};
  emit(j);
  std::cerr << "sigma-matrix: dim " << sm.dim << "\n";
  return 0;
}

int cmd_intertwiner(const RunConfig& rc, long chi1, long chi2) {
  CharConfig cfg = char_config(rc);
  SmallModel sm = make_small_model(d_L_matrix(rc), cfg, Int(rc.cap));
  if (!sm.has_l1_data) throw std::invalid_argument("intertwiner: L must lie inside L_1");
  std::vector<DualCharacter> chars = all_characters(sm.q1);
  long n = static_cast<long>(chars.size());
  if (chi1 < 0 || chi1 >= n || chi2 < 0 || chi2 >= n)
    throw std::invalid_argument("character index out of range [0, " + std::to_string(n) + ")");
  SmallOp op = intertwiner_A(sm, chars[chi1], chars[chi2]);
  json j{{"command", "intertwiner"},
         {"config", config_json(rc)},
         {"chi1", {{"index", chi1}, {"ystar", vec_json(chars[chi1].ystar)}}},
         {"chi2", {{"index", chi2}, {"ystar", vec_json(chars[chi2].ystar)}}},
         {"operator", op_json(op)}};
  emit(j);
  std::cerr << "intertwiner: dim " << sm.dim << ", " << n << " characters\n";
  return 0;
}

int cmd_mg_matrix(const RunConfig& rc, const std::string& g_csv) {
  CharConfig cfg = char_config(rc);
  Mat g = parse_square_mat(g_csv);
  if (g.rows != 2 * rc.m) throw std::invalid_argument("g size does not match 2m");
  BigContext ctx = make_big_context(d_L_matrix(rc), cfg, Int(rc.cap));
  json j{{"command", "mg-matrix"}, {"config", config_json(rc)}, {"g", mat_json(g)},
         {"plan", m_plan(ctx, g)}};
  if (cfg.mode == Mode::REAL) {
    j["note"] = "real mode: composition plan only";
    emit(j);
    std::cerr << "mg-matrix: plan emitted (real mode)\n";
    return 0;
  }
  TruncationCfg trunc;
  trunc.N = rc.trunc;
  // Probe basis: the chi-covariant vector at 0 and its Heisenberg translates
  // by the rows of L*; the images determine M[g] on the span.
  DualCharacter chi0{Vec(2 * rc.m, Rat(0))};
  BigFun f0 = s_chi_fun(ctx.base, Vec(2 * rc.m, Rat(0)), chi0);
  json probes = json::array();
  for (long i = -1; i < 2 * rc.m; ++i) {
    BigFun probe = i < 0 ? f0 : pi_act(ctx.base, HeisElem{ctx.base.Lstar.basis.row(i), Rat(0)}, f0);
    BigFun image = m_apply(ctx, g, probe, trunc);
    std::string label = i < 0 ? "s_chi(0)" : "pi(Lstar_row_" + std::to_string(i) + ") s_chi(0)";
    probes.push_back(json{{"probe", label}, {"image", bigfun_json(image)}});
  }
  j["trunc"] = rc.trunc;
  j["probes"] = probes;
  emit(j);
  std::cerr << "mg-matrix: " << probes.size() << " probe images\n";
  return 0;
}

int cmd_cocycle(const RunConfig& rc, const std::string& g_csv, const std::string& gp_csv) {
  CharConfig cfg = char_config(rc);
  Mat g = parse_square_mat(g_csv);
  Mat gp = parse_square_mat(gp_csv);
  if (g.rows != 2 * rc.m || gp.rows != 2 * rc.m)
    throw std::invalid_argument("matrix size does not match 2m");
  BigContext big = make_big_context(d_L_matrix(rc), cfg, Int(rc.cap));
  TruncationCfg trunc;
  trunc.N = rc.trunc;
  CocycleCtx ctx(big, trunc);
  CocycleValue c = cocycle(g, gp, ctx);
  json j{{"command", "cocycle"},
         {"config", config_json(rc)},
         {"g", mat_json(g)},
         {"gp", mat_json(gp)},
         {"magnitude", c.magnitude_string()},
         {"phase", c.phase.to_string()},
         {"convention", c.convention}};
  emit(j);
  std::cerr << "cocycle: |c| = " << c.magnitude_string() << "\n";
  return 0;
}

int cmd_iwahori_decompose(const std::string& g_csv) {
  Mat g = parse_square_mat(g_csv);
  IwahoriFactorization fac = iwahori_decompose(g);
  json j{{"command", "iwahori-decompose"},
         {"g", mat_json(g)},
         {"i1", mat_json(fac.i1)},
         {"w", weyl_affine_json(fac.w)},
         {"w_matrix", mat_json(fac.w.mat())},
         {"i2", mat_json(fac.i2)},
         {"i1_mod_2", f2_json(f2_reduce(fac.i1))},
         {"i2_mod_2", f2_json(f2_reduce(fac.i2))},
         {"certificate", fac.certificate}};
  emit(j);
  std::cerr << "iwahori-decompose: certificate=" << (fac.certificate ? "ok" : "FAILED") << "\n";
  return fac.certificate ? 0 : 1;
}

int cmd_bruhat_f2(long m, bool exhaustive, const std::string& g_csv) {
  if (!exhaustive) {
    if (g_csv.empty()) throw std::invalid_argument("bruhat-f2 needs --g or --exhaustive");
    Mat gq = parse_square_mat(g_csv);
    F2Mat g = f2_reduce(gq);
    BruhatF2 dec = bruhat_f2(g);
    bool ok = f2_mul(f2_mul(dec.b1, f2_reduce(dec.omega.mat())), dec.b2) == g;
    json j{{"command", "bruhat-f2"},
           {"g", f2_json(g)},
           {"b1", f2_json(dec.b1)},
           {"omega", {{"s", dec.omega.s}, {"S", std::vector<long>(dec.omega.S.begin(), dec.omega.S.end())}}},
           {"b2", f2_json(dec.b2)},
           {"product_ok", ok}};
    emit(j);
    std::cerr << "bruhat-f2: product_ok=" << (ok ? "yes" : "no") << "\n";
    return ok ? 0 : 1;
  }
  // Exhaustive partition report: enumerate Sp_{2m}(F_2) as B w B products,
  // then verify every element lands in exactly one double coset.
  const auto& borel = borel_f2_list(m);
  const auto& weyl = weyl_list(m);
  std::set<F2Mat> seen;
  std::vector<F2Mat> group;
  for (const WeylLabel& w : weyl) {
    F2Mat wm = f2_reduce(w.mat());
    for (const F2Mat& b1 : borel)
      for (const F2Mat& b2 : borel) {
        F2Mat g = f2_mul(f2_mul(b1, wm), b2);
        if (seen.insert(g).second) group.push_back(g);
      }
  }
  std::map<std::string, long> cells;
  bool unique_ok = true;
  for (const F2Mat& g : group) {
    long hits = 0;
    for (const WeylLabel& w : weyl) {
      F2Mat winv = f2_sp_inverse(f2_reduce(w.mat()));
      bool in_cell = false;
      for (const F2Mat& b1 : borel) {
        if (f2_in_borel(f2_mul(f2_mul(winv, f2_sp_inverse(b1)), g))) {
          in_cell = true;
          break;
        }
      }
      if (in_cell) ++hits;
    }
    if (hits != 1) unique_ok = false;
    BruhatF2 dec = bruhat_f2(g);
    std::ostringstream key;
    key << "s=[";
    for (std::size_t i = 0; i < dec.omega.s.size(); ++i)
      key << (i ? "," : "") << dec.omega.s[i];
    key << "] S={";
    bool first = true;
    for (long x : dec.omega.S) {
      key << (first ? "" : ",") << x;
      first = false;
    }
    key << "}";
    ++cells[key.str()];
  }
  long total = static_cast<long>(group.size());
  long cell_sum = 0;
  json cell_arr = json::array();
  for (const auto& [k, v] : cells) {
    cell_arr.push_back(json{{"omega", k}, {"size", v}});
    cell_sum += v;
  }
  bool ok = unique_ok && cell_sum == total;
  json j{{"command", "bruhat-f2"},
         {"m", m},
         {"exhaustive", true},
         {"total", total},
         {"cells", cell_arr},
         {"each_in_exactly_one_cell", unique_ok},
         {"partition_ok", ok}};
  emit(j);
  std::cerr << "bruhat-f2: " << total << " elements, " << cells.size() << " cells, partition "
            << (ok ? "ok" : "FAILED") << "\n";
  return ok ? 0 : 1;
}

// --- verify ----------------------------------------------------------------

struct Suite {
  std::string name;
  long checks = 0;
  std::vector<std::string> failures;
  void require(bool ok, const std::string& what) {
    ++checks;
    if (!ok) failures.push_back(what);
  }
};

int cmd_verify(const RunConfig& rc) {
  CharConfig cfg = char_config(rc);
  std::mt19937_64 r(rc.seed);
  long p = cfg.mode == Mode::PADIC ? static_cast<long>(cfg.p) : 2;
  std::vector<Suite> suites;

  {
    Suite s{"psi-additivity"};
    for (int i = 0; i < 200; ++i) {
      Rat x = rand_p_rat(r, p, 40, 3), y = rand_p_rat(r, p, 40, 3);
      s.require(psi_eval(cfg, x + y) == psi_eval(cfg, x) * psi_eval(cfg, y),
                "psi(x+y) != psi(x)psi(y) at x=" + rat_to_string(x) + ", y=" + rat_to_string(y));
    }
    suites.push_back(std::move(s));
  }

  SmallModel sm = make_small_model(d_L_matrix(rc), cfg, Int(rc.cap));
  {
    Suite s{"sigma-representation-law"};
    for (int i = 0; i < 50; ++i) {
      HeisElem h1{rand_lattice_vec(r, sm.Lstar, 2), rand_p_rat(r, p, 10, 1)};
      HeisElem h2{rand_lattice_vec(r, sm.Lstar, 2), rand_p_rat(r, p, 10, 1)};
      s.require(sigma_op(sm, h1) * sigma_op(sm, h2) == sigma_op(sm, heis_mul(h1, h2)),
                "sigma(h1)sigma(h2) != sigma(h1 h2), sample " + std::to_string(i));
    }
    suites.push_back(std::move(s));
  }
  {
    Suite s{"sigma-central-and-lattice-scalars"};
    DualCharacter triv{Vec(sm.L.dim(), Rat(0))};
    for (int i = 0; i < 20; ++i) {
      Rat t = rand_p_rat(r, p, 10, 2);
      auto sc = sigma_op(sm, HeisElem{Vec(sm.L.dim(), Rat(0)), t}).as_scalar();
      s.require(sc && *sc == psi_eval(cfg, t), "sigma(0,t) != psi(t) id at t=" + rat_to_string(t));
      Vec l = rand_lattice_vec(r, sm.L, 2);
      auto sl = sigma_op(sm, HeisElem{l, Rat(0)}).as_scalar();
      Cyc expected = psi_L_chi(HeisElem{l, Rat(0)}, sm.L, triv, cfg, sm.case_two);
      s.require(sl && *sl == expected, "sigma(l,0) scalar mismatch, sample " + std::to_string(i));
    }
    suites.push_back(std::move(s));
  }
  {
    Suite s{"component-count"};
    long count = component_count(sm);
    s.require(Int(count) * Int(count) == sm.q.index,
              "component count " + std::to_string(count) + " is not sqrt[L*:L]");
    suites.push_back(std::move(s));
  }
  if (sm.has_l1_data) {
    Suite s{"intertwiner-equivariance"};
    std::vector<DualCharacter> chars = all_characters(sm.q1);
    const DualCharacter& c1 = chars.front();
    const DualCharacter& c2 = chars.back();
    SmallOp p1 = chi_projector(sm, c1);
    SmallOp a12 = intertwiner_A(sm, c1, c2);
    for (int i = 0; i < 10; ++i) {
      HeisElem h{rand_lattice_vec(r, sm.Lstar, 2), rand_p_rat(r, p, 10, 1)};
      SmallOp sig = sigma_op(sm, h);
      s.require(((a12 * sig - sig * a12) * p1).is_zero(),
                "A sigma(h) != sigma(h) A on the chi_1 component, sample " + std::to_string(i));
    }
    suites.push_back(std::move(s));
  }

  if (cfg.mode == Mode::PADIC) {
    BigContext big = make_big_context(d_L_matrix(rc), cfg, Int(rc.cap));
    TruncationCfg trunc;
    trunc.N = rc.trunc;
    CocycleCtx ctx(big, trunc);
    Mat one = Mat::identity(2 * rc.m);
    std::vector<Mat> pool{one};
    {
      // Generator pool: J, an upper and a lower elementary unipotent, -1.
      Mat w(2 * rc.m, 2 * rc.m), nu = one, nl = one, neg = scaled(one, Rat(-1));
      for (long i = 0; i < rc.m; ++i) {
        w(i, rc.m + i) = 1;
        w(rc.m + i, i) = -1;
        nu(i, rc.m + i) = 1;
        nl(rc.m + i, i) = p;
      }
      pool.push_back(w);
      pool.push_back(nu);
      pool.push_back(nl);
      pool.push_back(neg);
    }
    // Extraction cost grows with the model dimension (each cocycle value
    // needs ~18 integral-operator applications); scale the sampled counts.
    bool small_dim = sm.dim <= 16;
    long n_norm = small_dim ? static_cast<long>(pool.size()) - 1 : 2;
    long n_triples = small_dim ? 5 : 2;
    long n_rep = small_dim ? 10 : 3;
    {
      Suite s{"cocycle-normalization-and-identity"};
      for (long i = 1; i <= n_norm; ++i) {
        CocycleValue left = cocycle(one, pool[i], ctx);
        CocycleValue right = cocycle(pool[i], one, ctx);
        s.require(left.magnitude == 1 && left.phase == Cyc::one(),
                  "c(1,g) != 1 for pool element " + std::to_string(i));
        s.require(right.magnitude == 1 && right.phase == Cyc::one(),
                  "c(g,1) != 1 for pool element " + std::to_string(i));
      }
      for (long trial = 0; trial < n_triples; ++trial) {
        Mat g1 = pool[rand_long(r, 0, static_cast<long>(pool.size()) - 1)];
        Mat g2 = pool[rand_long(r, 0, static_cast<long>(pool.size()) - 1)];
        Mat g3 = pool[rand_long(r, 0, static_cast<long>(pool.size()) - 1)];
        Cyc lhs = cocycle(g1, g2, ctx).value() * cocycle(g1 * g2, g3, ctx).value();
        Cyc rhs = cocycle(g1, g2 * g3, ctx).value() * cocycle(g2, g3, ctx).value();
        s.require(lhs == rhs && !lhs.is_zero(), "cocycle identity fails, triple " + std::to_string(trial));
      }
      suites.push_back(std::move(s));
    }
    {
      Suite s{"representation-check"};
      RepCheckReport rep = rep_check(n_rep, ctx, rc.seed);
      s.require(rep.passed == rep.total, "rep_check passed " + std::to_string(rep.passed) + "/" +
                                             std::to_string(rep.total));
      for (const std::string& f : rep.failures) s.failures.push_back("rep_check: " + f);
      suites.push_back(std::move(s));
    }
  }

  json suite_arr = json::array();
  bool all_ok = true;
  long total_checks = 0;
  for (const Suite& s : suites) {
    suite_arr.push_back(json{{"name", s.name},
                             {"checks", s.checks},
                             {"passed", s.failures.empty()},
                             {"failures", s.failures}});
    all_ok = all_ok && s.failures.empty();
    total_checks += s.checks;
    std::cerr << (s.failures.empty() ? "PASS " : "FAIL ") << s.name << " (" << s.checks
              << " checks)\n";
  }
  json j{{"command", "verify"},
         {"config", config_json(rc)},
         {"suites", suite_arr},
         {"total_checks", total_checks},
         {"all_passed", all_ok}};
  emit(j);
  return all_ok ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  RunConfig rc;
  // Pre-scan for --config so flags given on the command line override it.
  for (int i = 1; i + 1 < argc; ++i)
    if (std::string(argv[i]) == "--config") {
      try {
        load_config_file(rc, argv[i + 1]);
      } catch (const std::exception& ex) {
        std::cerr << "error: " << ex.what() << "\n";
        return 2;
      }
    }

  CLI::App app{"Exact lattice models of the Heisenberg-Weil representation"};
  app.require_subcommand(1);
  std::string config_path;
  app.add_option("--config", config_path, "JSON config file (flags override)");
  app.add_option("--mode", rc.mode, "I, II or real")->check(CLI::IsMember({"I", "II", "real"}));
  app.add_option("--p", rc.p, "prime (finite modes)");
  app.add_option("--e", rc.e, "character level");
  app.add_option("--kappa", rc.kappa, "real-mode character parameter (1 or -1)");
  app.add_option("--m", rc.m, "rank (W = F^{2m})")->check(CLI::Range(1L, 3L));
  app.add_option("--d-L", rc.d_L, "block-diagonal d_L, row-major comma-separated rationals");
  app.add_option("--trunc", rc.trunc, "integral sampling depth N (-1 = automatic)");
  app.add_option("--cap", rc.cap, "quotient enumeration cap")->check(CLI::PositiveNumber);
  app.add_option("--seed", rc.seed, "PRNG seed for sampled suites");
  app.fallthrough();

  auto* c_dual = app.add_subcommand("dual-lattice", "L = L_1 d_L and its dual L*");
  auto* c_sigma = app.add_subcommand("sigma-matrix", "sigma(w, t) on the small model");
  std::string w_csv, t_str = "0";
  c_sigma->add_option("--w", w_csv, "Heisenberg vector, comma-separated")->required();
  c_sigma->add_option("--t", t_str, "central coordinate");
  auto* c_int = app.add_subcommand("intertwiner", "A_{chi1,chi2} on the small model");
  long chi1 = 0, chi2 = 0;
  c_int->add_option("--chi1", chi1, "index of chi_1")->required();
  c_int->add_option("--chi2", chi2, "index of chi_2")->required();
  auto* c_mg = app.add_subcommand("mg-matrix", "M[g] on a probe basis of the big model");
  std::string g_csv, gp_csv;
  c_mg->add_option("--g", g_csv, "symplectic g, row-major comma-separated")->required();
  auto* c_coc = app.add_subcommand("cocycle", "metaplectic cocycle c(g, g')");
  c_coc->add_option("--g", g_csv, "first factor")->required();
  c_coc->add_option("--gp", gp_csv, "second factor")->required();
  auto* c_iw = app.add_subcommand("iwahori-decompose", "A = i1 w i2 over the Iwahori subgroup");
  c_iw->add_option("--g", g_csv, "rational symplectic matrix")->required();
  auto* c_br = app.add_subcommand("bruhat-f2", "Bruhat decomposition over F_2");
  bool exhaustive = false;
  c_br->add_option("--g", g_csv, "2-integral matrix, reduced mod 2");
  c_br->add_flag("--exhaustive", exhaustive, "partition report over all of Sp_{2m}(F_2)");
  auto* c_ver = app.add_subcommand("verify", "run the property suites");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (c_dual->parsed()) return cmd_dual_lattice(rc);
    if (c_sigma->parsed()) return cmd_sigma_matrix(rc, w_csv, t_str);
    if (c_int->parsed()) return cmd_intertwiner(rc, chi1, chi2);
    if (c_mg->parsed()) return cmd_mg_matrix(rc, g_csv);
    if (c_coc->parsed()) return cmd_cocycle(rc, g_csv, gp_csv);
    if (c_iw->parsed()) return cmd_iwahori_decompose(g_csv);
    if (c_br->parsed()) return cmd_bruhat_f2(rc.m, exhaustive, g_csv);
    if (c_ver->parsed()) return cmd_verify(rc);
  } catch (const std::invalid_argument& ex) {
    std::cerr << "usage error: " << ex.what() << "\n";
    return 2;
  } catch (const std::domain_error& ex) {
    std::cerr << "usage error: " << ex.what() << "\n";
    return 2;
  } catch (const std::exception& ex) {
    std::cerr << "property failure: " << ex.what() << "\n";
    return 1;
  }
  return 2;
}
