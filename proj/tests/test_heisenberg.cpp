#include "doctest.h"

#include "lw/heisenberg.hpp"

#include "test_util.hpp"

#include <set>

using namespace lw;

namespace {

HeisElem mk(const Vec& w, const Rat& t, HeisForm f = HeisForm::Std) {
  HeisElem h;
  h.w = w;
  h.t = t;
  h.form = f;
  return h;
}

}  // namespace

TEST_CASE("Heisenberg group laws") {
  auto r = lwtest::rng(1001);
  for (HeisForm f : {HeisForm::Std, HeisForm::B}) {
    for (int k = 0; k < 100; ++k) {
      long m = lwtest::rand_long(r, 1, 2);
      HeisElem a = mk(lwtest::rand_vec(r, 2 * m, 2), lwtest::rand_rat(r), f);
      HeisElem b = mk(lwtest::rand_vec(r, 2 * m, 2), lwtest::rand_rat(r), f);
      HeisElem c = mk(lwtest::rand_vec(r, 2 * m, 2), lwtest::rand_rat(r), f);
      // Associativity.
      HeisElem lhs = heis_mul(heis_mul(a, b), c);
      HeisElem rhs = heis_mul(a, heis_mul(b, c));
      CHECK(lhs.w == rhs.w);
      CHECK(lhs.t == rhs.t);
      // Inverses.
      HeisElem e = heis_mul(a, heis_inv(a));
      CHECK(is_zero_vec(e.w));
      CHECK(e.t == 0);
    }
  }
  // Central elements commute and collect t.
  Vec w{Rat(1), Rat(2)};
  HeisElem z = mk(Vec{Rat(0), Rat(0)}, Rat(5, 7));
  HeisElem h = mk(w, Rat(0));
  CHECK(heis_mul(z, h).t == Rat(5, 7));
  CHECK(heis_mul(h, z).t == Rat(5, 7));
  CHECK(heis_mul(h, heis_inv(h)).t == 0);
  // Commutator of (w,0),(w',0) is (0, <w,w'>).
  auto r2 = lwtest::rng(1002);
  for (int k = 0; k < 50; ++k) {
    HeisElem a = mk(lwtest::rand_vec(r2, 4, 3), Rat(0));
    HeisElem b = mk(lwtest::rand_vec(r2, 4, 3), Rat(0));
    HeisElem comm = heis_mul(heis_mul(a, b), heis_mul(heis_inv(a), heis_inv(b)));
    CHECK(is_zero_vec(comm.w));
    CHECK(comm.t == sym_pair(a.w, b.w));
  }
}

TEST_CASE("alpha_B is a homomorphism on the Heisenberg part") {
  auto r = lwtest::rng(1003);
  for (int k = 0; k < 100; ++k) {
    long m = lwtest::rand_long(r, 1, 2);
    HeisElem a = mk(lwtest::rand_vec(r, 2 * m, 2), lwtest::rand_rat(r));
    HeisElem b = mk(lwtest::rand_vec(r, 2 * m, 2), lwtest::rand_rat(r));
    Mat id = Mat::identity(2 * m);
    HeisElem lhs = alpha_b(id, heis_mul(a, b)).hb;
    HeisElem rhs = heis_mul(alpha_b(id, a).hb, alpha_b(id, b).hb);
    CHECK(lhs.w == rhs.w);
    CHECK(lhs.t == rhs.t);
  }
  // Identity pair maps to the identity pair.
  HeisElem e = mk(Vec{Rat(0), Rat(0)}, Rat(0));
  AlphaB img = alpha_b(Mat::identity(2), e);
  CHECK(is_zero_vec(img.hb.w));
  CHECK(img.hb.t == 0);
  // Ps action consistency: conjugation by (g, q_g) moves (w,t) to
  // (wg, t + q_g(w)) in the B-twisted group.
  auto r2 = lwtest::rng(1004);
  for (int k = 0; k < 50; ++k) {
    Mat g = weyl_element(1, {0}, lwtest::rand_long(r2, 0, 1) ? std::set<long>{0}
                                                             : std::set<long>{});
    Vec w = lwtest::rand_vec(r2, 2, 2);
    Rat t = lwtest::rand_rat(r2);
    // Direct check of the displayed action law.
    Rat moved_t = t + q_form(g, w);
    Vec moved_w = w * g;
    // The action law composes like the group: ((w,t).g1).g2 = (w,t).(g1 g2).
    Mat g2 = weyl_element(1, {0}, {0});
    Rat t12 = moved_t + q_form(g2, moved_w);
    Rat t_glued = t + q_form(g * g2, w);
    CHECK(t12 == t_glued);
    CHECK(moved_w * g2 == w * (g * g2));
  }
}

TEST_CASE("character dictionary chi <-> y*") {
  CharConfig cfg = CharConfig::padic(3, 0);
  Lattice L1 = standard_L1(1, cfg);
  Lattice L = lattice_scale(L1, 3);
  Lattice Ls = dual_lattice(L, cfg);
  CosetList l1_mod_l = quotient_enum(L1, L);
  QuotientData ls_mod_l1 = quotient_data(Ls, L1);
  CHECK(l1_mod_l.reps.size() == 9);
  CHECK(ls_mod_l1.index == 9);

  std::vector<DualCharacter> chars = all_characters(ls_mod_l1);
  CHECK(chars.size() == 9);

  // Distinctness: the value tables of the 9 characters are pairwise
  // different, and char_solve recovers exactly the generating y*.
  std::set<std::string> tables;
  for (const auto& chi : chars) {
    std::string tab;
    std::vector<Cyc> values;
    for (const Vec& x : l1_mod_l.reps) {
      Cyc v = char_eval(chi, x, cfg);
      values.push_back(v);
      tab += v.to_string() + ";";
    }
    tables.insert(tab);
    DualCharacter solved = char_solve(values, l1_mod_l, ls_mod_l1, cfg);
    CHECK(solved.ystar == chi.ystar);
  }
  CHECK(tables.size() == 9);

  // Multiplicativity of each chi on L_1 (descends to L_1/L).
  auto r = lwtest::rng(1103);
  for (const auto& chi : chars)
    for (int k = 0; k < 20; ++k) {
      Vec x = l1_mod_l.reps[lwtest::rand_long(r, 0, 8)];
      Vec y = l1_mod_l.reps[lwtest::rand_long(r, 0, 8)];
      CHECK(char_eval(chi, x + y, cfg) == char_eval(chi, x, cfg) * char_eval(chi, y, cfg));
      // Trivial on L.
      CHECK(char_eval(chi, x + scaled(L.basis.row(0), Rat(2)), cfg) ==
            char_eval(chi, x, cfg));
    }

  // Nondegeneracy: only the zero coset pairs trivially with every y*.
  for (const Vec& x : l1_mod_l.reps) {
    bool all_trivial = true;
    for (const auto& chi : chars)
      if (char_eval(chi, x, cfg) != Cyc::one()) all_trivial = false;
    CHECK(all_trivial == is_zero_vec(x));
  }
}

TEST_CASE("extended characters psi_{L,chi}") {
  // (0,0) -> 1 and (0,t) -> psi(t) in both cases.
  CharConfig c30 = CharConfig::padic(3, 0);
  Lattice L1 = standard_L1(1, c30);
  DualCharacter triv{Vec{Rat(0), Rat(0)}};
  CHECK(psi_L_chi(mk(Vec{Rat(0), Rat(0)}, Rat(0)), L1, triv, c30, false) == Cyc::one());
  CHECK(psi_L_chi(mk(Vec{Rat(0), Rat(0)}, Rat(2, 3)), L1, triv, c30, false) ==
        psi_eval(c30, Rat(2, 3)));

  // Case II (p=2, e=1): multiplicativity on Ha(L_1) with the B-correction.
  CharConfig c21 = CharConfig::padic(2, 1);
  Lattice M1 = standard_L1(1, c21);
  Lattice M = lattice_act(M1, scaled(Mat::identity(2), 2));
  Lattice Ms = dual_lattice(M, c21);
  QuotientData ms_mod_m1 = quotient_data(Ms, M1);
  auto r = lwtest::rng(1104);
  for (const auto& chi : all_characters(ms_mod_m1)) {
    for (int k = 0; k < 100; ++k) {
      Vec l = scaled(M1.basis.row(0), Rat(lwtest::rand_long(r, -3, 3))) +
              scaled(M1.basis.row(1), Rat(lwtest::rand_long(r, -3, 3)));
      Vec lp = scaled(M1.basis.row(0), Rat(lwtest::rand_long(r, -3, 3))) +
               scaled(M1.basis.row(1), Rat(lwtest::rand_long(r, -3, 3)));
      HeisElem a = mk(l, lwtest::rand_rat(r));
      HeisElem b = mk(lp, lwtest::rand_rat(r));
      CHECK(psi_L_chi(heis_mul(a, b), M1, chi, c21, true) ==
            psi_L_chi(a, M1, chi, c21, true) * psi_L_chi(b, M1, chi, c21, true));
    }
    // Restriction to Ha(L) equals psi_L (chi drops out).
    for (int k = 0; k < 20; ++k) {
      Vec l = scaled(M.basis.row(0), Rat(lwtest::rand_long(r, -3, 3))) +
              scaled(M.basis.row(1), Rat(lwtest::rand_long(r, -3, 3)));
      HeisElem a = mk(l, lwtest::rand_rat(r));
      CHECK(psi_L_chi(a, M1, chi, c21, true) == psi_L_chi(a, M1, triv, c21, true));
    }
  }
  // w outside the carrier is rejected.
  CHECK_THROWS(psi_L_chi(mk(Vec{Rat(1, 3), Rat(0)}, Rat(0)), L1, triv, c30, false));
}
