#include "doctest.h"

#include "lw/characters.hpp"
#include "lw/cyclotomic.hpp"
#include "lw/rat.hpp"

#include "test_util.hpp"

using namespace lw;

TEST_CASE("p-adic valuation and fractional parts") {
  CHECK(val_p(Rat(18), Int(3)) == 2);
  CHECK(val_p(Rat(5, 27), Int(3)) == -3);
  CHECK(is_p_integral(Rat(7, 10), Int(3)));
  CHECK(!is_p_integral(Rat(7, 6), Int(3)));

  // The p-fractional part r satisfies: r has p-power denominator and x - r
  // is p-integral. Check both characterizing properties on random samples.
  auto r = lwtest::rng(101);
  for (int k = 0; k < 200; ++k) {
    Int p = (k % 2 == 0) ? 2 : 3;
    Rat x = lwtest::rand_p_rat(r, p.convert_to<long>(), 50, 3);
    Rat f = p_fractional_part(x, p);
    CHECK(f >= 0);
    CHECK(f < 1);
    Int den = rat_den(f);
    while (den % p == 0) den /= p;
    CHECK(den == 1);
    CHECK(is_p_integral(x - f, p));
  }

  for (int k = 0; k < 50; ++k) {
    Rat x = lwtest::rand_rat(r, 30, 7);
    Rat f = real_fractional_part(x);
    CHECK(f >= 0);
    CHECK(f < 1);
    CHECK(is_integer(x - f));
  }
}

TEST_CASE("modular arithmetic helpers") {
  CHECK(mod_pos(Int(-7), Int(5)) == 3);
  CHECK(floor_div(Int(-7), Int(2)) == -4);
  for (long a : {1L, 2L, 4L, 7L, 8L}) {
    Int inv = mod_inverse(Int(a), Int(9));
    CHECK(mod_pos(Int(a) * inv, Int(9)) == 1);
  }
  CHECK_THROWS(mod_inverse(Int(3), Int(9)));
}

TEST_CASE("cyclotomic polynomial table") {
  CHECK(euler_phi(1) == 1);
  CHECK(euler_phi(12) == 4);
  CHECK(euler_phi(54) == 18);
  // Phi_1 = x - 1, Phi_4 = x^2 + 1, Phi_6 = x^2 - x + 1.
  CHECK(cyclotomic_poly(4) == std::vector<Rat>{1, 0, 1});
  CHECK(cyclotomic_poly(6) == std::vector<Rat>{1, -1, 1});
  // Product of Phi_d over d | n has degree n (checked via degrees).
  long total = 0;
  for (long d : {1L, 2L, 3L, 4L, 6L, 12L}) total += euler_phi(d);
  CHECK(total == 12);
}

TEST_CASE("cyclotomic arithmetic basics") {
  Cyc z = Cyc::root(5, 1);
  // 1 + z + z^2 + z^3 + z^4 = 0.
  Cyc s = Cyc::one();
  for (long k = 1; k < 5; ++k) s += Cyc::root(5, k);
  CHECK(s.is_zero());
  // z^5 = 1.
  Cyc p = Cyc::one();
  for (int i = 0; i < 5; ++i) p *= z;
  CHECK(p == Cyc::one());
  // Conjugation inverts roots of unity.
  CHECK(z.conj() == Cyc::root(5, 4));
  CHECK((z * z.conj()) == Cyc::one());
  // Inverse.
  Cyc a = Cyc::root(12, 5) + Cyc::from_rational(Rat(3, 2));
  CHECK((a * a.inverse()) == Cyc::one());
  // Rational detection.
  CHECK(Cyc::from_rational(Rat(7, 3)).as_rational() == Rat(7, 3));
  CHECK(!Cyc::root(5, 1).as_rational().has_value());
  // zeta_6 = 1 + zeta_3 (classical identity; mixed conductors).
  CHECK(Cyc::root(6, 1) == Cyc::one() + Cyc::root(3, 1));
}

TEST_CASE("root_of_unity additivity") {
  auto r = lwtest::rng(202);
  for (int k = 0; k < 100; ++k) {
    Rat a(lwtest::rand_long(r, -30, 30), lwtest::rand_long(r, 1, 24));
    Rat b(lwtest::rand_long(r, -30, 30), lwtest::rand_long(r, 1, 24));
    CHECK(Cyc::root_of_unity(a) * Cyc::root_of_unity(b) == Cyc::root_of_unity(a + b));
  }
  CHECK(Cyc::root_of_unity(Rat(1, 2)) == Cyc::from_rational(Rat(-1)));
  CHECK(Cyc::root_of_unity(Rat(0)) == Cyc::one());
}

TEST_CASE("canonical coefficients round-trip") {
  auto r = lwtest::rng(303);
  for (long n : {1L, 2L, 3L, 8L, 12L}) {
    for (int k = 0; k < 10; ++k) {
      Cyc x = Cyc::zero();
      for (int t = 0; t < 4; ++t)
        x += Cyc::root(n, lwtest::rand_long(r, 0, n - 1)).scaled(lwtest::rand_rat(r));
      auto coeffs = x.canonical_coeffs();
      CHECK(static_cast<long>(coeffs.size()) == euler_phi(n));
      CHECK(Cyc::from_canonical(n, coeffs) == x);
    }
  }
}

TEST_CASE("psi additivity and level") {
  auto r = lwtest::rng(404);
  std::vector<CharConfig> cfgs = {
      CharConfig::padic(3, 0), CharConfig::padic(3, 1), CharConfig::padic(2, 1),
      CharConfig::padic(2, 2), CharConfig::real(1), CharConfig::real(-1)};
  for (const auto& cfg : cfgs) {
    long p = cfg.mode == Mode::PADIC ? cfg.p.convert_to<long>() : 2;
    for (int k = 0; k < 200; ++k) {
      Rat x = lwtest::rand_p_rat(r, p, 30, 3);
      Rat y = lwtest::rand_p_rat(r, p, 30, 3);
      CHECK(psi_eval(cfg, x) * psi_eval(cfg, y) == psi_eval(cfg, x + y));
    }
  }
  // Level: psi is trivial exactly on p^e Z_(p).
  for (const auto& cfg : {CharConfig::padic(3, 0), CharConfig::padic(3, 1),
                          CharConfig::padic(2, 1), CharConfig::padic(2, 2)}) {
    Rat pe = 1;
    for (long i = 0; i < cfg.e; ++i) pe *= Rat(cfg.p);
    CHECK(psi_trivial(cfg, pe));
    CHECK(psi_trivial(cfg, pe * 5));
    CHECK(!psi_trivial(cfg, pe / Rat(cfg.p)));
  }
  // Real mode: trivial exactly on Z.
  CHECK(psi_trivial(CharConfig::real(1), Rat(4)));
  CHECK(!psi_trivial(CharConfig::real(1), Rat(1, 2)));
  CHECK(psi_eval(CharConfig::real(-1), Rat(1, 4)) == Cyc::root(4, 3));
}
