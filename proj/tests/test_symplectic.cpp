#include "doctest.h"

#include "lw/symplectic.hpp"

#include "test_util.hpp"

#include <algorithm>

using namespace lw;

namespace {

// Random element of Sp_{2m}(Q) as a word in standard generators.
Mat rand_sp(std::mt19937_64& r, long m, int len = 6) {
  Mat g = Mat::identity(2 * m);
  for (int k = 0; k < len; ++k) {
    switch (lwtest::rand_long(r, 0, 2)) {
      case 0: {  // diagonal torus element
        std::vector<Rat> t(m);
        for (long i = 0; i < m; ++i) {
          long num = lwtest::rand_long(r, 1, 3);
          long den = lwtest::rand_long(r, 1, 2);
          t[i] = Rat(num, den);
        }
        g = g * sp_diag(t);
        break;
      }
      case 1: {  // unipotent (1 b; 0 1) with b symmetric
        Mat n = Mat::identity(2 * m);
        for (long i = 0; i < m; ++i)
          for (long j = i; j < m; ++j) {
            Rat b = Rat(lwtest::rand_long(r, -2, 2));
            n(i, m + j) = b;
            n(j, m + i) = b;
          }
        g = g * n;
        break;
      }
      default: {  // Weyl element
        std::vector<long> s(m);
        for (long i = 0; i < m; ++i) s[i] = i;
        std::shuffle(s.begin(), s.end(), r);
        std::set<long> S;
        for (long i = 0; i < m; ++i)
          if (lwtest::rand_long(r, 0, 1)) S.insert(i);
        g = g * weyl_element(m, s, S);
        break;
      }
    }
  }
  return g;
}

}  // namespace

TEST_CASE("pairing and B-form") {
  for (long m : {1L, 2L, 3L}) {
    Vec e1(2 * m, Rat(0)), e1s(2 * m, Rat(0));
    e1[0] = 1;
    e1s[m] = 1;
    CHECK(sym_pair(e1, e1s) == 1);
    CHECK(sym_pair(e1, e1) == 0);
    CHECK(b_form(e1, e1s) == 1);
    CHECK(b_form(e1s, e1) == 0);
  }
  auto r = lwtest::rng(111);
  for (int k = 0; k < 100; ++k) {
    long m = lwtest::rand_long(r, 1, 3);
    Vec w = lwtest::rand_vec(r, 2 * m, 2), wp = lwtest::rand_vec(r, 2 * m, 2);
    CHECK(sym_pair(w, w) == 0);
    CHECK(sym_pair(w, wp) == b_form(w, wp) - b_form(wp, w));
    // Matrix form agrees with the coordinate formula.
    Vec jw = w * gram_J(m);
    Rat via_matrix = 0;
    for (long i = 0; i < 2 * m; ++i) via_matrix += jw[i] * wp[i];
    CHECK(sym_pair(wp, w) == -via_matrix);
  }
}

TEST_CASE("symplectic membership and similitude") {
  CHECK(is_symplectic(Mat::identity(4)));
  CHECK(is_symplectic(gram_J(2)));
  CHECK(similitude(Mat::identity(4)) == 1);
  CHECK(similitude(gram_J(2)) == 1);
  Mat d(4, 4);
  d(0, 0) = 2; d(1, 1) = 2; d(2, 2) = Rat(1, 2); d(3, 3) = Rat(1, 2);
  CHECK(similitude(d) == 1);
  Mat gd(4, 4);
  gd(0, 0) = 3; gd(1, 1) = 3; gd(2, 2) = 1; gd(3, 3) = 1;
  CHECK(similitude(gd) == 3);
  Mat bad = Mat::identity(4);
  bad(0, 1) = 1;
  CHECK_THROWS(similitude(bad));

  auto r = lwtest::rng(222);
  for (int k = 0; k < 50; ++k) {
    long m = lwtest::rand_long(r, 1, 3);
    Mat g = rand_sp(r, m);
    CHECK(is_symplectic(g));
    CHECK(g * sp_inverse(g) == Mat::identity(2 * m));
  }
}

TEST_CASE("q_g coboundary and cocycle identities") {
  auto r = lwtest::rng(333);
  for (int k = 0; k < 100; ++k) {
    long m = lwtest::rand_long(r, 1, 2);
    Mat g = rand_sp(r, m), h = rand_sp(r, m);
    Vec w = lwtest::rand_vec(r, 2 * m, 2), wp = lwtest::rand_vec(r, 2 * m, 2);
    // q_g(w + w') - q_g(w) - q_g(w') = B(wg, w'g) - B(w, w')
    CHECK(q_form(g, w + wp) - q_form(g, w) - q_form(g, wp) ==
          b_form(w * g, wp * g) - b_form(w, wp));
    // q_{gh}(w) = q_g(w) + q_h(wg)
    CHECK(q_form(g * h, w) == q_form(g, w) + q_form(h, w * g));
    CHECK(q_form(Mat::identity(2 * m), w) == 0);
  }
  // Diagonal g has q_g = 0.
  auto r2 = lwtest::rng(334);
  for (int k = 0; k < 20; ++k) {
    std::vector<Rat> t = {lwtest::rand_rat(r2, 5, 3), lwtest::rand_rat(r2, 5, 3)};
    for (auto& x : t)
      if (x == 0) x = 1;
    Mat d = sp_diag(t);
    Vec w = lwtest::rand_vec(r2, 4, 2);
    CHECK(q_form(d, w) == 0);
  }
}

TEST_CASE("Weyl and affine elements") {
  // m=1, S={1}: the matrix (0 -1; 1 0).
  Mat w1 = weyl_element(1, {0}, {0});
  CHECK(w1(0, 0) == 0);
  CHECK(w1(0, 1) == -1);
  CHECK(w1(1, 0) == 1);
  CHECK(w1(1, 1) == 0);
  CHECK(weyl_element(2, {0, 1}, {}) == Mat::identity(4));

  // All signed-permutation Weyl elements are symplectic (m = 2 exhaustive).
  std::vector<std::vector<long>> perms = {{0, 1}, {1, 0}};
  for (const auto& s : perms)
    for (int mask = 0; mask < 4; ++mask) {
      std::set<long> S;
      for (long i = 0; i < 2; ++i)
        if (mask & (1 << i)) S.insert(i);
      CHECK(is_symplectic(weyl_element(2, s, S)));
    }

  // Affine elements: diag 2-powers, additive in the exponents.
  auto affine = [](const std::vector<long>& k) {
    std::vector<Rat> t(k.size());
    for (std::size_t i = 0; i < k.size(); ++i) {
      Rat two = 2;
      t[i] = 1;
      for (long j = 0; j < (k[i] >= 0 ? k[i] : -k[i]); ++j) t[i] *= two;
      if (k[i] < 0) t[i] = Rat(1) / t[i];
    }
    return sp_diag(t);
  };
  CHECK(affine({0, 0}) == Mat::identity(4));
  CHECK(affine({1})(0, 0) == 2);
  CHECK(affine({1})(1, 1) == Rat(1, 2));
  CHECK(affine({1, -2}) * affine({2, 3}) == affine({3, 1}));
}
