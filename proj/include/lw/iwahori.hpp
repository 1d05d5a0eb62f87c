// Decomposition machinery for Sp_{2m} at the prime 2: Bruhat decomposition
// over F_2, elementary-divisor (Cartan) decomposition of Sp_{2m}(Q), and the
// constructive Iwahori decomposition Sp_{2m}(Q) = union of I w I with w
// running over the extended affine Weyl group D(2) x W.
//
// Conventions: I is the preimage of the Borel B(F_2) inside the 2-integral
// symplectic matrices (entries with odd denominators are allowed and reduce
// mod 2); see is_iwahori in lattice.hpp. Supported ranks: m <= 3.
#pragma once

#include "lw/symplectic.hpp"

#include <set>
#include <vector>

namespace lw {

// --- Arithmetic over F_2 -------------------------------------------------

// Dense matrix over F_2; entries stored as 0/1 bytes.
struct F2Mat {
  long n = 0;
  std::vector<unsigned char> a;

  F2Mat() = default;
  explicit F2Mat(long size) : n(size), a(static_cast<std::size_t>(size) * size, 0) {}

  static F2Mat identity(long size) {
    F2Mat m(size);
    for (long i = 0; i < size; ++i) m(i, i) = 1;
    return m;
  }

  unsigned char& operator()(long i, long j) { return a[static_cast<std::size_t>(i) * n + j]; }
  unsigned char operator()(long i, long j) const { return a[static_cast<std::size_t>(i) * n + j]; }

  bool operator==(const F2Mat& o) const { return n == o.n && a == o.a; }
  bool operator<(const F2Mat& o) const { return a < o.a; }
};

F2Mat f2_mul(const F2Mat& x, const F2Mat& y);

// Reduction mod 2 of a 2-integral rational matrix (odd denominators allowed).
F2Mat f2_reduce(const Mat& g);

// Inverse of a symplectic matrix over F_2 via g^{-1} = J g^T J (valid only
// for symplectic input; -1 = 1 mod 2).
F2Mat f2_sp_inverse(const F2Mat& g);

bool f2_is_symplectic(const F2Mat& g);

// Membership in the Borel B(F_2): lower-left block zero and upper-left block
// upper triangular (for symplectic input this forces the standard shape
// [[a, b], [0, (a^T)^{-1}]] with a unitriangular and a b^T symmetric).
bool f2_in_borel(const F2Mat& g);

// All 2^{m^2} elements of B(F_2), identity first; cached per m.
const std::vector<F2Mat>& borel_f2_list(long m);

// --- Weyl elements -------------------------------------------------------

// Label of a finite Weyl element omega_s omega_S (see weyl_element).
struct WeylLabel {
  std::vector<long> s;  // permutation of {0..m-1}
  std::set<long> S;     // flip set, subset of {0..m-1}

  static WeylLabel trivial(long m);
  Mat mat() const;
  bool is_trivial() const;
  bool operator==(const WeylLabel& o) const { return s == o.s && S == o.S; }
};

// All 2^m m! finite Weyl labels, identity first; cached per m.
const std::vector<WeylLabel>& weyl_list(long m);

// Element of the extended affine Weyl group D(2) x W in the normal form with
// the diagonal 2-powers pulled to the left:
//   mat() = sp_diag(2^{k_1}, ..., 2^{k_m}) * weyl_element(s, S).
struct WeylAffineElem {
  std::vector<long> s;
  std::set<long> S;
  std::vector<long> k;

  static WeylAffineElem trivial(long m);
  Mat mat() const;
  bool is_trivial() const;
  // Invariant divisor content: the multiset {2^{|k_i|}} sorted descending
  // (the D_0-part after conjugating the diagonal into dominant form).
  std::vector<Int> d0_part() const;
  bool operator==(const WeylAffineElem& o) const { return s == o.s && S == o.S && k == o.k; }
};

// --- Bruhat decomposition over F_2 ---------------------------------------

struct BruhatF2 {
  F2Mat b1;
  WeylLabel omega;
  F2Mat b2;
};

// g = b1 * mat(omega) * b2 over F_2; omega is the unique double-coset label.
// Throws if g is not symplectic over F_2. Requires m <= 3.
BruhatF2 bruhat_f2(const F2Mat& g);

// The 0/1 integral lift of an element of B(F_2); lands in N(Z) (upper
// unitriangular a-block), reduces back to the input mod 2.
Mat borel_lift(const F2Mat& b);

// --- Integral and rational decompositions --------------------------------

struct SpZIwahori {
  Mat i;            // in I
  WeylLabel omega;  // finite Weyl label
  Mat n;            // in N(Z)
};

// g = i * mat(omega) * n for 2-integral symplectic g (Sp_{2m}(Z) and, more
// generally, odd denominators). Exact by construction.
SpZIwahori sp_z_iwahori(const Mat& g);

struct SymplecticDivisors {
  Mat u;  // in Sp_{2m}(Z)
  Mat d;  // sp_diag(d_1..d_m), positive integers, d_m | ... | d_1
  Mat v;  // in Sp_{2m}(Z)
};

// Elementary-divisor decomposition A = u d v of a rational symplectic matrix;
// d is the unique dominant divisor matrix. Deterministic.
SymplecticDivisors symplectic_divisors(const Mat& A);

// --- Iwahori decomposition at 2 ------------------------------------------

struct IwahoriFactorization {
  Mat i1;
  WeylAffineElem w;
  Mat i2;
  bool certificate = false;  // exact product + mod-2 membership checks passed
};

// Deterministic factorization A = i1 * mat(w) * i2 with i1, i2 in I.
// Requires A symplectic over Q, m <= 3.
IwahoriFactorization iwahori_decompose(const Mat& A);

struct ReduceWND {
  Mat i;
  Mat dprime;         // diagonal, positive 2-powers (element of D(2))
  WeylLabel omega;    // finite Weyl label of the cell
  Mat iprime;
};

// mat(omega) * n * d = i * dprime * mat(omega') * iprime exactly, for
// n in N(Z) (2-integral upper unipotent) and d in D(2).
ReduceWND reduce_wnd(const WeylLabel& omega, const Mat& n, const Mat& d);

}  // namespace lw
