// Exact cyclotomic scalars: elements of Q(zeta_N).
//
// Internally an element is kept in sparse group-algebra form, i.e. as a
// finite sum  sum_k c_k * zeta_N^k  with rational coefficients and exponents
// modulo N (an element of Q[x]/(x^N - 1)). This makes multiplication by a
// root of unity an index shift, which is what the integral-operator loops
// need. The canonical form -- the coefficient vector of length phi(N) in the
// power basis of Q[x]/Phi_N(x) -- is computed lazily for equality tests,
// zero tests, inversion and serialization. Phi_N is irreducible over Q, so
// the canonical form is unique; mixed-conductor arithmetic lifts both
// operands to the lcm of their conductors.
#pragma once

#include "lw/rat.hpp"

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace lw {

class Cyc {
 public:
  Cyc() : n_(1) {}  // zero

  static Cyc zero() { return Cyc(); }
  static Cyc one() { return from_rational(Rat(1)); }
  static Cyc from_rational(const Rat& r);
  // zeta_N^k
  static Cyc root(long n, const Int& k);
  // e^{2 pi i r} for rational r
  static Cyc root_of_unity(const Rat& r);
  // Element of Q(zeta_N) from canonical coefficients (length phi(N)).
  static Cyc from_canonical(long n, const std::vector<Rat>& coeffs);

  long modulus() const { return n_; }

  Cyc operator+(const Cyc& o) const;
  Cyc operator-(const Cyc& o) const;
  Cyc operator-() const;
  Cyc operator*(const Cyc& o) const;
  Cyc& operator+=(const Cyc& o) { *this = *this + o; return *this; }
  Cyc& operator-=(const Cyc& o) { *this = *this - o; return *this; }
  Cyc& operator*=(const Cyc& o) { *this = *this * o; return *this; }
  Cyc scaled(const Rat& r) const;

  // Complex conjugation zeta -> zeta^{-1}.
  Cyc conj() const;

  bool is_zero() const;
  bool operator==(const Cyc& o) const;
  bool operator!=(const Cyc& o) const { return !(*this == o); }

  // Multiplicative inverse (throws on zero).
  Cyc inverse() const;

  // If the element is rational, return it.
  std::optional<Rat> as_rational() const;

  // Canonical coefficient vector of length phi(n) over the power basis of
  // Q[x]/Phi_n(x), at the stored modulus.
  std::vector<Rat> canonical_coeffs() const;

  // Rewrites the element with modulus m (n_ must divide m).
  Cyc lifted_to(long m) const;

  // Deterministic human/JSON-friendly rendering.
  std::string to_string() const;

  // Number of stored monomials (diagnostics).
  std::size_t term_count() const { return c_.size(); }

 private:
  long n_;                 // exponents live in Z/n_
  std::map<long, Rat> c_;  // exponent -> coefficient; no zero entries kept

  void add_term(long k, const Rat& v);
};

// phi(n)
long euler_phi(long n);
// Coefficients of the n-th cyclotomic polynomial (degree phi(n), monic),
// index i = coefficient of x^i.
const std::vector<Rat>& cyclotomic_poly(long n);

}  // namespace lw
