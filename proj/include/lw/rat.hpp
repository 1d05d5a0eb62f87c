// Exact rational scalars and p-adic valuation utilities.
//
// FScalar for the finite-prime modes is an exact rational number used as a
// computational proxy for an element of Q_p with bounded denominator; in the
// real mode it is just a rational. All arithmetic in the library is exact.
#pragma once

#include <boost/multiprecision/gmp.hpp>

#include <cstdint>
#include <stdexcept>
#include <string>

namespace lw {

using Int = boost::multiprecision::mpz_int;
using Rat = boost::multiprecision::mpq_rational;

inline Int rat_num(const Rat& x) { return boost::multiprecision::numerator(x); }
inline Int rat_den(const Rat& x) { return boost::multiprecision::denominator(x); }

// p-adic valuation of a non-zero integer.
inline long val_p_int(Int a, const Int& p) {
  if (a == 0) throw std::invalid_argument("val_p_int: zero argument");
  if (a < 0) a = -a;
  long v = 0;
  while (a % p == 0) { a /= p; ++v; }
  return v;
}

// p-adic valuation of a non-zero rational.
inline long val_p(const Rat& x, const Int& p) {
  if (x == 0) throw std::invalid_argument("val_p: zero argument");
  return val_p_int(rat_num(x), p) - val_p_int(rat_den(x), p);
}

// True if x lies in Z_(p) (denominator prime to p).
inline bool is_p_integral(const Rat& x, const Int& p) {
  return x == 0 || val_p_int(rat_den(x), p) == 0;
}

// True if x is a (rational) integer.
inline bool is_integer(const Rat& x) { return rat_den(x) == 1; }

inline Int floor_div(const Int& a, const Int& b) {
  // Floor division for b > 0.
  Int q = a / b, r = a % b;
  if (r != 0 && a < 0) --q;
  return q;
}

// Least non-negative residue of a mod n (n > 0).
inline Int mod_pos(const Int& a, const Int& n) {
  Int r = a % n;
  if (r < 0) r += n;
  return r;
}

// Modular inverse of a mod n for gcd(a, n) = 1.
inline Int mod_inverse(const Int& a, const Int& n) {
  Int t = 0, newt = 1, r = n, newr = mod_pos(a, n);
  while (newr != 0) {
    Int q = r / newr;
    Int tmp = t - q * newt; t = newt; newt = tmp;
    tmp = r - q * newr; r = newr; newr = tmp;
  }
  if (r != 1) throw std::invalid_argument("mod_inverse: not invertible");
  return mod_pos(t, n);
}

// p-fractional part: the unique r in [0,1) with p-power denominator such
// that x - r lies in Z_(p). This is the canonical representative of x in
// Q_p / Z_p under the proxy identification.
inline Rat p_fractional_part(const Rat& x, const Int& p) {
  if (x == 0) return Rat(0);
  Int den = rat_den(x);
  long k = val_p_int(den, p);
  if (k == 0) return Rat(0);
  Int pk = 1;
  for (long i = 0; i < k; ++i) pk *= p;
  Int dprime = den / pk;  // prime to p
  // x = num / (dprime * p^k); num * dprime^{-1} mod p^k gives the digit part.
  Int digits = mod_pos(rat_num(x) * mod_inverse(dprime, pk), pk);
  return Rat(digits, pk);
}

// Real-mode fractional part: x - floor(x) in [0,1).
inline Rat real_fractional_part(const Rat& x) {
  Int f = floor_div(rat_num(x), rat_den(x));
  return x - Rat(f);
}

inline std::string rat_to_string(const Rat& x) {
  return x.convert_to<std::string>();
}

}  // namespace lw
