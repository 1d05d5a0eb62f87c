// Shared deterministic sampling helpers for the test suites.
#pragma once

#include "lw/linalg.hpp"
#include "lw/rat.hpp"

#include <random>

namespace lwtest {

using lw::Int;
using lw::Mat;
using lw::Rat;
using lw::Vec;

inline std::mt19937_64 rng(std::uint64_t seed) { return std::mt19937_64(seed); }

inline long rand_long(std::mt19937_64& r, long lo, long hi) {
  return std::uniform_int_distribution<long>(lo, hi)(r);
}

// Random rational with numerator in [-bound, bound] and denominator a
// divisor-friendly small integer (possibly a power of p when requested).
inline Rat rand_rat(std::mt19937_64& r, long bound = 20, long den_max = 8) {
  long num = rand_long(r, -bound, bound);
  long den = rand_long(r, 1, den_max);
  return Rat(num, den);
}

inline Rat rand_p_rat(std::mt19937_64& r, long p, long max_num = 40, long max_dpow = 2) {
  long num = rand_long(r, -max_num, max_num);
  long pk = 1;
  for (long i = 0, e = rand_long(r, 0, max_dpow); i < e; ++i) pk *= p;
  return Rat(num, pk);
}

inline Vec rand_vec(std::mt19937_64& r, long n, long p, long max_dpow = 2) {
  Vec v(n);
  for (long i = 0; i < n; ++i) v[i] = rand_p_rat(r, p, 20, max_dpow);
  return v;
}

}  // namespace lwtest
