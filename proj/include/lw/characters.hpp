// The additive character psi underlying every model.
//
// Finite mode at a prime p with level e:  psi(x) = psi_std(p^{-e} x), where
// psi_std(y) = e^{2 pi i {y}_p} and {y}_p is the p-fractional part; psi is
// trivial exactly on p^e Z_(p). Real mode: psi(x) = e^{2 pi i kappa x},
// evaluated on rationals through the fractional part, with kappa = +-1.
#pragma once

#include "lw/cyclotomic.hpp"
#include "lw/rat.hpp"

namespace lw {

enum class Mode { PADIC, REAL };

struct CharConfig {
  Mode mode = Mode::PADIC;
  Int p = 2;       // prime, finite mode
  long e = 0;      // level, finite mode
  Rat kappa = 1;   // real mode

  static CharConfig padic(const Int& p, long e) {
    CharConfig c;
    c.mode = Mode::PADIC;
    c.p = p;
    c.e = e;
    return c;
  }
  static CharConfig real(const Rat& kappa) {
    CharConfig c;
    c.mode = Mode::REAL;
    c.kappa = kappa;
    return c;
  }
};

// The argument of psi as an element of Q/Z: psi(x) = e^{2 pi i arg}.
inline Rat psi_arg(const CharConfig& cfg, const Rat& x) {
  if (cfg.mode == Mode::PADIC) {
    Rat scaled = x;
    if (cfg.e > 0) {
      Int pe = 1;
      for (long i = 0; i < cfg.e; ++i) pe *= cfg.p;
      scaled = x / Rat(pe);
    } else if (cfg.e < 0) {
      Int pe = 1;
      for (long i = 0; i < -cfg.e; ++i) pe *= cfg.p;
      scaled = x * Rat(pe);
    }
    return p_fractional_part(scaled, cfg.p);
  }
  return real_fractional_part(cfg.kappa * x);
}

inline Cyc psi_eval(const CharConfig& cfg, const Rat& x) {
  return Cyc::root_of_unity(psi_arg(cfg, x));
}

// psi(x) == 1?
inline bool psi_trivial(const CharConfig& cfg, const Rat& x) {
  return psi_arg(cfg, x) == 0;
}

}  // namespace lw
