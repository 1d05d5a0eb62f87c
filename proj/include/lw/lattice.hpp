// Lattices in W = F^{2m}: full-rank free modules over the coefficient ring
// R, where R = Z_(p) (the localization of Z at p) in the finite mode and
// R = Z in the real mode. Provides dual lattices with respect to psi,
// containment/equality, adapted bases and digit-canonical quotient
// enumeration (elementary divisors), the special lattices L_1, L = L_1 d_L,
// L', L''_g, and the subgroup membership tests J_1(L), Ha_1(L), K(L_1) and
// the Iwahori subgroup at 2.
#pragma once

#include "lw/characters.hpp"
#include "lw/linalg.hpp"
#include "lw/rat.hpp"

#include <optional>
#include <set>
#include <vector>

namespace lw {

struct Lattice {
  Mode mode = Mode::PADIC;
  Int p = 2;  // only meaningful in the finite mode
  Mat basis;  // rows span the lattice over R

  long dim() const { return basis.rows; }
  long m() const { return basis.rows / 2; }
};

// Is x an element of the coefficient ring R?
bool ring_elem(const Rat& x, Mode mode, const Int& p);

Lattice lattice_from_rows(Mode mode, const Int& p, const std::vector<Vec>& rows);

// Inner lattice contained in outer (same mode/p)?
bool lattice_contains(const Lattice& outer, const Lattice& inner);
bool lattice_eq(const Lattice& a, const Lattice& b);
// Is the single vector w an R-combination of the basis rows?
bool vector_in(const Lattice& L, const Vec& w);

// Lattice transported by a matrix (rows -> rows * g) or scaled.
Lattice lattice_act(const Lattice& L, const Mat& g);
Lattice lattice_scale(const Lattice& L, const Rat& c);

// The lattice generated by A and B together (same mode/p), i.e. A + B.
Lattice lattice_sum(const Lattice& a, const Lattice& b);

// The dual L* = { w | psi(<w,l>) = 1 for all l in L }.
Lattice dual_lattice(const Lattice& L, const CharConfig& cfg);

// The fixed self-dual lattice L_1: in the finite mode
// P^[(e+1)/2] e_i (+) P^[e/2] e_i*, in the real mode Z e_i (+) Z e_i*.
Lattice standard_L1(long m, const CharConfig& cfg);

// L = L_1 d_L for block-diagonal d_L in GSp with (L_1 cap X) d_L contained
// in L_1 cap X and (L_1 cap X*) d_L contained in L_1 cap X*.
Lattice special_sublattice(const Mat& d_L, const CharConfig& cfg);

// The rank-m sublattice L cap X (star = false) or L cap X* (star = true),
// returned as m rows supported on the corresponding coordinate block.
Mat lattice_intersect_half(const Lattice& L, bool star);

// L' = 2L cap X (+) 1/2 L cap X* when 2 | e (and in the real mode);
// L' = 1/2 L cap X (+) 2L cap X* when 2 does not divide e.
Lattice lattice_prime(const Lattice& L, const CharConfig& cfg);

// A finite quotient L_big / L_small presented in an adapted basis:
// adapted row i generates a cyclic factor R / (divisors[i]); coset
// representatives are the digit vectors 0 <= c_i < divisors[i].
struct QuotientData {
  Lattice big;
  Lattice small;
  Mat adapted;      // adapted basis of L_big (rows)
  Mat adapted_inv;  // inverse of the adapted basis matrix
  std::vector<Int> divisors;  // positive; p-powers in the finite mode
  Int index = 1;

  std::vector<Int> digits_of(const Vec& w) const;  // w must lie in L_big
  Vec rep_of(const std::vector<Int>& digits) const;
  long index_of(const std::vector<Int>& digits) const;
  std::vector<Int> digits_at(long idx) const;
  // The canonical (least nonnegative digit) representative of w mod L_small.
  Vec canonical_rep(const Vec& w) const;
  long canonical_index(const Vec& w) const;
};

// Builds the adapted-basis data for L_small inside L_big; throws if
// L_small is not contained in L_big or the index exceeds index_cap.
QuotientData quotient_data(const Lattice& big, const Lattice& small,
                           const Int& index_cap = 10000);

// The index [L_big : L_small] without enumeration bounds.
Int lattice_index(const Lattice& big, const Lattice& small);

// Complete duplicate-free canonical representatives of L_big / L_small.
struct CosetList {
  std::vector<Vec> reps;
  Lattice modulus;
};
CosetList quotient_enum(const Lattice& big, const Lattice& small,
                        const Int& index_cap = 10000);

// Splits arbitrary w in W as w = l + rep with l in L and rep the canonical
// representative of w + L (fractional parts of the basis coordinates).
struct ModSplit {
  Vec rep;
  Vec in_lattice;  // w - rep
};
ModSplit reduce_mod(const Lattice& L, const Vec& w);

// A monomial GSp element g factored as omega_s * diag(d, d^{-1}) * omega_S.
struct WeylAffineShape {
  std::vector<long> s;   // pair permutation, 0-based
  std::set<long> S;      // flipped coordinates, 0-based
  std::vector<Rat> d;    // diagonal entries d_1..d_m
};
std::optional<WeylAffineShape> parse_weyl_affine(const Mat& g);

// The exceptional data of g in d_L^{-1} W^eaff d_L: the exceptional index
// set, the lattice L''_g, and the block-diagonal correction d''_g built
// from 2 = diag(2, 1/2) on the exceptional coordinates.
struct ExceptionalData {
  std::set<long> I;  // exceptional coordinates (0-based)
  Lattice Lpp;       // L''_g
  Mat dpp;           // d''_g with L''_g = L d''_g
};
ExceptionalData exceptional_data(const Mat& g, const Mat& d_L,
                                 const CharConfig& cfg);

enum class SubgroupKind { J1, Ha1, K, Iwahori };

// J_1(L): L*(g-1) in L;  Ha_1(L): L*(g-1) in L_1;  K(L_1): L_1 g = L_1;
// Iwahori: g integral at 2 and reducing into B(F_2).
bool subgroup_membership(const Mat& g, const Lattice& L, const Lattice& L1,
                         SubgroupKind which, const CharConfig& cfg);

// Mod-2 Borel shape test used by the Iwahori membership and the appendix
// machinery: all entries 2-integral, lower-left block vanishing mod 2 and
// the upper-left block upper-triangular mod 2.
bool is_iwahori(const Mat& g);

}  // namespace lw
