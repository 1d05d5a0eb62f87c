// The Heisenberg group Ha(W) = W x F with the pairing twist, its B-twisted
// variant H_B(W), the isomorphism alpha_B into the pseudo-symplectic
// semidirect product, the extended characters psi_{L,chi}, and the
// dictionary between characters chi of L_1/L and their representatives
// y*_chi in L*/L_1.
#pragma once

#include "lw/characters.hpp"
#include "lw/cyclotomic.hpp"
#include "lw/lattice.hpp"
#include "lw/symplectic.hpp"

#include <vector>

namespace lw {

enum class HeisForm { Std, B };

struct HeisElem {
  Vec w;
  Rat t = 0;
  HeisForm form = HeisForm::Std;
};

// Group law: (w,t)(w',t') = (w+w', t+t'+ 1/2 <w,w'>) in the standard form,
// and with B(w,w') in place of 1/2 <w,w'> in the B-twisted form.
HeisElem heis_mul(const HeisElem& a, const HeisElem& b);
HeisElem heis_inv(const HeisElem& a);

// A pseudo-symplectic element (g, q_g) together with the B-twisted image of
// a standard Heisenberg element under alpha_B.
struct PsElem {
  Mat g;
  // q_g is determined by g; carried for clarity of the group law
  // (w,t)(g,q) = (wg, t + q(w)).
};
struct AlphaB {
  PsElem ps;
  HeisElem hb;  // (w, t + 1/2 B(w_X, w_X*)) in the B-twisted group
};
AlphaB alpha_b(const Mat& g, const HeisElem& h);

// A character chi of L_1/L stored through its representative y* in L*/L_1:
// chi(x) = psi(<x, y*>).
struct DualCharacter {
  Vec ystar;
};

Cyc char_eval(const DualCharacter& chi, const Vec& x, const CharConfig& cfg);

// Finds the canonical y* representative for a character given as a value
// table on the cosets of a CosetList for L_1/L; throws if no y* matches.
DualCharacter char_solve(const std::vector<Cyc>& values, const CosetList& l1_mod_l,
                         const QuotientData& lstar_mod_l1, const CharConfig& cfg);

// All [L_1 : L] characters of L_1 / L, one per y* in L*/L_1.
std::vector<DualCharacter> all_characters(const QuotientData& lstar_mod_l1);

// The extended character psi_{L,chi} on Ha(L_1) (case I at odd p:
// psi(t) chi(l); case II / real: psi(t - 1/2 B(l,l)) chi(l)). For the plain
// psi_L take chi trivial; the w-part must lie in the lattice carrying chi.
Cyc psi_L_chi(const HeisElem& h, const Lattice& carrier, const DualCharacter& chi,
              const CharConfig& cfg, bool case_two);

}  // namespace lw
