// The finite model W_small: the induced representation sigma of Ha(L*) on
// functions L*/L -> C (with the B-twisted covariance in residual
// characteristic 2), its chi-isotypic projectors, the intertwining
// operators A_{chi1,chi2}, the lattice transport D, and exact commutant
// computations.
#pragma once

#include "lw/cyclotomic.hpp"
#include "lw/heisenberg.hpp"
#include "lw/lattice.hpp"

#include <vector>

namespace lw {

using SmallVec = std::vector<Cyc>;

// A linear operator on the delta basis of canonical L*/L representatives.
// Monomial operators (one entry per row) are stored compactly:
// (A f)(rep_i) = ph[i] * f(rep_{col[i]}).
struct SmallOp {
  long n = 0;
  bool mono = false;
  std::vector<long> col;   // monomial column per row
  std::vector<Cyc> ph;     // monomial phases (nonzero)
  std::vector<Cyc> dense;  // row-major when !mono

  static SmallOp identity(long n);
  static SmallOp zero(long n);
  static SmallOp monomial(std::vector<long> col, std::vector<Cyc> ph);
  static SmallOp from_dense(long n, std::vector<Cyc> entries);

  Cyc at(long i, long j) const;
  SmallOp densified() const;
  SmallOp scaled(const Cyc& c) const;
  bool operator==(const SmallOp& o) const;
  bool operator!=(const SmallOp& o) const { return !(*this == o); }
  bool is_zero() const;
  // If the operator is a scalar multiple of the identity, return it.
  std::optional<Cyc> as_scalar() const;
};

SmallOp operator*(const SmallOp& a, const SmallOp& b);
SmallOp operator+(const SmallOp& a, const SmallOp& b);
SmallOp operator-(const SmallOp& a, const SmallOp& b);
SmallVec apply(const SmallOp& a, const SmallVec& f);

// The model context: L inside the self-dual L_1 with dual L*, plus the
// canonical coset machinery shared by every operator.
struct SmallModel {
  CharConfig cfg;
  bool case_two = false;  // B-twisted covariance (p = 2 or real mode)
  Lattice L, L1, Lstar;
  QuotientData q;    // L*/L (dimension of the model)
  QuotientData q1;   // L*/L_1 (labels y*_chi)
  QuotientData ql1;  // L_1/L (character group of the component count)
  long dim = 0;
  bool has_l1_data = false;  // q1/ql1 valid (requires L within L_1 within L*)
  std::vector<Vec> reps;  // canonical representatives, index order

  long rep_index(const Vec& w) const;  // w must lie in L*
  // Covariance factor: f(l + rep) = cov(l, rep) * f(rep) for l in L.
  Cyc cov(const Vec& l, const Vec& rep) const;
  // Splits w in L* against the canonical rep and returns (index, factor)
  // with f(w) = factor * f(rep_index).
  std::pair<long, Cyc> resolve(const Vec& w) const;
};

SmallModel make_small_model(const Mat& d_L, const CharConfig& cfg,
                            const Int& index_cap = 10000);
// Same construction on an explicitly given lattice L; the character data
// layers q1/ql1 are filled only when L is contained in L_1 (has_l1_data).
SmallModel make_small_model_lattice(const Lattice& L, const CharConfig& cfg,
                                    const Int& index_cap = 10000);

// sigma(w, t) for (w, t) in Ha(L*): a monomial operator.
SmallOp sigma_op(const SmallModel& sm, const HeisElem& h);

// The translation operators V_l (l in L_1) forming a genuine representation
// of L_1/L, and the chi-projector P_chi = (1/n) sum conj(chi(l)) V_l.
SmallOp v_op(const SmallModel& sm, const Vec& l);
SmallOp chi_projector(const SmallModel& sm, const DualCharacter& chi);

// A_{chi1,chi2}: f |-> psi(-1/2 <., y*_1 - y*_2>) f(. + y*_1 - y*_2).
SmallOp intertwiner_A(const SmallModel& sm, const DualCharacter& chi1,
                      const DualCharacter& chi2);

// D: W_small(src) -> W_small(dst) for dst built on L'' = L d, d the
// block-diagonal torus element: D(f)(l''*) = f(l''* d^{-1}).
SmallOp transport_D(const SmallModel& src, const SmallModel& dst, const Mat& d);

// Dimension of { X | X A = A X for all generators A }, exact. Monomial
// generator sets use the orbit/phase fast path; otherwise dense elimination
// (supported for n <= 32).
long commutant_dim(const std::vector<SmallOp>& generators);

// Exact column-space basis of an operator (vectors in the delta basis).
std::vector<SmallVec> op_image_basis(const SmallOp& a);
// Coordinates of A restricted to an invariant subspace with the given
// basis: returns C with A * basis = basis * C; throws if not invariant.
SmallOp restrict_op(const SmallOp& a, const std::vector<SmallVec>& basis);

}  // namespace lw
