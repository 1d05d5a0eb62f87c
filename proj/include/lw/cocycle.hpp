// Extraction of the 2-cocycle c(g, g') defined by M[g] M[g'] = c(g, g')
// M[g g'], arithmetic in the metaplectic extension (elements (g, t) with the
// cocycle-twisted multiplication), and the headline representation checks
// for Mp(W) acting with Ha(W).
#pragma once

#include "lw/big_model.hpp"

#include <cstdint>
#include <map>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

namespace lw {

// |c| = magnitude * sqrt(radicand) with magnitude a positive rational and
// radicand a squarefree positive integer (1 when |c| is rational; Gauss-sum
// factors on non-self-dual lattices contribute genuine square roots).
struct CocycleValue {
  Rat magnitude = 1;
  Int radicand = 1;
  Cyc phase;  // unitary: phase * conj(phase) = 1
  std::string convention = "mu(Lstar)=1";

  Cyc value() const;
  std::string magnitude_string() const;
};

// The exact cyclotomic square root of a squarefree positive integer,
// assembled from quadratic Gauss sums (sqrt(2) = zeta_8 + zeta_8^{-1},
// sqrt(p) from the quadratic-residue sum at an odd prime p).
Cyc cyc_sqrt(const Int& squarefree);

// Shared context: the big-model data, the truncation settings, and the memo
// table of extracted values (single writer at a time, keyed on the exact
// rational entries of the pair).
class CocycleCtx {
 public:
  explicit CocycleCtx(const BigContext& big, const TruncationCfg& trunc = {})
      : big_(&big), trunc_(trunc) {}

  const BigContext& big() const { return *big_; }
  const TruncationCfg& trunc() const { return trunc_; }

 private:
  const BigContext* big_;
  TruncationCfg trunc_;
  std::map<std::string, CocycleValue> memo_;
  std::optional<Rat> mone_;
  std::mutex mu_;

  friend CocycleValue cocycle(const Mat& g, const Mat& gp, CocycleCtx& ctx);
  friend Rat m_one_scalar(CocycleCtx& ctx);
};

// The scalar mu_0 with M[1] = mu_0 * id on the context (1 in case I under
// mu(Lstar) = 1; the measure of the integration domain in case II). All
// cocycle values are normalized by it, so c(1, g) = c(g, 1) = 1 always.
Rat m_one_scalar(CocycleCtx& ctx);

// The scalar with M[g] M[g'] = c(g, g') M[g g'], extracted by applying both
// sides to at least three probe vectors inside one chi-component and
// verifying a single exact ratio across all probes and evaluation points;
// the extraction is repeated on a second chi-component (when the model has
// one) and the two values must agree. Values are memoized in ctx.
CocycleValue cocycle(const Mat& g, const Mat& gp, CocycleCtx& ctx);

// An element (g, t) of the metaplectic extension, t a root of unity.
struct MpElem {
  Mat g;
  Cyc t = Cyc::one();
};

// (g, t)(g', t') = (g g', t t' phase(c(g, g'))).
MpElem mp_mul(const MpElem& a, const MpElem& b, CocycleCtx& ctx);

// Sampled verification of pi([(g,t), h]) f = t M[g] pi(h) f being a
// representation of the semidirect product, using the extracted cocycle in
// the metaplectic multiplication. Magnitude factors different from 1 are
// counted and reported, not asserted away.
struct RepCheckReport {
  long total = 0;
  long passed = 0;
  long magnitude_nontrivial = 0;
  std::vector<std::string> failures;
};
RepCheckReport rep_check(long samples, CocycleCtx& ctx, std::uint64_t seed = 1);

// Number of irreducible components of the small model under Ha(W): the
// commutant dimension of the sigma/V generator family. Verifies that the
// count squares to [L* : L] and that the central character of every
// chi-component is psi.
long component_count(const SmallModel& sm);

}  // namespace lw
