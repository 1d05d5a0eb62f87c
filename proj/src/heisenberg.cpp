#include "lw/heisenberg.hpp"

#include <stdexcept>

namespace lw {

HeisElem heis_mul(const HeisElem& a, const HeisElem& b) {
  if (a.form != b.form || a.w.size() != b.w.size())
    throw std::invalid_argument("heis_mul: mismatched elements");
  HeisElem out;
  out.form = a.form;
  out.w = a.w + b.w;
  Rat twist = (a.form == HeisForm::Std) ? Rat(1, 2) * sym_pair(a.w, b.w)
                                        : b_form(a.w, b.w);
  out.t = a.t + b.t + twist;
  return out;
}

HeisElem heis_inv(const HeisElem& a) {
  HeisElem out;
  out.form = a.form;
  out.w = -a.w;
  // (w,t)(-w,s) = (0, t+s+twist(w,-w)); solve for s.
  Rat twist = (a.form == HeisForm::Std) ? Rat(0) : -b_form(a.w, a.w);
  out.t = -a.t - twist;
  return out;
}

AlphaB alpha_b(const Mat& g, const HeisElem& h) {
  if (h.form != HeisForm::Std)
    throw std::invalid_argument("alpha_b: expects a standard-form element");
  AlphaB out;
  out.ps.g = g;
  out.hb.form = HeisForm::B;
  out.hb.w = h.w;
  out.hb.t = h.t + Rat(1, 2) * b_form(h.w, h.w);
  return out;
}

Cyc char_eval(const DualCharacter& chi, const Vec& x, const CharConfig& cfg) {
  return psi_eval(cfg, sym_pair(x, chi.ystar));
}

DualCharacter char_solve(const std::vector<Cyc>& values, const CosetList& l1_mod_l,
                         const QuotientData& lstar_mod_l1, const CharConfig& cfg) {
  if (values.size() != l1_mod_l.reps.size())
    throw std::invalid_argument("char_solve: value table size mismatch");
  long total = lstar_mod_l1.index.convert_to<long>();
  for (long idx = 0; idx < total; ++idx) {
    DualCharacter cand{lstar_mod_l1.rep_of(lstar_mod_l1.digits_at(idx))};
    bool ok = true;
    for (std::size_t k = 0; k < values.size() && ok; ++k)
      if (char_eval(cand, l1_mod_l.reps[k], cfg) != values[k]) ok = false;
    if (ok) return cand;
  }
  throw std::domain_error("char_solve: no representative matches the table");
}

std::vector<DualCharacter> all_characters(const QuotientData& lstar_mod_l1) {
  std::vector<DualCharacter> out;
  long total = lstar_mod_l1.index.convert_to<long>();
  out.reserve(total);
  for (long idx = 0; idx < total; ++idx)
    out.push_back({lstar_mod_l1.rep_of(lstar_mod_l1.digits_at(idx))});
  return out;
}

Cyc psi_L_chi(const HeisElem& h, const Lattice& carrier, const DualCharacter& chi,
              const CharConfig& cfg, bool case_two) {
  if (h.form != HeisForm::Std)
    throw std::invalid_argument("psi_L_chi: expects a standard-form element");
  if (!vector_in(carrier, h.w))
    throw std::invalid_argument("psi_L_chi: w-part outside the carrier lattice");
  Rat arg = case_two ? h.t - Rat(1, 2) * b_form(h.w, h.w) : h.t;
  return psi_eval(cfg, arg) * char_eval(chi, h.w, cfg);
}

}  // namespace lw
