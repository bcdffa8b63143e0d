#ifndef FUCHSOL_DECAY_HPP
#define FUCHSOL_DECAY_HPP

#include <vector>

#include "fuchsol/structural.hpp"

namespace fuchsol {

enum class DecayRegime {
  zeta_above_p,       // zeta > p
  zeta_mid,           // p/2 < zeta <= p
  zeta_low,           // 0 < zeta <= p/2
  inapplicable,       // zeta <= 0
};

struct ImprovedFlags {
  // only P^perp B_1 = P^perp B_2 = 0: rate |t|^p, or |t|^p + |t|^{2(zeta-sigma)}
  bool pperp_b_vanish = false;
  // additionally P^perp F_1 = P^perp F_2 = 0 and P^perp (B^0)^{-1} P = 0: rate |t|^p
  bool pperp_all_vanish = false;
};

// Predicted decay rates for |P u| and |P^perp u - P^perp u(0)|.
// A rate is a sum of powers of |t|; the dominant (smallest) exponent is
// what a log-log fit sees per window.
struct DecayPrediction {
  DecayRegime regime = DecayRegime::inapplicable;
  bool applicable = false;
  std::vector<double> pu_powers;      // all terms of the P u bound
  std::vector<double> pperp_powers;   // all terms of the P^perp bound
  bool correction_term = false;       // (lambda1 + alpha) |t|^{p/2} present
  double exponent_pu = 0;             // dominant exponent
  double exponent_pperp = 0;
};

DecayPrediction decay_rate_table(const StructuralConstants& c, int k, ImprovedFlags flags = {});

}  // namespace fuchsol

#endif
