#include "fuchsol/decay.hpp"

#include <algorithm>

namespace fuchsol {

DecayPrediction decay_rate_table(const StructuralConstants& c, int k, ImprovedFlags flags) {
  DecayPrediction d;
  const double z = zeta(c, k);
  if (z <= 0.0) {
    d.regime = DecayRegime::inapplicable;
    d.applicable = false;
    return d;
  }
  d.applicable = true;
  const double p = c.p_exponent;
  const double s = c.sigma_loss;
  const double corr = c.lambda1 + c.alpha;

  if (z > p) {
    d.regime = DecayRegime::zeta_above_p;
    d.pu_powers = {p};
  } else if (z > 0.5 * p) {
    d.regime = DecayRegime::zeta_mid;
    d.pu_powers = {z - s};
  } else {
    d.regime = DecayRegime::zeta_low;
    d.pu_powers = {z - s};
  }
  if (corr > 0.0 && d.regime != DecayRegime::zeta_low) {
    d.correction_term = true;
    d.pu_powers.push_back(0.5 * p);
  }

  if (flags.pperp_all_vanish) {
    d.pperp_powers = {p};
  } else if (flags.pperp_b_vanish) {
    if (z > p)
      d.pperp_powers = {p};
    else
      d.pperp_powers = {p, 2.0 * (z - s)};
  } else if (z > 0.5 * p) {
    d.pperp_powers = {0.5 * p, z - s};
  } else {
    d.pperp_powers = {z - s};
  }

  d.exponent_pu = *std::min_element(d.pu_powers.begin(), d.pu_powers.end());
  d.exponent_pperp = *std::min_element(d.pperp_powers.begin(), d.pperp_powers.end());
  return d;
}

}  // namespace fuchsol
