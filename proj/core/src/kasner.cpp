#include "fuchsol/kasner.hpp"

#include <cmath>

namespace fuchsol {
namespace euler {

double big_gamma(double K, double gamma) {
  return 0.25 * (3.0 * gamma - 2.0 - K * K * (2.0 - gamma));
}

double KasnerParams::big_gamma() const { return euler::big_gamma(K, gamma); }

bool KasnerParams::in_regime() const {
  const double g = big_gamma();
  return gamma > 1.0 && gamma < 2.0 && g > 0.0 && g < 1.0;
}

std::array<double, 3> kasner_exponents(double K) {
  const double d = K * K + 3.0;
  return {(K * K - 1.0) / d, 2.0 * (1.0 - K) / d, 2.0 * (1.0 + K) / d};
}

FluidObservables observables(double v_sq, double gamma) {
  if (v_sq <= 0.0) throw DomainError("observables: V^2 must be positive (timelike V)");
  FluidObservables o;
  o.pressure = std::pow(v_sq, -gamma / (2.0 * (gamma - 1.0)));
  o.density = o.pressure / (gamma - 1.0);
  return o;
}

}  // namespace euler
}  // namespace fuchsol
