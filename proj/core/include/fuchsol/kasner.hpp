#ifndef FUCHSOL_KASNER_HPP
#define FUCHSOL_KASNER_HPP

#include <array>

#include "fuchsol/types.hpp"

namespace fuchsol {
namespace euler {

// Kasner background parameters and the fluid equation of state.
struct KasnerParams {
  double K = 1.0;            // asymptotic velocity
  double gamma = 4.0 / 3.0;  // equation-of-state exponent, in (1, 2)

  double big_gamma() const;
  double sound_speed_sq() const { return gamma - 1.0; }
  // stability regime of the theory: gamma in (1,2) and 0 < Gamma < 1
  bool in_regime() const;
};

// p1 = (K^2-1)/(K^2+3), p2 = 2(1-K)/(K^2+3), p3 = 2(1+K)/(K^2+3)
std::array<double, 3> kasner_exponents(double K);

// Gamma = (3 gamma - 2 - K^2 (2 - gamma)) / 4
double big_gamma(double K, double gamma);

struct FluidObservables {
  double pressure = 0.0;
  double density = 0.0;
};

// P = (V^2)^{-gamma/(2(gamma-1))}, rho = P/(gamma-1)
FluidObservables observables(double v_sq, double gamma);

}  // namespace euler
}  // namespace fuchsol

#endif
