#ifndef FUCHSOL_DIV_B_HPP
#define FUCHSOL_DIV_B_HPP

#include "fuchsol/system.hpp"

namespace fuchsol {

struct DivBResult {
  Matrix value;
  double fd_error_estimate = 0.0;  // Richardson step-halving estimate
};

// Div B at (t, x, v) with spatial gradient w, flat chart, trivial bundle:
//   dB0/dt + D_v B0 . (B0)^{-1} [ -B1 w + (1/t) Bc P v + F ]
//   + dB1/dx + D_v B1 . w
// Derivatives of the evaluators by central differences, step
// 1e-5 * max(1, |argument|), Richardson-checked.
DivBResult div_b(const FuchsianSystem& sys, double t, double x, const Vector& v,
                 const Vector& w);

}  // namespace fuchsol

#endif
