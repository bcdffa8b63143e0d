#ifndef FUCHSOL_HEURISTIC_HPP
#define FUCHSOL_HEURISTIC_HPP

#include <array>

#include "fuchsol/system.hpp"

namespace fuchsol {
namespace oracle {

// The two-component reference ODE  du/dt = (1/t) diag(0, a) u + |t|^{-(1-p)} F~(t)
// on [-1, 0) with closed-form solution.
struct HeuristicProblem {
  double a = 1.0;                 // eigenvalue of the principal matrix
  double p = 1.0;                 // source power, in (0, 1]
  std::function<std::array<double, 2>(double)> ftilde;  // may be null (== 0)
  double u_star = 0.0, u_starstar = 0.0;  // data at t = -1

  void validate() const;
};

// u1(t) = u_* + int_{-1}^t |s|^{-1+p}   F~1 ds
// u2(t) = (-t)^a (u_** + int_{-1}^t |s|^{-1+p-a} F~2 ds)
// Quadrature after s = -sigma^{1/p} (the |s|^{p-1} weight becomes analytic).
std::array<double, 2> exact_solution(const HeuristicProblem& prob, double t,
                                     double quad_tol = 1e-12);

// limit u1(0) = u_* + int_{-1}^0 |s|^{-1+p} F~1 ds
double u1_limit(const HeuristicProblem& prob, double quad_tol = 1e-12);

struct DecayCheckReport {
  double u1_exponent = 0.0;      // fitted rate of |u1 - u1(0)|
  bool u1_fit_done = false;      // skipped when u1 is constant
  double u2_exponent = 0.0;
  bool u2_fit_done = false;
  double u1_bound_const = 0.0;   // C with |u1(t)-u1(0)| <= C |t|^p, fitted at earliest t
  double u2_bound_const = 0.0;   // C with |u2(t)| <= C (|t|^p + |t|^a)
  bool bounds_hold = false;
};

// Verify the power-law bounds on a time grid and fit the observed exponents
// (first 20% of the window excluded from the fits).
DecayCheckReport decay_check(const HeuristicProblem& prob, const std::vector<double>& t_grid);

// B0 = I, B1 = 0, Bc = a I, P = diag(0,1), F = |t|^{-(1-p)} F~(t);
// spatially constant system usable on any grid.
FuchsianSystem as_fuchsian(const HeuristicProblem& prob);

}  // namespace oracle
}  // namespace fuchsol

#endif
