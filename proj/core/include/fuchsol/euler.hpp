#ifndef FUCHSOL_EULER_HPP
#define FUCHSOL_EULER_HPP

#include <optional>

#include "fuchsol/integrator.hpp"
#include "fuchsol/kasner.hpp"
#include "fuchsol/system.hpp"

namespace fuchsol {
namespace euler {

struct PhysicalCoeffs {
  Matrix b0, b1;   // 2x2, symmetric
  Vector source;   // G-bar
  bool degenerate = false;  // (v0)^2 == (v1)^2, characteristic degeneracy
};

// The symmetric hyperbolic fluid system in the original time tau < 0.
PhysicalCoeffs physical_coeffs(double tau, double v0, double v1, const KasnerParams& params);

// Physical system wrapped for the integrator: B0 dV/dtau + B1 dV/dx = G.
FuchsianSystem physical_system(const KasnerParams& params);

// Residual of the fluid equations on the rest solution
// V0 = -V_star (-tau)^Gamma, V1 = 0 (analytic d/dtau, discrete d/dx).
double rest_residual(const KasnerParams& params, double v_star, double tau, int n_points);

// Fluid state (V0, V1) over the torus at time tau < 0.
struct FluidState {
  Field field;  // fiber 2: rows (V0, V1), field.time = tau
  KasnerParams params;
};

// Background data: u_star with Vhat_star = exp(u_star), and the evaluators
// Uhat^i(t, x) of the reference solution (rest background: identically zero).
struct EulerBackground {
  std::function<double(double)> u_star;     // null == 0
  std::function<double(double)> u_star_dx;  // null == finite differences
  std::function<double(double, double)> uhat0, uhat1;              // null == 0
  std::function<double(double, double)> duhat0_dt, duhat1_dt;      // null == FD
  std::function<double(double, double)> duhat0_dx, duhat1_dx;      // null == FD

  bool is_rest() const { return !uhat0 && !uhat1; }
  double ustar_at(double x) const { return u_star ? u_star(x) : 0.0; }
  double ustar_dx_at(double x) const;
  double uh(int i, double t, double x) const;
  double duh_dt(int i, double t, double x) const;
  double duh_dx(int i, double t, double x) const;
};

// Perturbation variables u^i = (V^i - Vhat^i)/(t e^{u_star}) in the new time
// t = -(-tau)^Gamma.
struct PerturbationState {
  Field field;  // fiber 2: rows (u0, u1), field.time = t
  KasnerParams params;
};

struct PositivityOptions {
  double warn_threshold = 0.01;  // warn when 1 + Uhat0 + u0 drops below this
};

PerturbationState to_perturbation(const FluidState& state, const EulerBackground& bg,
                                  PositivityOptions opt = {});
FluidState from_perturbation(const PerturbationState& state, const EulerBackground& bg,
                             PositivityOptions opt = {});

// The transformed Fuchsian system for the perturbation (u0, u1):
// P = diag(0,1), Bc per the fluid choice, F2 the quadratic singular source,
// F0 = G - (1/t) Bc P v - (1/t) F2 evaluated as a difference.
FuchsianSystem fuchsian_form(const EulerBackground& bg, const KasnerParams& params,
                             double ball_radius = 0.05, double t_begin = -0.5);

struct F0AuditReport {
  bool finite = true;
  double sup_abs = 0.0;        // sup |F0| over the audit samples
  double late_drift = 0.0;     // max |F0(t_i+1) - F0(t_i)| over the last decade
};

// Samples F0 on a shrinking time sequence and checks for a finite limit.
F0AuditReport audit_f0(const FuchsianSystem& sys, int n_x = 8, int n_t = 40);

struct StabilityConfig {
  double delta = 1e-3;
  int n_points = 256;
  double t_begin = -0.5;       // T0 in the new time
  double t_floor = -1e-4;
  int k_reg = 2;
  std::string data_profile = "cosine";  // cosine | sine | random
  std::uint64_t seed = 20240101;
  StepSchedule schedule;
};

struct StabilityReport {
  double gamma_big = 0.0;
  double fitted_u1_exponent = 0.0;        // |P u|_{H^{k-1}} rate, predicted 1 - eps
  double fitted_u0_exponent = 0.0;        // |u0(t) - u0(0)|_{H^{k-1}} rate, predicted 1
  double vstar_distance = 0.0;            // |V_* - Vhat_*|_{H^{k-1}}
  double initial_norm = 0.0;              // perturbation norm at T0
  double limit_error_bound = 0.0;
  bool positivity_ok = true;
  bool stable = true;                     // no blow-up or positivity loss
  std::vector<double> u1_over_t_tail;     // raw (-t)^{-1} |u1|_{H^{k-1}} tail series
  RunRecord record;
  Vector u0_limit;                        // u0(0, .) on the grid
};

StabilityReport run_stability_experiment(const KasnerParams& params, const EulerBackground& bg,
                                         const StabilityConfig& cfg);

}  // namespace euler
}  // namespace fuchsol

#endif
