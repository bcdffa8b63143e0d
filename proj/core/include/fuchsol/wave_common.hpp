#ifndef FUCHSOL_WAVE_COMMON_HPP
#define FUCHSOL_WAVE_COMMON_HPP

#include "fuchsol/integrator.hpp"
#include "fuchsol/system.hpp"

namespace fuchsol {
namespace wave {

// Quadratic-gradient coupling coefficients q^K_{IJ}(u), symmetric in (I, J).
struct Nonlinearity {
  int n_fields = 1;
  std::vector<double> q_const;  // K*N*N + I*N + J, constant case
  std::function<void(const Vector&, std::vector<double>&)> q_eval;  // optional

  static Nonlinearity scalar(double c);
  static Nonlinearity constant(int n, std::vector<double> q);
  // coefficients at field values ubar, symmetrized in (I, J)
  void eval(const Vector& ubar, std::vector<double>& out) const;
};

// C^infty cutoff: 1 on |xi| <= 1, 0 on |xi| >= 2.
double smooth_cutoff(double xi);
double smooth_cutoff_dx(double xi);  // finite-difference derivative

struct ConformalSourceArgs {
  Vector u;               // N field values
  Matrix grad_u;          // dim x N spacetime gradients
  Vector grad_omega_inv;  // dim
  Matrix g_inv;           // dim x dim inverse metric
  double omega = 1.0;
  int n_dim = 4;
};

// f^K = q^K_IJ(Omega^{1-n/2} u) ( Omega^{1-n/2} g(grad u^I, grad u^J)
//   + (n-2) Omega^{2-n/2} g(grad Omega^{-1}, grad u^{(I}) u^{J)}
//   + (1-n/2)^2 Omega^{3-n/2} g(grad Omega^{-1}, grad Omega^{-1}) u^I u^J )
Vector conformal_source(const Nonlinearity& q, const ConformalSourceArgs& a);

// Fiber layout of the first-order wave unknowns: blocks (U0, U1, ULambda, U4),
// each of width n_fields; ULambda is carried as zero in the spherically
// symmetric sector.
struct WaveLayout {
  int n_fields = 1;
  int fiber() const { return 4 * n_fields; }
  int idx(int block, int field) const { return block * n_fields + field; }
};

struct DecayRunConfig {
  double delta = 1e-3;
  int n_points = 512;
  int k_reg = 2;
  double s_floor = -1e-4;   // internal time (paper time t = |s|)
  double calib_t = 0.1;     // calibrate C at this paper time
  double margin = 0.05;     // enforce |U| <= C t^{kappa - margin}
  StepSchedule schedule;
};

struct DecayReport {
  double calibrated_c = 0.0;
  double worst_ratio = 0.0;   // max over t < calib_t of |U(t)| / (C t^{kappa-margin})
  double fitted_exponent = 0.0;
  bool bound_ok = false;
  bool aborted = false;
  RunRecord record;
};

// Evolve the (already time-flipped) wave system from s = -1 and check the
// calibrated decay envelope |U(t)|_{H^k} <= C t^{kappa - margin}.
DecayReport run_decay(const FuchsianSystem& sys, const Field& initial, double kappa,
                      const DecayRunConfig& cfg);

}  // namespace wave
}  // namespace fuchsol

#endif
