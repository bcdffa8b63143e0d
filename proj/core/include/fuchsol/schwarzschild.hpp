#ifndef FUCHSOL_SCHWARZSCHILD_HPP
#define FUCHSOL_SCHWARZSCHILD_HPP

#include "fuchsol/wave_common.hpp"

namespace fuchsol {
namespace wave {
namespace schwarzschild {

// Chart of the Schwarzschild cylinder at spatial infinity, mass mu > 0.
struct SchwarzschildChart {
  double mu = 1.0;
  double rho0 = 0.1;        // in (0, 1/3), 3 rho0 < eta
  int m = 2;                // radial power, >= 2
  double lambda = 1.0;      // in ((2+sqrt 2)/4, 1]
  double eta = 0.9;         // Taylor window for the frozen-coefficient bounds
  double sigma_target = 0.05;
  int n_fields = 1;

  double kappa() const { return lambda - 0.25 * (2.0 + std::sqrt(2.0)); }
  void validate() const;
};

struct BackgroundValues {
  double a = 0.0;        // A(t, r)
  double script_a = 0.0; // 1 - (1-2rt) t A / (1 - (rt)^2), factored form
  double omega = 0.0;    // mu (1+rt)^2 / (2 r t)
  double ricci = 0.0;    // 24 r t / (1+rt)^2
};

BackgroundValues background_functions(double t, double r, double mu = 1.0);

struct FirstOrderCoeffs {
  Matrix b0, b1, bc;   // displayed matrices, paper time, coefficient of r d/dr
  Matrix csc, bsc;
  Vector f_regular;    // -4 r t A / ((2-tA)(1+rt)^2) U4 rows
  double bsc_norm = 0.0;
};

FirstOrderCoeffs first_order_coeffs(double t, double rho, const Vector& U,
                                    const SchwarzschildChart& chart, const Nonlinearity& q);

struct FrozenCoeffs {
  Matrix b0_star, bc_star;
};

// The rho = 0 matrices; first_order_coeffs(rho -> 0) converges to these.
FrozenCoeffs frozen_coeffs(double t, const SchwarzschildChart& chart);

struct AuditReport {
  double slope_b0 = 0.0, slope_bc = 0.0;   // log-log Taylor slopes vs rho
  double taylor_const = 0.0;               // measured C with |B - B*| <= C rho^2
  double sup_drho_b0 = 0.0, sup_drho_bc = 0.0;
  double flux_gradient_sup = 0.0;          // sup |d_rho(t (chi rho/m) B~1)|
  double coercivity_min = 0.0;             // min of h(V,Bc~V)/h(V,B0~V)
  double coercivity_margin = 0.0;          // coercivity_min - (kappa - sigma_target)
  int chosen_m = 2;
  double chosen_rho0 = 0.0;
  bool pass = true;
  std::vector<std::string> findings;       // failures as structured findings
};

// Extended frozen-coefficient system on the torus [-3 rho0, 3 rho0),
// time-flipped to s = -t < 0; optionally runs the Taylor/coercivity audit.
FuchsianSystem extend_system(const SchwarzschildChart& chart, const Nonlinearity& q,
                             AuditReport* audit = nullptr);

PeriodicGrid make_grid(const SchwarzschildChart& chart, int n_points);
Field initial_data(const SchwarzschildChart& chart, const PeriodicGrid& grid, double delta,
                   bool outside_bump = false);

// Boundary forms of Gamma^- (rho = 0) and Gamma^+ (rho = rho0), conormal +-d rho.
double boundary_form(const SchwarzschildChart& chart, double t, double rho, const Vector& V);

double restriction_independence(const SchwarzschildChart& chart, const Nonlinearity& q,
                                const DecayRunConfig& cfg);

}  // namespace schwarzschild
}  // namespace wave
}  // namespace fuchsol

#endif
