#ifndef FUCHSOL_MINKOWSKI_HPP
#define FUCHSOL_MINKOWSKI_HPP

#include "fuchsol/wave_common.hpp"

namespace fuchsol {
namespace wave {
namespace minkowski {

// Chart of the cylinder at spatial infinity, paper time t in (0, 1].
struct MinkowskiChart {
  double r0 = 0.5;     // inner radius bound, rbar0 = 1/r0
  int m = 1;           // radial power r = rho^m
  double lambda = 1.0; // scaling weight, in ((2+sqrt 2)/4, 1]
  int n_fields = 1;

  double rho0() const { return std::pow(r0, 1.0 / m); }
  double kappa() const { return lambda - 0.25 * (2.0 + std::sqrt(2.0)); }
  void validate() const;
};

struct ConformalData {
  double omega = 0.0;
  Matrix g;             // (t, r) block of the cylinder metric
  double ricci_scalar = 0.0;
};

// Omega = 1/(r(2-t)t) and the (t,r) metric block; R = 0.
ConformalData conformal_data(double t, double r);

// psi-bar: (tbar, rbar) -> (t, r) = (1 - tbar/rbar, rbar/(rbar^2 - tbar^2))
std::pair<double, double> chart_map(double tbar, double rbar);
std::pair<double, double> chart_map_inverse(double t, double r);

struct FirstOrderCoeffs {
  Matrix b0, b1, bc;   // displayed matrices (coefficient of r d/dr for b1)
  Matrix csc, bsc;     // singular source pieces: F = f_regular + (1/t)(sqrt(t) Csc + Bsc) U
  Vector f_regular;
  double bsc_norm = 0.0;  // Ord(U) audit value
};

FirstOrderCoeffs first_order_coeffs(double t, double rho, const Vector& U,
                                    const MinkowskiChart& chart, const Nonlinearity& q);

struct CoercivityReport {
  bool applicable = false;  // lambda above the threshold (2+sqrt 2)/4
  bool pass = false;
  double kappa = 0.0;
  double min_ratio = 0.0;   // min of h(V,Bc V)/h(V,B0 V) over samples
};

// h(V, Bc V) >= kappa h(V, B0 V) on random unit vectors, t in [0, 1].
CoercivityReport coercivity_check(const MinkowskiChart& chart, int n_samples = 200,
                                  std::uint64_t seed = 2020);

struct ExtensionReport {
  double flux_gradient_sup = 0.0;  // sup | d_rho ( t (chi rho / m) B^1 ) |
  double sigma_target = 0.05;
  int m_for_sigma = 1;             // smallest m pushing the sup below sigma_target
};

// Extended system on the torus [-3 rho0, 3 rho0), internally time-flipped to
// s = -t < 0 for the core integrator.
FuchsianSystem extend_system(const MinkowskiChart& chart, const Nonlinearity& q,
                             ExtensionReport* report = nullptr);

// h(V, (n . B) V) with the outward co-normal of Gamma^- (rho = 0) or
// Gamma^+ (2 - t = (rho0/rho)^m); <= 0 on Gamma^+, = 0 on Gamma^-.
double boundary_form(const MinkowskiChart& chart, double t, double rho, const Vector& V);

struct Reconstruction {
  Vector u;      // conformal field, u = t^{1/2-lambda} U4
  Vector u_bar;  // physical Minkowski field, ubar = r t (2-t) u
};
Reconstruction reconstruct_scalar(const Vector& U, double t, double rho,
                                  const MinkowskiChart& chart);

// Initial data: compact C^infty bump in rho of amplitude delta placed inside
// (0, rho0), with U1 set consistently and U0 = 0; `outside` adds an extra
// bump supported outside (0, rho0) (for the extension-independence check).
Field initial_data(const MinkowskiChart& chart, const PeriodicGrid& grid, double delta,
                   bool outside_bump = false);

PeriodicGrid make_grid(const MinkowskiChart& chart, int n_points);

// Max difference at the floor time on the protected region
// {0 <= rho <= rho0 / (2-t)^{1/m}} between runs differing only outside (0, rho0).
double restriction_independence(const MinkowskiChart& chart, const Nonlinearity& q,
                                const DecayRunConfig& cfg);

}  // namespace minkowski
}  // namespace wave
}  // namespace fuchsol

#endif
