#ifndef FUCHSOL_INTEGRATOR_HPP
#define FUCHSOL_INTEGRATOR_HPP

#include <string>
#include <vector>

#include "fuchsol/stencil.hpp"
#include "fuchsol/system.hpp"

namespace fuchsol {

// dt = min(cfl h / lambda_max, singular_factor |t|, dt_max), never past t_floor.
struct StepSchedule {
  double cfl = 0.4;
  double singular_factor = 0.05;
  double dt_max = 1e-2;
  double t_floor = -1e-6;
  double dissipation = 0.0;
  int lambda_refresh = 16;
};

// Discrete analog of the controlled energy quantity:
// |u|^2_{Hk} - int_{T0}^t (1/tau) |P u|^2_{Hk} dtau + sup_tau |F~|^2_{Hk}.
struct EnergyLedger {
  double hk_norm_sq = 0.0;
  double pu_integral = 0.0;   // trapezoid accumulation, nondecreasing
  double ftilde_sup = 0.0;
  double identity_residual = 0.0;
  double q() const { return hk_norm_sq + pu_integral + ftilde_sup; }
};

struct RunSample {
  double t = 0, dt = 0;
  std::vector<double> hk;     // |u|_{H^l}, l = 0..k
  double p_l2 = 0;            // |P u|_{L2}
  double p_hkm1 = 0;          // |P u|_{H^{k-1}}
  double pperp_hkm1 = 0;      // |P^perp u|_{H^{k-1}}
  double energy_q = 0;
  double identity_residual = 0;  // relative, of the L2 energy identity
};

struct MonitorConfig {
  int k_reg = 2;
  double record_factor = 0.9;        // sample when |t| shrinks by this factor
  bool identity_residual = false;    // compute the identity residual at samples
  bool store_fields = false;         // keep full snapshots at sample times
  std::vector<double> forced_times;  // extra sample times (negative, increasing)
};

struct RunRecord {
  int k = 2;
  std::vector<RunSample> samples;
  std::vector<Field> fields;  // only if store_fields
  EnergyLedger ledger;
  Field final_state;
  bool aborted = false;
  std::string abort_reason;

  std::vector<double> times() const;
  std::vector<double> column_hk(int l) const;
};

// B^0 du/dt = -B^1 Du + (1/t) Bc P u + F, solved pointwise (dense N x N).
Field rhs(const FuchsianSystem& sys, const Field& field);

// Classical RK4 update; dissipation filter applied after the stage combination.
Field step(const FuchsianSystem& sys, const Field& field, double dt, double eps_d = 0.0);

// max_j of the spectral radius of (B^0)^{-1} B^1 over grid points
double max_characteristic_speed(const FuchsianSystem& sys, const Field& field);

RunRecord evolve(const FuchsianSystem& sys, const Field& initial, const StepSchedule& sched,
                 const MonitorConfig& mon);

struct IdentityResidual {
  double absolute = 0.0;
  double relative = 0.0;
};

// Residual of the L2 energy identity between consecutive states, evaluated at
// the midpoint: | d<u,B0 u>/dt - 2 [ (1/t)<u,Bc P u> + 1/2 <u,DivB u> + <u,F> ] |.
IdentityResidual energy_identity(const FuchsianSystem& sys, const Field& before,
                                 const Field& after, double dt);
double energy_identity_residual(const FuchsianSystem& sys, const Field& before,
                                const Field& after, double dt);

}  // namespace fuchsol

#endif
