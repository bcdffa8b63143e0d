#ifndef FUCHSOL_STRUCTURAL_HPP
#define FUCHSOL_STRUCTURAL_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "fuchsol/system.hpp"

namespace fuchsol {

// One admissible sample (t, x, v) with |v| < R, t in the system window,
// plus a gradient direction w for the Div B bounds.
struct SampleSet {
  std::vector<double> t, x;
  std::vector<Vector> v, w;
  std::uint64_t seed = 0;
  static SampleSet draw(const FuchsianSystem& sys, int count, std::uint64_t seed);
};

struct SampleViolation {
  int index = -1;
  std::string what;
  double magnitude = 0.0;
};

// Structural constants of the coefficient assumptions and the decay theory.
struct StructuralConstants {
  double kappa = 0, gamma1 = 0, gamma2 = 0;
  double kappa_tilde = 0, gamma1_tilde = 0;
  double lambda1 = 0, lambda2 = 0, lambda3 = 0;
  double alpha = 0;
  double beta[8] = {0, 0, 0, 0, 0, 0, 0, 0};
  double theta = 0;
  double b_const = 0, b_tilde = 0;   // the gradient bounds
  double sigma_loss = 0.05;
  int k_reg = 3;
  double p_exponent = 1.0;
};

struct BoundsReport {
  double gamma1 = 0, kappa = 0, gamma2 = 0;
  double kappa_tilde = 0, gamma1_tilde = 0;
  std::vector<SampleViolation> violations;
  bool pass() const { return violations.empty(); }
};

// Tightest constants with gamma1^{-1} I <= B^0 <= kappa^{-1} Bc <= gamma2 I
// over the sample set (quadratic-form inequalities, symmetric eigensolver).
BoundsReport check_pointwise_bounds(const FuchsianSystem& sys, const SampleSet& samples);

struct ResidualReport {
  double b0_symmetry = 0;     // max |h B0 - (h B0)^T|
  double b1_symmetry = 0;
  double bc_commutator = 0;   // max |[P, Bc]|
  double b0_posdef_margin = 0; // min eigenvalue of h-sym B0 over samples
  std::vector<SampleViolation> violations;
  bool pass(double tol) const;
};

// Symmetry/commutation/positivity residuals at the samples.
ResidualReport check_residuals(const FuchsianSystem& sys, const SampleSet& samples);

struct GateResult {
  bool pass = false;
  double lhs = 0, rhs = 0;
};

// kappa > (1/2) gamma1 max{ beta1+beta3+beta5+beta7 + 2 lambda3,
//                           beta1 + 2k(k+1) b }
GateResult kappa_gate(const StructuralConstants& c, int k);

// zeta = kappa_tilde - (1/2) gamma1_tilde (beta1 + (k-1)k b~)
double zeta(const StructuralConstants& c, int k);

// Estimate all constants of the assumptions by sampling; requires a split
// for the singular-part constants (absent split: those are zero).
StructuralConstants estimate_constants(const FuchsianSystem& sys, const SampleSet& samples,
                                       int k_reg, double sigma_loss);

}  // namespace fuchsol

#endif
