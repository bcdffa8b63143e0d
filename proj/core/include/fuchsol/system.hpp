#ifndef FUCHSOL_SYSTEM_HPP
#define FUCHSOL_SYSTEM_HPP

#include <array>
#include <optional>
#include <string>

#include "fuchsol/projection.hpp"

namespace fuchsol {

// Singular expansions of the flux and source,
//   B^1 = |t|^{-(1-p)} B1_0 + |t|^{-(1-p/2)} B1_1 + |t|^{-1} B1_2
//   F   = |t|^{-(1-p)} (F~ + F_0) + |t|^{-(1-p/2)} F_1 + |t|^{-1} F_2
// with p = 1 the standard case (powers 0, -1/2, -1).
struct SingularSplit {
  std::array<MatrixEval, 3> b1_parts;
  TimeFieldEval ftilde;              // may be null (== 0)
  std::array<VectorEval, 3> f_parts; // F_0, F_1, F_2; null entries == 0
  double p_exponent = 1.0;

  std::array<double, 3> powers_at(double t) const;
};

// Quasilinear symmetric hyperbolic system on t < 0, one spatial dimension:
//   B^0(t,x,u) du/dt + B^1(t,x,u) du/dx = (1/t) Bc(t,x,u) P u + F(t,x,u).
struct FuchsianSystem {
  std::string name;
  int fiber_dim = 0;
  ProjectionPair proj;
  MatrixEval b0, b1, bc;
  VectorEval f;                     // may be null (== 0)
  std::optional<SingularSplit> split;
  double ball_radius = 1.0;         // admissible |v| bound R
  Matrix inner_product;             // fiber metric h, identity by default

  // admissible sampling window for structural checks
  double t_min = -1.0;              // most negative admissible time
  double t_max = -1e-4;             // closest-to-zero admissible time
  double x_min = 0.0;
  double x_period = 2.0 * 3.14159265358979323846;

  void finish_setup();              // fills defaults, validates shapes

  void eval_b0(double t, double x, const Vector& v, Matrix& out) const { b0(t, x, v, out); }
  void eval_f(double t, double x, const Vector& v, Vector& out) const;

  // recompose flux/source from the split at (t,x,v)
  void split_b1(double t, double x, const Vector& v, Matrix& out, Matrix& work) const;
  void split_f(double t, double x, const Vector& v, Vector& out, Vector& work) const;
};

struct SplitResidual {
  double b1_rel = 0.0;
  double f_rel = 0.0;
  double pf2 = 0.0;   // max |P F_2| over samples
};

// recomposition residuals of the split against b1 and f at one point
SplitResidual split_residual(const FuchsianSystem& sys, double t, double x, const Vector& v);

}  // namespace fuchsol

#endif
