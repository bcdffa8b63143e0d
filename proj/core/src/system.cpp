#include "fuchsol/system.hpp"

#include <cmath>

namespace fuchsol {

std::array<double, 3> SingularSplit::powers_at(double t) const {
  const double a = std::abs(t);
  const double p = p_exponent;
  return {std::pow(a, -(1.0 - p)), std::pow(a, -(1.0 - 0.5 * p)), 1.0 / a};
}

void FuchsianSystem::finish_setup() {
  if (fiber_dim <= 0) throw ShapeError("fiber_dim must be positive");
  if (proj.dim == 0) proj = ProjectionPair::identity(fiber_dim);
  if (proj.dim != fiber_dim) throw ShapeError("projection dim mismatch");
  if (inner_product.size() == 0) inner_product = Matrix::Identity(fiber_dim, fiber_dim);
  if (inner_product.rows() != fiber_dim || inner_product.cols() != fiber_dim)
    throw ShapeError("inner_product dim mismatch");
  if (!b0 || !bc) throw ShapeError("b0 and bc evaluators are required");
}

void FuchsianSystem::eval_f(double t, double x, const Vector& v, Vector& out) const {
  if (f)
    f(t, x, v, out);
  else
    out.setZero(fiber_dim);
}

void FuchsianSystem::split_b1(double t, double x, const Vector& v, Matrix& out,
                              Matrix& work) const {
  out.setZero(fiber_dim, fiber_dim);
  if (!split) return;
  const auto pw = split->powers_at(t);
  for (int a = 0; a < 3; ++a) {
    if (!split->b1_parts[a]) continue;
    split->b1_parts[a](t, x, v, work);
    out += pw[a] * work;
  }
}

void FuchsianSystem::split_f(double t, double x, const Vector& v, Vector& out,
                             Vector& work) const {
  out.setZero(fiber_dim);
  if (!split) return;
  const auto pw = split->powers_at(t);
  if (split->ftilde) {
    split->ftilde(t, x, work);
    out += pw[0] * work;
  }
  for (int a = 0; a < 3; ++a) {
    if (!split->f_parts[a]) continue;
    split->f_parts[a](t, x, v, work);
    out += pw[a] * work;
  }
}

SplitResidual split_residual(const FuchsianSystem& sys, double t, double x, const Vector& v) {
  SplitResidual r;
  if (!sys.split) return r;
  const int n = sys.fiber_dim;
  Matrix m1(n, n), m2(n, n), work(n, n);
  Vector f1(n), f2(n), vwork(n);

  if (sys.b1)
    sys.b1(t, x, v, m1);
  else
    m1.setZero(n, n);
  sys.split_b1(t, x, v, m2, work);
  const double b1scale = std::max(m1.cwiseAbs().maxCoeff(), 1e-30);
  r.b1_rel = (m1 - m2).cwiseAbs().maxCoeff() / b1scale;

  sys.eval_f(t, x, v, f1);
  sys.split_f(t, x, v, f2, vwork);
  const double fscale = std::max(f1.cwiseAbs().maxCoeff(), 1e-30);
  r.f_rel = (f1 - f2).cwiseAbs().maxCoeff() / fscale;

  if (sys.split->f_parts[2]) {
    sys.split->f_parts[2](t, x, v, vwork);
    r.pf2 = (sys.proj.p * vwork).cwiseAbs().maxCoeff();
  }
  return r;
}

}  // namespace fuchsol
