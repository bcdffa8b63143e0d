#include "fuchsol/div_b.hpp"

#include <Eigen/LU>
#include <cmath>

namespace fuchsol {

namespace {

// Div B assembled with central differences of step `scale`.
Matrix assemble(const FuchsianSystem& sys, double t, double x, const Vector& v,
                const Vector& w, double scale) {
  const int n = sys.fiber_dim;
  Matrix out = Matrix::Zero(n, n);
  Matrix mp(n, n), mm(n, n), b0(n, n), b1(n, n), bc(n, n);
  Vector rhs(n), fv(n);

  const double ht = scale * std::max(1.0, std::abs(t));
  // keep t strictly negative on both stencil legs
  const double ht_eff = std::min(ht, 0.45 * std::abs(t));
  sys.b0(t + ht_eff, x, v, mp);
  sys.b0(t - ht_eff, x, v, mm);
  out += (mp - mm) / (2.0 * ht_eff);

  sys.b0(t, x, v, b0);
  if (sys.b1)
    sys.b1(t, x, v, b1);
  else
    b1.setZero(n, n);
  sys.bc(t, x, v, bc);
  sys.eval_f(t, x, v, fv);

  rhs = -b1 * w + (1.0 / t) * (bc * (sys.proj.p * v)) + fv;
  Eigen::PartialPivLU<Matrix> lu(b0);
  if (std::abs(lu.determinant()) < 1e-300)
    throw DomainError("div_b: singular B0 at sample");
  const Vector z = lu.solve(rhs);

  // D_v B0 . z and D_v B1 . w, directional central differences
  const double zn = z.norm();
  if (zn > 0.0) {
    const double hv = scale * std::max(1.0, v.norm()) / zn;
    sys.b0(t, x, v + hv * z, mp);
    sys.b0(t, x, v - hv * z, mm);
    out += (mp - mm) / (2.0 * hv);
  }
  if (sys.b1) {
    const double hx = scale * std::max(1.0, std::abs(x));
    sys.b1(t, x + hx, v, mp);
    sys.b1(t, x - hx, v, mm);
    out += (mp - mm) / (2.0 * hx);
    const double wn = w.norm();
    if (wn > 0.0) {
      const double hw = scale * std::max(1.0, v.norm()) / wn;
      sys.b1(t, x, v + hw * w, mp);
      sys.b1(t, x, v - hw * w, mm);
      out += (mp - mm) / (2.0 * hw);
    }
  }
  return out;
}

}  // namespace

DivBResult div_b(const FuchsianSystem& sys, double t, double x, const Vector& v,
                 const Vector& w) {
  if (t >= 0.0) throw DomainError("div_b: t must be negative");
  const double step = 1e-5;
  const Matrix coarse = assemble(sys, t, x, v, w, step);
  const Matrix fine = assemble(sys, t, x, v, w, 0.5 * step);
  DivBResult r;
  r.value = fine;
  // central differences are O(step^2); halving leaves 1/4 of the error
  r.fd_error_estimate = (fine - coarse).cwiseAbs().maxCoeff() / 3.0;
  return r;
}

}  // namespace fuchsol
