#include "fuchsol/time_transform.hpp"

#include <cmath>

namespace fuchsol {
namespace oracle {

double map_time(double t, double p, MapDirection dir) {
  if (t >= 0.0) throw DomainError("map_time: time must be negative");
  if (p <= 0.0 || p > 1.0) throw DomainError("map_time: p must be in (0, 1]");
  return dir == MapDirection::forward ? -std::pow(-t, p) : -std::pow(-t, 1.0 / p);
}

FuchsianSystem transform_system(const FuchsianSystem& sys, double p) {
  if (p <= 0.0 || p > 1.0) throw DomainError("transform_system: p must be in (0, 1]");
  FuchsianSystem out = sys;
  out.name = sys.name + "-tau";
  auto t_of = [p](double tau) { return -std::pow(-tau, 1.0 / p); };
  auto scale = [p](double tau) { return std::pow(-tau, (1.0 - p) / p) / p; };

  const MatrixEval b0 = sys.b0, b1 = sys.b1, bc = sys.bc;
  const VectorEval f = sys.f;
  out.b0 = [b0, t_of](double tau, double x, const Vector& v, Matrix& m) {
    b0(t_of(tau), x, v, m);
  };
  out.bc = [bc, t_of, p](double tau, double x, const Vector& v, Matrix& m) {
    bc(t_of(tau), x, v, m);
    m /= p;
  };
  if (b1)
    out.b1 = [b1, t_of, scale](double tau, double x, const Vector& v, Matrix& m) {
      b1(t_of(tau), x, v, m);
      m *= scale(tau);
    };
  if (f)
    out.f = [f, t_of, scale](double tau, double x, const Vector& v, Vector& w) {
      f(t_of(tau), x, v, w);
      w *= scale(tau);
    };

  if (sys.split) {
    // |t|^{-(1-p)} B_0 + |t|^{-(1-p/2)} B_1 + |t|^{-1} B_2 with the overall
    // (-tau)^{(1-p)/p}/p factor collapses to parts (B_a o t_of)/p at powers
    // (1, |tau|^{-1/2}, |tau|^{-1}).
    SingularSplit tsplit;
    tsplit.p_exponent = 1.0;
    for (int a = 0; a < 3; ++a) {
      if (const MatrixEval part = sys.split->b1_parts[a])
        tsplit.b1_parts[a] = [part, t_of, p](double tau, double x, const Vector& v, Matrix& m) {
          part(t_of(tau), x, v, m);
          m /= p;
        };
      if (const VectorEval part = sys.split->f_parts[a])
        tsplit.f_parts[a] = [part, t_of, p](double tau, double x, const Vector& v, Vector& w) {
          part(t_of(tau), x, v, w);
          w /= p;
        };
    }
    if (const TimeFieldEval ft = sys.split->ftilde)
      tsplit.ftilde = [ft, t_of, p](double tau, double x, Vector& w) {
        ft(t_of(tau), x, w);
        w /= p;
      };
    out.split = tsplit;
  }
  out.t_min = map_time(sys.t_min, p, MapDirection::forward);
  out.t_max = map_time(sys.t_max, p, MapDirection::forward);
  return out;
}

}  // namespace oracle
}  // namespace fuchsol
