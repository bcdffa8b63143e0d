#include "fuchsol/quadrature.hpp"

#include <array>
#include <cmath>

namespace fuchsol {

namespace {

// Gauss-Kronrod 7-15 nodes/weights on [-1, 1]
constexpr std::array<double, 8> kron_x = {
    0.991455371120813, 0.949107912342759, 0.864864423359769, 0.741531185599394,
    0.586087235467691, 0.405845151377397, 0.207784955007898, 0.0};
constexpr std::array<double, 8> kron_w = {
    0.022935322010529, 0.063092092629979, 0.104790010322250, 0.140653259715525,
    0.169004726639267, 0.190350578064785, 0.204432940075298, 0.209482141084728};
constexpr std::array<double, 4> gauss_w = {
    0.129484966168870, 0.279705391489277, 0.381830050505119, 0.417959183673469};

struct Panel {
  double integral, error;
};

Panel gk15(const std::function<double(double)>& f, double a, double b) {
  const double c = 0.5 * (a + b), hw = 0.5 * (b - a);
  double kron = 0.0, gauss = 0.0;
  for (int i = 0; i < 8; ++i) {
    const double fp = f(c + hw * kron_x[i]);
    const double fm = (i == 7) ? fp : f(c - hw * kron_x[i]);
    const double pair = (i == 7) ? fp : fp + fm;
    kron += kron_w[i] * pair;
    if (i % 2 == 1) gauss += gauss_w[i / 2] * pair;
  }
  Panel p;
  p.integral = kron * hw;
  p.error = std::abs((kron - gauss) * hw);
  // standard sharpened error model
  p.error = std::pow(200.0 * p.error, 1.5);
  return p;
}

double adapt(const std::function<double(double)>& f, double a, double b, double tol,
             int depth) {
  const Panel p = gk15(f, a, b);
  if (p.error <= tol || depth <= 0) return p.integral;
  const double c = 0.5 * (a + b);
  return adapt(f, a, c, 0.5 * tol, depth - 1) + adapt(f, c, b, 0.5 * tol, depth - 1);
}

}  // namespace

double integrate(const std::function<double(double)>& f, double a, double b, double abs_tol,
                 int max_depth) {
  if (a == b) return 0.0;
  return adapt(f, a, b, abs_tol, max_depth);
}

}  // namespace fuchsol
