#ifndef FUCHSOL_QUADRATURE_HPP
#define FUCHSOL_QUADRATURE_HPP

#include <functional>

namespace fuchsol {

// Adaptive Gauss-Kronrod (7-15) to absolute tolerance; f smooth on [a, b].
double integrate(const std::function<double(double)>& f, double a, double b,
                 double abs_tol = 1e-12, int max_depth = 48);

}  // namespace fuchsol

#endif
