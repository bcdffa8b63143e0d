#ifndef FUCHSOL_STENCIL_HPP
#define FUCHSOL_STENCIL_HPP

#include "fuchsol/grid.hpp"

namespace fuchsol {

// Periodic central finite difference of order 2, 4 or 6, applied fiberwise.
Field derivative(const Field& f, int stencil_order = 4);
void derivative_into(const Matrix& values, double h, int stencil_order, Matrix& out);

// Sixth-order Kreiss-Oliger-style filter; eps_d = 0 is the identity.
// Damping factor on mode exp(i theta j): 1 - (eps_d/8)(1 - cos theta)^3.
Field kreiss_oliger(const Field& f, double eps_d);
void kreiss_oliger_inplace(Matrix& values, double eps_d, Matrix& scratch);

// sqrt( sum_{l=0..k} h sum_j |D^l u_j|_h^2 ), D the order-4 stencil.
double sobolev_norm(const Field& f, int k);
double sobolev_norm(const Field& f, int k, const Matrix& fiber_weight);
// same, with the pointwise projector applied first
double sobolev_norm_projected(const Field& f, int k, const Matrix& projector);

// h-weighted discrete L2 pairing  h_spacing * sum_j a_j . (W b_j)
double l2_inner(const Field& a, const Field& b, const Matrix& fiber_weight);

}  // namespace fuchsol

#endif
