#ifndef FUCHSOL_PROJECTION_HPP
#define FUCHSOL_PROJECTION_HPP

#include "fuchsol/types.hpp"

namespace fuchsol {

// Constant symmetric projection operator P with complement I - P.
struct ProjectionPair {
  int dim = 0;
  Matrix p;

  ProjectionPair() = default;
  ProjectionPair(int n, Matrix mat);

  Matrix complement() const { return Matrix::Identity(dim, dim) - p; }
  bool is_identity(double tol = 1e-14) const;
  bool is_zero(double tol = 1e-14) const;

  static ProjectionPair identity(int n);
  // diag(mask), mask entries in {0,1}
  static ProjectionPair diagonal(const std::vector<int>& mask);
  // orthonormal basis of range(P), columns
  Matrix range_basis(double tol = 1e-8) const;
};

struct ProjectionReport {
  bool pass = false;
  double idempotency_residual = 0.0;  // max |P^2 - P|
  double symmetry_residual = 0.0;     // max |P^T - P|
};

ProjectionReport check_projection(const ProjectionPair& proj, double tol);

}  // namespace fuchsol

#endif
