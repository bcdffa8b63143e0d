#include "fuchsol/projection.hpp"

#include <Eigen/Eigenvalues>

namespace fuchsol {

ProjectionPair::ProjectionPair(int n, Matrix mat) : dim(n), p(std::move(mat)) {
  if (p.rows() != p.cols() || p.rows() != n)
    throw ShapeError("projection matrix must be square of size dim");
}

bool ProjectionPair::is_identity(double tol) const {
  return (p - Matrix::Identity(dim, dim)).cwiseAbs().maxCoeff() <= tol;
}

bool ProjectionPair::is_zero(double tol) const {
  return p.cwiseAbs().maxCoeff() <= tol;
}

ProjectionPair ProjectionPair::identity(int n) {
  return ProjectionPair(n, Matrix::Identity(n, n));
}

ProjectionPair ProjectionPair::diagonal(const std::vector<int>& mask) {
  const int n = static_cast<int>(mask.size());
  Matrix m = Matrix::Zero(n, n);
  for (int i = 0; i < n; ++i) m(i, i) = mask[i] ? 1.0 : 0.0;
  return ProjectionPair(n, m);
}

Matrix ProjectionPair::range_basis(double tol) const {
  Eigen::SelfAdjointEigenSolver<Matrix> es(0.5 * (p + p.transpose()));
  int rank = 0;
  for (int i = 0; i < dim; ++i)
    if (es.eigenvalues()(i) > 1.0 - tol) ++rank;
  Matrix basis(dim, rank);
  int c = 0;
  for (int i = 0; i < dim; ++i)
    if (es.eigenvalues()(i) > 1.0 - tol) basis.col(c++) = es.eigenvectors().col(i);
  return basis;
}

ProjectionReport check_projection(const ProjectionPair& proj, double tol) {
  if (proj.p.rows() != proj.p.cols())
    throw ShapeError("projection matrix is not square");
  ProjectionReport rep;
  rep.idempotency_residual = (proj.p * proj.p - proj.p).cwiseAbs().maxCoeff();
  rep.symmetry_residual = (proj.p.transpose() - proj.p).cwiseAbs().maxCoeff();
  rep.pass = rep.idempotency_residual <= tol && rep.symmetry_residual <= tol;
  return rep;
}

}  // namespace fuchsol
