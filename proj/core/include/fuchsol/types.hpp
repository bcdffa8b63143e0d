#ifndef FUCHSOL_TYPES_HPP
#define FUCHSOL_TYPES_HPP

#include <Eigen/Dense>
#include <functional>
#include <stdexcept>

namespace fuchsol {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

// Coefficient evaluators fill preallocated outputs; (t, x, v) with t < 0.
using MatrixEval = std::function<void(double t, double x, const Vector& v, Matrix& out)>;
using VectorEval = std::function<void(double t, double x, const Vector& v, Vector& out)>;
// v-independent vector field, e.g. the bounded source part F~(t, x).
using TimeFieldEval = std::function<void(double t, double x, Vector& out)>;

struct DomainError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct ShapeError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};
struct StructuralFailure : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace fuchsol

#endif
