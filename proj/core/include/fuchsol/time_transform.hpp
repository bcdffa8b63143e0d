#ifndef FUCHSOL_TIME_TRANSFORM_HPP
#define FUCHSOL_TIME_TRANSFORM_HPP

#include "fuchsol/system.hpp"

namespace fuchsol {
namespace oracle {

enum class MapDirection { forward, inverse };

// forward: tau = -(-t)^p; inverse: t = -(-tau)^{1/p}
double map_time(double t, double p, MapDirection dir);

// System in the new time tau = -(-t)^p:
//   B0 unchanged, B1 and F scaled by (-tau)^{(1-p)/p} / p, Bc scaled by 1/p,
//   all arguments re-expressed via t = -(-tau)^{1/p}.
// A singular split with exponent p maps to a standard split (exponent 1).
FuchsianSystem transform_system(const FuchsianSystem& sys, double p);

}  // namespace oracle
}  // namespace fuchsol

#endif
