#ifndef FUCHSOL_FIT_HPP
#define FUCHSOL_FIT_HPP

#include <string>
#include <vector>

#include "fuchsol/grid.hpp"

namespace fuchsol {
namespace lab {

// A positive norm time series on t < 0, times strictly increasing toward 0-.
struct DecaySeries {
  std::vector<double> times;
  std::vector<double> values;
  std::string label;
};

struct FitWindow {
  double t_a = -1.0, t_b = -1e-6;  // fit on t in [t_a, t_b]
  // default window: the last two decades of |t|, first 20% of the
  // in-window samples excluded
  static FitWindow late_window(const DecaySeries& s);
};

struct FitResult {
  double exponent = 0.0;   // slope of log(value) vs log(-t)
  double intercept = 0.0;
  double r_squared = 0.0;
  FitWindow window;
  int n_used = 0;
};

FitResult fit_power_law(const DecaySeries& series, const FitWindow& window);

struct LimitExtract {
  Vector limit;            // flattened field values
  double error_bound = 0.0;
  bool consistent = true;  // false: fit residual > 50%, last snapshot returned
};

// Richardson-style extrapolation u(t) = u(0) + c |t|^rate from the last two
// snapshots; the third-from-last gives the residual bound.
LimitExtract limit_extract(const std::vector<Field>& snapshots, double predicted_rate);

struct EnergyCheckReport {
  double calibration_c = 0.0;   // max Q(t)/Q_ref over the calibration window
  double worst_ratio = 0.0;     // max over later samples of Q(t)/Q_ref
  bool pass = false;            // worst_ratio <= 5 * calibration_c
};

// Q(t) = |u|^2_{Hk} - int (1/tau)|P u|^2_{Hk} dtau + sup|F~|^2_{Hk} against
// Q_ref = |u(T0)|^2_{Hk} + sup|F~|^2_{Hk}; C calibrated on the first samples.
EnergyCheckReport energy_estimate_check(const std::vector<double>& times,
                                        const std::vector<double>& energy_q,
                                        double q_reference, int calibration_samples = 10);

}  // namespace lab
}  // namespace fuchsol

#endif
