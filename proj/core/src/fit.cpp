#include "fuchsol/fit.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace fuchsol {
namespace lab {

FitWindow FitWindow::late_window(const DecaySeries& s) {
  FitWindow w;
  if (s.times.empty()) return w;
  const double t_last = s.times.back();
  w.t_b = t_last;
  w.t_a = -std::abs(t_last) * 100.0;  // two decades
  w.t_a = std::max(w.t_a, s.times.front());
  // drop the first 20% of the in-window samples
  std::vector<double> inwin;
  for (double t : s.times)
    if (t >= w.t_a && t <= w.t_b) inwin.push_back(t);
  if (inwin.size() > 5) w.t_a = inwin[inwin.size() / 5];
  return w;
}

FitResult fit_power_law(const DecaySeries& series, const FitWindow& window) {
  FitResult r;
  r.window = window;
  std::vector<double> lx, ly;
  std::ostringstream bad;
  bool has_bad = false;
  for (size_t i = 0; i < series.times.size(); ++i) {
    const double t = series.times[i];
    if (t < window.t_a || t > window.t_b) continue;
    if (!(series.values[i] > 0.0)) {
      if (has_bad) bad << ", ";
      bad << i;
      has_bad = true;
      continue;
    }
    lx.push_back(std::log(-t));
    ly.push_back(std::log(series.values[i]));
  }
  if (has_bad)
    throw DomainError("fit_power_law: nonpositive values at indices " + bad.str());
  if (lx.size() < 8) throw DomainError("fit_power_law: fewer than 8 samples in window");

  const size_t n = lx.size();
  double sx = 0, sy = 0, sxx = 0, sxy = 0, syy = 0;
  for (size_t i = 0; i < n; ++i) {
    sx += lx[i];
    sy += ly[i];
    sxx += lx[i] * lx[i];
    sxy += lx[i] * ly[i];
    syy += ly[i] * ly[i];
  }
  const double denom = n * sxx - sx * sx;
  r.exponent = (n * sxy - sx * sy) / denom;
  r.intercept = (sy - r.exponent * sx) / n;
  const double ss_tot = syy - sy * sy / n;
  double ss_res = 0;
  for (size_t i = 0; i < n; ++i) {
    const double e = ly[i] - (r.intercept + r.exponent * lx[i]);
    ss_res += e * e;
  }
  r.r_squared = ss_tot > 0 ? std::max(0.0, 1.0 - ss_res / ss_tot) : 1.0;
  r.n_used = static_cast<int>(n);
  return r;
}

LimitExtract limit_extract(const std::vector<Field>& snapshots, double predicted_rate) {
  if (snapshots.size() < 3)
    throw DomainError("limit_extract: need at least 3 snapshots");
  const Field& f2 = snapshots[snapshots.size() - 1];
  const Field& f1 = snapshots[snapshots.size() - 2];
  const Field& f0 = snapshots[snapshots.size() - 3];
  const double w2 = std::pow(std::abs(f2.time), predicted_rate);
  const double w1 = std::pow(std::abs(f1.time), predicted_rate);
  const double w0 = std::pow(std::abs(f0.time), predicted_rate);

  LimitExtract out;
  const Eigen::Map<const Vector> v2(f2.values.data(), f2.values.size());
  const Eigen::Map<const Vector> v1(f1.values.data(), f1.values.size());
  const Eigen::Map<const Vector> v0(f0.values.data(), f0.values.size());

  // u(t) = u0 + c |t|^rate through the last two snapshots
  Vector limit = (v2 * w1 - v1 * w2) / (w1 - w2);
  Vector coeff = (v1 - v2) / (w1 - w2);
  // model residual at the third snapshot
  const Vector pred0 = limit + coeff * w0;
  const double resid = (pred0 - v0).cwiseAbs().maxCoeff();
  const double change = (v0 - v2).cwiseAbs().maxCoeff();

  if (change > 0.0 && resid > 0.5 * change) {
    out.consistent = false;
    out.limit = v2;
    out.error_bound = (v2 - v1).cwiseAbs().maxCoeff() + resid;
    return out;
  }
  out.limit = std::move(limit);
  out.error_bound = resid;
  return out;
}

EnergyCheckReport energy_estimate_check(const std::vector<double>& times,
                                        const std::vector<double>& energy_q,
                                        double q_reference, int calibration_samples) {
  EnergyCheckReport rep;
  if (times.size() != energy_q.size() || times.empty())
    throw DomainError("energy_estimate_check: empty or mismatched series");
  const double ref = std::max(q_reference, 1e-300);
  const size_t ncal = std::min<size_t>(calibration_samples, times.size());
  for (size_t i = 0; i < ncal; ++i)
    rep.calibration_c = std::max(rep.calibration_c, energy_q[i] / ref);
  rep.worst_ratio = rep.calibration_c;
  for (size_t i = ncal; i < times.size(); ++i)
    rep.worst_ratio = std::max(rep.worst_ratio, energy_q[i] / ref);
  rep.pass = rep.worst_ratio <= 5.0 * rep.calibration_c;
  return rep;
}

}  // namespace lab
}  // namespace fuchsol
