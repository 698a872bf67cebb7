#include "ratchet/rotation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "ratchet/util.hpp"

namespace ratchet {
namespace {

// Dormand-Prince 5(4) coefficients.
constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
constexpr double a21 = 1.0 / 5;
constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                 a54 = -212.0 / 729;
constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247,
                 a64 = 49.0 / 176, a65 = -5103.0 / 18656;
constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192,
                 b5 = -2187.0 / 6784, b6 = 11.0 / 84;
constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920,
                 e5 = -17253.0 / 339200, e6 = 22.0 / 525, e7 = -1.0 / 40;

// Integrate y' = f(y, t) over [t0, t1] with adaptive steps; abs_tol is the
// total error budget for the span.
double rk45_span(const std::function<double(double, double)>& f, double y, double t0,
                 double t1, double abs_tol) {
  const double span = t1 - t0;
  if (span <= 0) return y;
  double t = t0;
  double h = span / 16.0;
  const double tol_density = abs_tol / span;  // per unit time
  double k1 = f(y, t);
  int rejects_in_a_row = 0;
  while (t < t1 - 1e-14 * std::max(1.0, std::abs(t1))) {
    h = std::min(h, t1 - t);
    const double k2 = f(y + h * a21 * k1, t + c2 * h);
    const double k3 = f(y + h * (a31 * k1 + a32 * k2), t + c3 * h);
    const double k4 = f(y + h * (a41 * k1 + a42 * k2 + a43 * k3), t + c4 * h);
    const double k5 = f(y + h * (a51 * k1 + a52 * k2 + a53 * k3 + a54 * k4), t + c5 * h);
    const double k6 =
        f(y + h * (a61 * k1 + a62 * k2 + a63 * k3 + a64 * k4 + a65 * k5), t + h);
    const double ynew = y + h * (b1 * k1 + b3 * k3 + b4 * k4 + b5 * k5 + b6 * k6);
    const double k7 = f(ynew, t + h);
    const double err =
        std::abs(h * (e1 * k1 + e3 * k3 + e4 * k4 + e5 * k5 + e6 * k6 + e7 * k7));
    const double budget = tol_density * h;
    if (err <= budget || h <= 1e-13 * std::max(1.0, std::abs(t))) {
      if (h <= 1e-13 * std::max(1.0, std::abs(t)) && err > budget)
        throw solver_error("characteristic integrator: step size underflow", err);
      t += h;
      y = ynew;
      k1 = k7;  // FSAL
      rejects_in_a_row = 0;
    } else if (++rejects_in_a_row > 60) {
      throw solver_error("characteristic integrator failed to meet tolerance", err);
    }
    const double safety =
        0.9 * std::pow(budget / std::max(err, 1e-300), 0.2);
    h *= std::clamp(safety, 0.2, 5.0);
  }
  return y;
}

// One protocol period from time offset 0, splitting at segment boundaries.
double advance_period(const ForceProtocol& p, double y, double tol) {
  auto f = [&](double yy, double tt) { return p.force_at(yy, tt); };
  const double T = p.period();
  if (p.is_traveling() || p.segments.size() <= 1) return rk45_span(f, y, 0.0, T, tol);
  const std::vector<double> b = p.boundaries();
  for (std::size_t i = 0; i + 1 < b.size(); ++i)
    y = rk45_span(f, y, b[i], b[i + 1], tol * (b[i + 1] - b[i]) / T);
  return y;
}

}  // namespace

std::vector<double> integrate_characteristic(const ForceProtocol& p, double y0,
                                             int periods, double tol) {
  if (periods < 1) throw std::invalid_argument("integrate_characteristic: periods >= 1");
  std::vector<double> out{y0};
  double y = y0;
  for (int k = 0; k < periods; ++k) {
    // the field is T-periodic, so each period is the same time window
    y = advance_period(p, y, tol);
    out.push_back(y);
  }
  return out;
}

RotationReport poincare_displacement_scan(const ForceProtocol& p,
                                          const RotationConfig& cfg) {
  if (cfg.scan_points < 8)
    throw std::invalid_argument("poincare_displacement_scan: need >= 8 scan points");
  RotationReport rep;

  double dmin = std::numeric_limits<double>::infinity();
  double dmax = -dmin;
  for (int i = 0; i < cfg.scan_points; ++i) {
    const double y0 = static_cast<double>(i) / cfg.scan_points;
    const double y1 = advance_period(p, y0, cfg.tol);
    const double d = y1 - y0;
    dmin = std::min(dmin, d);
    dmax = std::max(dmax, d);
  }
  rep.min_displacement = dmin;
  rep.max_displacement = dmax;
  if (dmin > cfg.decision_band)
    rep.classification = TransportSign::Positive;
  else if (dmax < -cfg.decision_band)
    rep.classification = TransportSign::Negative;
  else
    rep.classification = TransportSign::ZeroOrUndetermined;

  const std::vector<double> lift =
      integrate_characteristic(p, 0.0, cfg.estimate_periods, cfg.tol);
  for (std::size_t k = 0; k + 1 < lift.size(); ++k)
    rep.displacements.push_back(lift[k + 1] - lift[k]);
  rep.rotation_estimate = (lift.back() - lift.front()) / cfg.estimate_periods;
  return rep;
}

TransportSign predict_transport_sign(const ForceProtocol& p, const RotationConfig& cfg) {
  return poincare_displacement_scan(p, cfg).classification;
}

std::vector<ConjectureRow> conjecture_table(const ForceProtocol& p,
                                            const std::vector<double>& sigmas,
                                            const SolverConfig& solver_cfg,
                                            const RotationConfig& cfg) {
  const RotationReport rep = poincare_displacement_scan(p, cfg);
  const double T = p.period();
  std::vector<ConjectureRow> rows;
  for (double sigma : sigmas) {
    ConjectureRow row;
    row.sigma = sigma;
    const PeriodicOrbit orbit = find_periodic_solution(p, sigma, solver_cfg);
    row.v_pde = average_velocity(orbit);
    row.r_over_T = rep.rotation_estimate / T;
    row.gap = std::abs(row.v_pde - row.r_over_T);
    rows.push_back(row);
  }
  return rows;
}

}  // namespace ratchet
