#include "ratchet/regimes.hpp"

#include <cmath>
#include <complex>
#include <numbers>
#include <stdexcept>

#include "ratchet/util.hpp"

namespace ratchet {
namespace {

// slope of log(gap) vs log(T) over the largest grid points
double fit_order(const std::vector<double>& Ts, const std::vector<double>& gaps) {
  const std::size_t n = Ts.size();
  const std::size_t use = std::min<std::size_t>(3, n);
  if (use < 2) return 0.0;
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  std::size_t count = 0;
  for (std::size_t i = n - use; i < n; ++i) {
    if (!(gaps[i] > 0)) continue;
    const double x = std::log(Ts[i]);
    const double y = std::log(gaps[i]);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
    ++count;
  }
  if (count < 2) return 0.0;
  const double det = count * sxx - sx * sx;
  if (det == 0.0) return 0.0;
  return -(count * sxy - sx * sy) / det;
}

}  // namespace

GridFunction spectral_shift(const GridFunction& g, double s) {
  const int n = g.n;
  using cd = std::complex<double>;
  const double tau = 2.0 * std::numbers::pi;
  std::vector<cd> coef(n);
  for (int k = 0; k < n; ++k) {
    cd acc(0, 0);
    for (int j = 0; j < n; ++j) {
      const double ph = -tau * k * (j + 0.5) / n;
      acc += g.values[j] * cd(std::cos(ph), std::sin(ph));
    }
    coef[k] = acc / static_cast<double>(n);
  }
  GridFunction out(n);
  for (int j = 0; j < n; ++j) {
    const double x = g.cell_center(j) - s;
    cd acc(0, 0);
    for (int k = 0; k < n; ++k) {
      if (2 * k == n) {
        // Nyquist mode: take the cosine representative
        acc += coef[k] * std::cos(tau * (n / 2) * x);
        continue;
      }
      const int kk = k <= n / 2 ? k : k - n;  // signed frequency in (-n/2, n/2)
      const double ph = tau * kk * x;
      acc += coef[k] * cd(std::cos(ph), std::sin(ph));
    }
    out.values[j] = acc.real();
  }
  return out;
}

ScanResult adiabatic_scan(const PotentialPtr& psi, double omega,
                          const std::vector<double>& Ts, const SolverConfig& cfg) {
  for (std::size_t i = 1; i < Ts.size(); ++i)
    if (!(Ts[i] > Ts[i - 1]))
      throw std::invalid_argument("adiabatic_scan: periods must increase");

  ScanResult result;
  result.v_limit = adiabatic_velocity(omega, psi);
  std::optional<GridFunction> warm;
  std::vector<double> gaps;
  for (double T : Ts) {
    const ForceProtocol p = tilt_to_force(square_wave_tilt(psi, omega, T));
    const PeriodicOrbit orbit = find_periodic_solution(p, 1.0, cfg, warm);
    warm = orbit.initial();
    ScanRow row;
    row.T = T;
    row.v_measured = average_velocity(orbit);
    row.v_limit = result.v_limit;
    row.gap = std::abs(row.v_measured - row.v_limit);
    row.iterations = orbit.iterations;
    gaps.push_back(row.gap);
    result.rows.push_back(row);
  }
  result.fitted_order = fit_order(Ts, gaps);
  return result;
}

ScanResult semiadiabatic_scan(const PotentialPtr& psi, double omega,
                              const std::vector<double>& Ts,
                              const std::vector<double>& tau_fracs,
                              const SolverConfig& cfg) {
  if (!(omega > 0))
    throw std::invalid_argument("semiadiabatic_scan: omega must be positive");
  ScanResult result;
  result.v_limit = semiadiabatic_velocity(omega, psi);
  for (double tf : tau_fracs) {
    std::optional<GridFunction> warm;
    std::vector<double> Tvals, gaps;
    for (double T : Ts) {
      const ForceProtocol p = tilt_to_force(semiadiabatic_tilt(psi, omega, T, tf * T));
      const PeriodicOrbit orbit = find_periodic_solution(p, 1.0, cfg, warm);
      warm = orbit.initial();
      ScanRow row;
      row.T = T;
      row.tau_frac = tf;
      row.v_measured = average_velocity(orbit);
      row.v_limit = result.v_limit;
      row.gap = std::abs(row.v_measured - row.v_limit);
      row.iterations = orbit.iterations;
      result.rows.push_back(row);
      Tvals.push_back(T);
      gaps.push_back(row.gap);
    }
    if (tf == tau_fracs.back()) result.fitted_order = fit_order(Tvals, gaps);
  }
  return result;
}

StokesReport stokes_drift_check(const PotentialPtr& psi, double omega,
                                const SolverConfig& cfg) {
  StokesReport rep;
  if (omega == 0.0) throw std::invalid_argument("stokes_drift_check: omega must be nonzero");
  rep.v_limit = semiadiabatic_velocity(omega, psi);
  const ForceProtocol p = ForceProtocol::traveling(psi, omega);
  const GridFunction gstar = stationary_density(omega, psi, 1.0, cfg.n);
  const PeriodicOrbit orbit = find_periodic_solution(p, 1.0, cfg, gstar);
  rep.v_measured = average_velocity(orbit);
  rep.iterations = orbit.iterations;
  rep.closure_residual = orbit.closure_residual;
  double dev = 0;
  for (const auto& [t, g] : orbit.snapshots) {
    const GridFunction shifted = spectral_shift(gstar, omega * t);
    dev = std::max(dev, l1_distance(g, shifted));
  }
  rep.max_orbit_l1_dev = dev;
  return rep;
}

HomotopyResult homotopy_study(const PotentialPtr& psi, double arc_a, double arc_b,
                              double omega, const std::vector<double>& lambdas) {
  double L = frac(arc_b - arc_a);
  if (L == 0.0) L = 1.0;
  // psi must increase along the arc
  const int samples = 512;
  double prev = psi->value(arc_a);
  for (int i = 1; i <= samples; ++i) {
    const double x = arc_a + L * i / samples;
    const double cur = psi->value(x);
    if (cur < prev - 1e-10)
      throw std::invalid_argument("homotopy_study: potential not increasing on arc at x = " +
                                  format_double(frac(x)));
    prev = cur;
  }

  HomotopyResult result;
  for (double lambda : lambdas) {
    HomotopyRow row;
    row.lambda = lambda;
    const PotentialPtr plam =
        lambda == 0.0 ? psi : make_squeeze_potential(lambda, psi, arc_a, arc_b);
    row.v_adiabatic = adiabatic_velocity(omega, plam);
    result.rows.push_back(row);
  }
  const PotentialPtr limit = make_arc_limit_potential(psi, arc_a, arc_b);
  result.v_limit = adiabatic_velocity(omega, limit);
  return result;
}

}  // namespace ratchet
