#ifndef RATCHET_REGIMES_HPP
#define RATCHET_REGIMES_HPP

#include <vector>

#include "ratchet/closed_form.hpp"
#include "ratchet/potential.hpp"
#include "ratchet/solver.hpp"

namespace ratchet {

struct ScanRow {
  double T = 0;
  double tau_frac = 0;  // 0 for adiabatic rows
  double v_measured = 0;
  double v_limit = 0;
  double gap = 0;
  int iterations = 0;
};

struct ScanResult {
  std::vector<ScanRow> rows;
  double v_limit = 0;
  double fitted_order = 0;  // from |v(T) - limit| ~ C / T^p on the largest T's
};

/// Square-wave tilting at increasing periods against the adiabatic limit
/// -(A(omega) + A(-omega))/2.  Each period warm-starts from the previous
/// orbit's initial density.
ScanResult adiabatic_scan(const PotentialPtr& psi, double omega,
                          const std::vector<double>& Ts, const SolverConfig& cfg);

/// Two-segment tilt [(tau, Omega), (T - tau, omega)] against the limit
/// omega - A(omega), over the grid Ts x tau_fracs.
ScanResult semiadiabatic_scan(const PotentialPtr& psi, double omega,
                              const std::vector<double>& Ts,
                              const std::vector<double>& tau_fracs,
                              const SolverConfig& cfg);

/// Traveling potential psi(x - omega t): the orbit must equal the shifted
/// stationary density and the measured velocity must equal omega - A(omega).
struct StokesReport {
  double v_measured = 0;
  double v_limit = 0;
  double max_orbit_l1_dev = 0;  // against the spectrally shifted g*
  double closure_residual = 0;
  int iterations = 0;
};

StokesReport stokes_drift_check(const PotentialPtr& psi, double omega,
                                const SolverConfig& cfg);

/// Closed-form study of the squeeze family over a lambda grid, with the
/// limiting velocity of the arc-stretched potential appended.
struct HomotopyRow {
  double lambda = 0;
  double v_adiabatic = 0;
};

struct HomotopyResult {
  std::vector<HomotopyRow> rows;
  double v_limit = 0;  // -(A(omega, psi_1) + A(-omega, psi_1)) / 2
};

HomotopyResult homotopy_study(const PotentialPtr& psi, double arc_a, double arc_b,
                              double omega, const std::vector<double>& lambdas);

/// Band-limited (trigonometric) shift of periodic cell samples by s.
GridFunction spectral_shift(const GridFunction& g, double s);

}  // namespace ratchet

#endif
