#ifndef RATCHET_ROTATION_HPP
#define RATCHET_ROTATION_HPP

#include <vector>

#include "ratchet/potential.hpp"
#include "ratchet/solver.hpp"

namespace ratchet {

enum class TransportSign { Negative = -1, ZeroOrUndetermined = 0, Positive = 1 };

/// Poincare displacement scan of the characteristic ODE y' = F(y, t).
struct RotationReport {
  /// per-period lift displacements y((k+1)T) - y(kT) of the y0 = 0 trajectory
  std::vector<double> displacements;
  double rotation_estimate = 0;  // (y(KT) - y(0)) / K
  TransportSign classification = TransportSign::ZeroOrUndetermined;
  double min_displacement = 0;  // over scanned initial conditions, one period
  double max_displacement = 0;
};

struct RotationConfig {
  int scan_points = 8;       // initial conditions uniformly on [0,1)
  int estimate_periods = 32; // K
  double tol = 1e-10;        // per-period integration error target
  double decision_band = 1e-8;
};

/// Lift trajectory sampled at t = kT, k = 0..periods, by adaptive embedded
/// Runge-Kutta (Dormand-Prince 5(4)); protocol segment boundaries are hit
/// exactly.
std::vector<double> integrate_characteristic(const ForceProtocol& p, double y0,
                                             int periods, double tol = 1e-10);

RotationReport poincare_displacement_scan(const ForceProtocol& p,
                                          const RotationConfig& cfg = {});

/// Classification carries the meaning: for sufficiently small sigma the sign
/// of the transport velocity matches.
TransportSign predict_transport_sign(const ForceProtocol& p,
                                     const RotationConfig& cfg = {});

/// Exploratory table comparing PDE velocities with the rotation number.
struct ConjectureRow {
  double sigma = 0;
  double v_pde = 0;
  double r_over_T = 0;
  double gap = 0;
};

std::vector<ConjectureRow> conjecture_table(const ForceProtocol& p,
                                            const std::vector<double>& sigmas,
                                            const SolverConfig& solver_cfg,
                                            const RotationConfig& cfg = {});

}  // namespace ratchet

#endif
