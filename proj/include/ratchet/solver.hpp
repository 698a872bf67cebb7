#ifndef RATCHET_SOLVER_HPP
#define RATCHET_SOLVER_HPP

#include <functional>
#include <optional>
#include <utility>
#include <vector>

#include "ratchet/grid.hpp"
#include "ratchet/potential.hpp"

namespace ratchet {

struct SolverConfig {
  int n = 256;
  double dt = 1e-3;
  double theta = 1.0;      // implicitness weight in [1/2, 1]; 1 keeps positivity
  double tolerance = 1e-8;  // periodic-orbit L1 closure tolerance
  int max_period_iterations = 10000;
  int snapshot_interior = 64;  // uniformly spaced snapshot times per period
};

/// Attracting time-periodic solution, sampled over one period.
struct PeriodicOrbit {
  ForceProtocol protocol;
  double sigma = 0;
  /// time-ordered (t, density) pairs spanning [0, T], both endpoints included
  std::vector<std::pair<double, GridFunction>> snapshots;
  double closure_residual = 0;
  int iterations = 0;

  const GridFunction& initial() const { return snapshots.front().second; }
  double period() const { return snapshots.back().first; }
};

/// One theta-weighted step of the exponentially fitted (Scharfetter-Gummel)
/// conservative flux scheme for g_t = sigma g_xx - (F g)_x.
/// Mass is preserved to roundoff; theta = 1 also preserves positivity.
GridFunction step(const GridFunction& g, const std::function<double(double)>& force,
                  double sigma, double dt, double theta = 1.0);

/// Composition of steps from t0 to t1; dt is subdivided so protocol segment
/// boundaries are hit exactly.
GridFunction evolve(const GridFunction& g0, const ForceProtocol& p, double sigma,
                    double t0, double t1, const SolverConfig& cfg);

/// Iterates the period map from the uniform density (or the given warm start)
/// until the L1 closure drops below cfg.tolerance, then records one period.
/// Throws solver_error with the last residual on non-convergence.
PeriodicOrbit find_periodic_solution(const ForceProtocol& p, double sigma,
                                     const SolverConfig& cfg,
                                     std::optional<GridFunction> warm_start = {});

/// Measured average drift velocity -(1/T) int int Psi_x g of the orbit.
/// For unbiased tilting protocols the reduced form -(1/T) int int psi_x g
/// is returned; both forms agree to roundoff there.
double average_velocity(const PeriodicOrbit& orbit);

/// Both quadrature routes (full and tilting-reduced); reduced is meaningful
/// only when the protocol is a tilting one.
std::pair<double, double> average_velocity_forms(const PeriodicOrbit& orbit);

/// Relative entropy of g(t) against the co-evolved reference orbit, sampled
/// at every step boundary over `periods` periods, with a fitted decay rate.
EntropyTrace entropy_decay_trace(const GridFunction& g0, const ForceProtocol& p,
                                 double sigma, const PeriodicOrbit& reference,
                                 const SolverConfig& cfg, int periods = 1);

/// Wraps a compactly supported line density onto the circle:
/// rho_circle(x) = sum_k rho(x + k), conservatively binned to n cells.
/// Samples are (x, value) pairs on a uniform grid; total mass must be within
/// 1e-6 of 1.
GridFunction wrap_line_density(const std::vector<std::pair<double, double>>& samples,
                               int n);

}  // namespace ratchet

#endif
