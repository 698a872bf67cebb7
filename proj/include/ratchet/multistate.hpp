#ifndef RATCHET_MULTISTATE_HPP
#define RATCHET_MULTISTATE_HPP

#include <functional>
#include <vector>

#include "ratchet/grid.hpp"
#include "ratchet/potential.hpp"
#include "ratchet/solver.hpp"

namespace ratchet {

using SpatialField = std::function<double(double)>;

/// N coupled Fokker-Planck states with transition-rate fields nu_ij(x)
/// (rate from state j to state i), zero diagonal.
struct MultiStateSystem {
  int num_states = 2;
  std::vector<SpatialField> forces;               // F_i = -(Psi_i)_x
  std::vector<std::vector<SpatialField>> rates;   // rates[i][j] = nu_ij
  double sigma = 1.0;

  static MultiStateSystem two_state(SpatialField f1, SpatialField f2, SpatialField nu12,
                                    SpatialField nu21, double sigma);
  double rate(int i, int j, double x) const { return rates[i][j] ? rates[i][j](x) : 0.0; }
};

struct MultiStateDensity {
  std::vector<GridFunction> components;

  double total_mass() const;
  int n() const { return components.empty() ? 0 : components.front().n; }
  static MultiStateDensity uniform(int states, int n);
};

/// Strang-split evolution: half exchange, exponential-fitting transport,
/// half exchange; the per-cell exchange uses the exact matrix exponential.
/// Total mass is conserved to roundoff and components stay nonnegative.
MultiStateDensity ms_evolve(const MultiStateDensity& d0, const MultiStateSystem& sys,
                            double t0, double t1, const SolverConfig& cfg);

/// Stationary solution vector: time-marches from the uniform pair until the
/// per-period L1 change is small, then refines with shifted inverse power
/// iterations on the discrete generator so the stationary residual satisfies
/// ||L g||_1 <= 10 * cfg.tolerance.
MultiStateDensity ms_stationary(const MultiStateSystem& sys, const SolverConfig& cfg);

/// L1 norm of the discrete generator applied to d (stationarity residual).
double ms_stationary_residual(const MultiStateDensity& d, const MultiStateSystem& sys);

/// Transport velocity sum_i int F_i g_i dx.
double ms_velocity(const MultiStateDensity& d, const MultiStateSystem& sys);

enum class MsSign { Negative = -1, Undetermined = 0, Positive = 1 };

struct ClassifyResult {
  MsSign sign = MsSign::Undetermined;
  int case_tag = 0;  // 1: both forces vanish somewhere, 2: one, 3: neither
  double case3_integral = 0;
  std::vector<double> zeros1, zeros2;
};

/// Small-diffusion transport sign for a two-state system, by the taxonomy of
/// which force fields possess zeros.  Throws std::invalid_argument when the
/// forces share a zero (within 1e-8).
ClassifyResult classify_sign(const SpatialField& F1, const SpatialField& F2,
                             const SpatialField& nu12, const SpatialField& nu21);

/// Explicit sigma = 0 stationary pair for zero-free forces (case III):
/// zeta_i >= 0, F1 zeta1 + F2 zeta2 = v, <zeta1 + zeta2, 1> = 1.
struct ZeroDiffusionSolution {
  std::function<double(double)> zeta1, zeta2;
  double M = 0;               // multiplicative constant of the homogeneous part
  double v = 0;               // limit velocity
  double identity_residual = 0;  // max |F1 zeta1 + F2 zeta2 - v| on a dense grid
};

ZeroDiffusionSolution zero_diffusion_case3(const SpatialField& F1, const SpatialField& F2,
                                           const SpatialField& nu12,
                                           const SpatialField& nu21);

/// Randomly tilting ratchet velocity: two states with F1 = -(psi' + omega),
/// F2 = -(psi' + Omega), Omega = -omega nu12/nu21 (unbiased), sigma = 1.
double random_tilt_velocity(double omega, const PotentialPtr& psi, double nu12,
                            double nu21, const SolverConfig& cfg);

}  // namespace ratchet

#endif
