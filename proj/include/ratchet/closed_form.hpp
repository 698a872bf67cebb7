#ifndef RATCHET_CLOSED_FORM_HPP
#define RATCHET_CLOSED_FORM_HPP

#include "ratchet/grid.hpp"
#include "ratchet/potential.hpp"

namespace ratchet {

/// Coefficients of the stationary tilted problem, evaluated at the scaled
/// arguments (omega/sigma, psi/sigma):
///   alpha  = e^w - 1,          w = omega/sigma
///   beta+  = int e^{w x + psi/sigma}
///   beta-  = int e^{-w x - psi/sigma}
///   beta   = int int_{y<=x} e^{w(y-x) + (psi(y)-psi(x))/sigma}
///   A = alpha / (alpha beta + beta+ beta-),  B = beta+ / (same)
/// For large |w| the exponentials are handled in log space; beta_plus /
/// beta_minus / beta may round to inf in extreme ranges while A and B stay
/// finite.
struct ClosedFormCoeffs {
  double omega = 0;
  double sigma = 1;
  double alpha = 0;
  double beta_plus = 0;
  double beta_minus = 0;
  double beta = 0;
  double A = 0;
  double B = 0;
};

enum class SignPrediction { Negative = -1, Zero = 0, Positive = 1 };

/// Closed-form velocities of one tilting family plus the J sign functional.
struct VelocityReport {
  double v_tilted = 0;
  double v_adiabatic = 0;
  double v_semiadiabatic = 0;
  double J = 0;
  SignPrediction predicted_sign = SignPrediction::Zero;
};

ClosedFormCoeffs compute_coeffs(double omega, const PotentialPtr& psi, double sigma);

/// Samples the stationary density
///   g*(x) = e^{-(omega x + psi)/sigma} (B + A int_0^x e^{(omega y + psi)/sigma})
/// at the n cell centers and renormalizes to unit discrete mass.  The
/// quadrature mass of the sampled formula is checked against 1 (1e-8) as a
/// consistency test of A and B.  n should resolve the density's scale
/// sigma/|omega| with several cells.
GridFunction stationary_density(double omega, const PotentialPtr& psi, double sigma,
                                int n);

/// Asymptotic drift velocity of the tilted potential psi + omega x:  -sigma A.
double tilted_velocity(double omega, const PotentialPtr& psi, double sigma);

/// Adiabatic (slow square-wave switching) limit velocity
///   -(A(omega) + A(-omega)) / 2, rescaled when sigma != 1.
double adiabatic_velocity(double omega, const PotentialPtr& psi, double sigma = 1.0);

/// Sign functional
///   J = 2 / sinh(omega/2) *
///       int int_{y<=x} sinh(psi(x)-psi(y)) sinh(omega (x-y-1/2))
/// whose sign equals the sign of the adiabatic velocity.  Requires omega != 0.
double j_functional(double omega, const PotentialPtr& psi, double sigma = 1.0);

/// Semiadiabatic limit velocity omega - sigma A(omega/sigma, psi/sigma);
/// also the traveling-wave (Stokes drift) velocity.  Lies in [0, omega) for
/// omega > 0, vanishing only for constant psi.
double semiadiabatic_velocity(double omega, const PotentialPtr& psi, double sigma = 1.0);

VelocityReport velocity_report(double omega, const PotentialPtr& psi, double sigma);

}  // namespace ratchet

#endif
