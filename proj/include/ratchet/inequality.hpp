#ifndef RATCHET_INEQUALITY_HPP
#define RATCHET_INEQUALITY_HPP

#include <cstdint>
#include <functional>
#include <vector>

namespace ratchet {

using ScalarFunc = std::function<double(double)>;

/// int_0^1 int_0^x phi(f(x)-f(y)) Phi(x-y-1/2) dy dx by product trapezoid
/// with one Richardson halving.  Checks that f is increasing on n samples,
/// phi is convex (second differences) with phi(0) <= 1e-12, and Phi is odd
/// and positive on positives.  The value is >= -1e-8 for valid inputs.
double double_integral_inequality(const ScalarFunc& f, const ScalarFunc& phi,
                                  const ScalarFunc& Phi, int n = 512);

/// LHS - RHS of the discrete window inequality
///   sum_{i=1}^m phi(sum_{j=1}^{m+1} x_{i+j-1})
///     >= sum_{i=1}^{m+1} phi(sum_{j=1}^m x_{i+j-1})
/// for 2m nonnegative numbers and convex phi with phi(0) <= 0.
double discrete_window_inequality(const std::vector<double>& x, const ScalarFunc& phi);

/// int_0^a phi(f(x+b)-f(x)) dx - int_0^b phi(f(x+a)-f(x)) dx for increasing f
/// on [0, a+b], convex phi with phi(0) <= 0, and 0 < a < b.
double rearranged_interval_inequality(const ScalarFunc& f, const ScalarFunc& phi,
                                      double a, double b, int n = 512);

/// V_omega(F) = alpha(omega) int int_{y<=x} F(y)/F(x) + int int F(y)/F(x),
/// whose global minimum over positive F is alpha(omega)/omega, attained
/// exactly at F = C e^{omega x}.
double evaluate_V(const ScalarFunc& F, double omega, int n = 512);

/// Piecewise-linear increasing function on [0, span] from a seeded draw.
ScalarFunc random_increasing_function(std::uint64_t seed, int knots = 12,
                                      double span = 1.0);

/// exp of a seeded low-order trigonometric polynomial (positive, 1-periodic).
ScalarFunc random_positive_function(std::uint64_t seed);

}  // namespace ratchet

#endif
