#ifndef RATCHET_QUADRATURE_HPP
#define RATCHET_QUADRATURE_HPP

#include <functional>
#include <vector>

namespace ratchet {

/// Adaptive Gauss-Kronrod (G7,K15) integration of f over [a, b].
///
/// Bisects intervals until the local Kronrod error estimate meets the
/// tolerance apportioned to the interval; if the recursion depth limit is
/// reached, falls back to doubling a composite rule on the offending
/// subinterval and throws quadrature_error if that still fails to settle.
double integrate(const std::function<double(double)>& f, double a, double b,
                 double rel_tol = 1e-12, double abs_tol = 1e-14);

/// Same, splitting first at the given interior breakpoints.
double integrate_with_breaks(const std::function<double(double)>& f, double a, double b,
                             const std::vector<double>& breaks,
                             double rel_tol = 1e-12, double abs_tol = 1e-14);

/// Iterated adaptive rule for integrals of the form
///   int_a^b ( int_a^x f(x, y) dy ) dx
/// (inner integral over y at fixed x).
double integrate_triangle(const std::function<double(double, double)>& f,
                          double a, double b,
                          double rel_tol = 1e-11, double abs_tol = 1e-13);

/// log of int_a^b exp(u(x)) dx, computed with a max-shift so that the
/// integrand never overflows.  u is assumed continuous.
double log_integrate_exp(const std::function<double(double)>& u, double a, double b,
                         double rel_tol = 1e-12);

/// Cumulative antiderivative sampled on a uniform grid: returns
/// Q[k] = int_a^{a + k (b-a)/cells} f,  k = 0..cells, each subinterval
/// integrated adaptively.
std::vector<double> cumulative_integral(const std::function<double(double)>& f,
                                        double a, double b, int cells,
                                        double rel_tol = 1e-12);

}  // namespace ratchet

#endif
