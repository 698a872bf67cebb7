#include "ratchet/inequality.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <stdexcept>

#include "ratchet/util.hpp"

namespace ratchet {
namespace {

void check_increasing(const ScalarFunc& f, double lo, double hi, int n) {
  double prev = f(lo);
  for (int i = 1; i <= n; ++i) {
    const double cur = f(lo + (hi - lo) * i / n);
    if (cur < prev - 1e-12)
      throw std::invalid_argument("monotonicity check failed at x = " +
                                  format_double(lo + (hi - lo) * i / n));
    prev = cur;
  }
}

void check_convex(const ScalarFunc& phi, double lo, double hi, int n) {
  if (!(hi > lo)) return;
  const double h = (hi - lo) / n;
  double fm = phi(lo), f0 = phi(lo + h);
  for (int i = 1; i < n; ++i) {
    const double fp = phi(lo + (i + 1) * h);
    if (fp - 2 * f0 + fm < -1e-10 * std::max(1.0, std::abs(f0)))
      throw std::invalid_argument("convexity check failed at x = " +
                                  format_double(lo + i * h));
    fm = f0;
    f0 = fp;
  }
}

void check_odd_positive(const ScalarFunc& Phi, double hi, int n) {
  for (int i = 1; i <= n; ++i) {
    const double z = hi * i / n;
    const double s = Phi(z) + Phi(-z);
    if (std::abs(s) > 1e-12 * std::max(1.0, std::abs(Phi(z))))
      throw std::invalid_argument("oddness check failed at z = " + format_double(z));
    if (!(Phi(z) > 0))
      throw std::invalid_argument("Phi must be positive on positives, failed at z = " +
                                  format_double(z));
  }
}

// product trapezoid over the triangle 0 <= y <= x <= 1
double triangle_trapezoid(const std::function<double(double, double)>& f, int n) {
  double outer = 0;
  const double h = 1.0 / n;
  for (int i = 0; i <= n; ++i) {
    const double x = i * h;
    double inner = 0;
    if (i > 0) {
      for (int j = 0; j <= i; ++j) {
        const double wj = (j == 0 || j == i) ? 0.5 : 1.0;
        inner += wj * f(x, j * h);
      }
      inner *= h;
    }
    const double wi = (i == 0 || i == n) ? 0.5 : 1.0;
    outer += wi * inner;
  }
  return outer * h;
}

double square_trapezoid(const std::function<double(double, double)>& f, int n) {
  double outer = 0;
  const double h = 1.0 / n;
  for (int i = 0; i <= n; ++i) {
    double inner = 0;
    for (int j = 0; j <= n; ++j) {
      const double wj = (j == 0 || j == n) ? 0.5 : 1.0;
      inner += wj * f(i * h, j * h);
    }
    const double wi = (i == 0 || i == n) ? 0.5 : 1.0;
    outer += wi * inner * h;
  }
  return outer * h;
}

double richardson(double coarse, double fine) { return (4.0 * fine - coarse) / 3.0; }

double trapezoid(const ScalarFunc& f, double a, double b, int n) {
  double s = 0.5 * (f(a) + f(b));
  for (int i = 1; i < n; ++i) s += f(a + (b - a) * i / n);
  return s * (b - a) / n;
}

}  // namespace

double double_integral_inequality(const ScalarFunc& f, const ScalarFunc& phi,
                                  const ScalarFunc& Phi, int n) {
  if (n < 8) throw std::invalid_argument("double_integral_inequality: n too small");
  check_increasing(f, 0.0, 1.0, n);
  const double range = f(1.0) - f(0.0);
  check_convex(phi, 0.0, std::max(range, 1e-6), n);
  if (phi(0.0) > 1e-12)
    throw std::invalid_argument("phi(0) must be <= 0 (got " + format_double(phi(0.0)) +
                                ")");
  check_odd_positive(Phi, 0.5, n / 2);

  auto integrand = [&](double x, double y) {
    return phi(f(x) - f(y)) * Phi(x - y - 0.5);
  };
  const double coarse = triangle_trapezoid(integrand, n / 2);
  const double fine = triangle_trapezoid(integrand, n);
  return richardson(coarse, fine);
}

double discrete_window_inequality(const std::vector<double>& x, const ScalarFunc& phi) {
  if (x.empty() || x.size() % 2 != 0)
    throw std::invalid_argument("discrete_window_inequality: need 2m inputs");
  const int m = static_cast<int>(x.size()) / 2;
  double total = 0;
  for (double xi : x) {
    if (xi < 0) throw std::invalid_argument("discrete_window_inequality: negative input");
    total += xi;
  }
  if (phi(0.0) > 0)
    throw std::invalid_argument("discrete_window_inequality: phi(0) must be <= 0");
  check_convex(phi, 0.0, std::max(total, 1e-6), 256);

  double lhs = 0, rhs = 0;
  for (int i = 1; i <= m; ++i) {
    double s = 0;
    for (int j = 1; j <= m + 1; ++j) s += x[static_cast<std::size_t>(i + j - 2)];
    lhs += phi(s);
  }
  for (int i = 1; i <= m + 1; ++i) {
    double s = 0;
    for (int j = 1; j <= m; ++j) s += x[static_cast<std::size_t>(i + j - 2)];
    rhs += phi(s);
  }
  return lhs - rhs;
}

double rearranged_interval_inequality(const ScalarFunc& f, const ScalarFunc& phi,
                                      double a, double b, int n) {
  if (!(a > 0) || !(a < b))
    throw std::invalid_argument("rearranged_interval_inequality: need 0 < a < b");
  check_increasing(f, 0.0, a + b, n);
  if (phi(0.0) > 0)
    throw std::invalid_argument("rearranged_interval_inequality: phi(0) must be <= 0");
  const double range = f(a + b) - f(0.0);
  check_convex(phi, 0.0, std::max(range, 1e-6), n);

  auto ib = [&](double x) { return phi(f(x + b) - f(x)); };
  auto ia = [&](double x) { return phi(f(x + a) - f(x)); };
  const double first = richardson(trapezoid(ib, 0.0, a, n / 2), trapezoid(ib, 0.0, a, n));
  const double second =
      richardson(trapezoid(ia, 0.0, b, n / 2), trapezoid(ia, 0.0, b, n));
  return first - second;
}

double evaluate_V(const ScalarFunc& F, double omega, int n) {
  if (!(omega > 0)) throw std::invalid_argument("evaluate_V: omega must be positive");
  for (int i = 0; i <= n; ++i) {
    const double v = F(static_cast<double>(i) / n);
    if (!(v > 0))
      throw std::invalid_argument("evaluate_V: F must be positive, failed at x = " +
                                  format_double(static_cast<double>(i) / n));
  }
  auto ratio = [&](double x, double y) { return F(y) / F(x); };
  const double tri =
      richardson(triangle_trapezoid(ratio, n / 2), triangle_trapezoid(ratio, n));
  const double sq =
      richardson(square_trapezoid(ratio, n / 2), square_trapezoid(ratio, n));
  return std::expm1(omega) * tri + sq;
}

ScalarFunc random_increasing_function(std::uint64_t seed, int knots, double span) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unif(0.05, 1.0);
  auto values = std::make_shared<std::vector<double>>();
  values->push_back(0.0);
  for (int i = 0; i < knots; ++i) values->push_back(values->back() + unif(rng));
  const double scale = unif(rng) * 2.0;
  for (double& v : *values) v *= scale / values->back();
  const int k = knots;
  return [values, k, span](double x) {
    const double u = std::clamp(x / span, 0.0, 1.0) * k;
    const int i = std::min(static_cast<int>(u), k - 1);
    const double t = u - i;
    return (*values)[i] * (1.0 - t) + (*values)[i + 1] * t;
  };
}

ScalarFunc random_positive_function(std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unif(-1.0, 1.0);
  const double a1 = unif(rng), b1 = unif(rng), a2 = 0.5 * unif(rng), b2 = 0.5 * unif(rng);
  const double c = unif(rng);
  return [=](double x) {
    const double t = 2.0 * std::numbers::pi * x;
    return std::exp(c + a1 * std::cos(t) + b1 * std::sin(t) + a2 * std::cos(2 * t) +
                    b2 * std::sin(2 * t));
  };
}

}  // namespace ratchet
