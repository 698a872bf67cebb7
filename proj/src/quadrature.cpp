#include "ratchet/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "ratchet/util.hpp"

namespace ratchet {
namespace {

// Gauss 7 / Kronrod 15 nodes and weights on [-1, 1].
constexpr double kXgk[8] = {
    0.000000000000000000, 0.207784955007898468, 0.405845151377397167,
    0.586087235467691130, 0.741531185599394440, 0.864864423359769073,
    0.949107912342758525, 0.991455371120812639};
constexpr double kWgk[8] = {
    0.209482141084727828, 0.204432940075298892, 0.190350578064785410,
    0.169004726639267903, 0.140653259715525919, 0.104790010322250184,
    0.063092092629978553, 0.022935322010529225};
constexpr double kWg[4] = {
    0.417959183673469388, 0.381830050505118945, 0.279705391489276668,
    0.129484966168869693};

struct GkResult {
  double value;
  double error;
};

GkResult gk15(const std::function<double(double)>& f, double a, double b) {
  const double c = 0.5 * (a + b);
  const double h = 0.5 * (b - a);
  const double fc = f(c);
  double kron = kWgk[0] * fc;
  double gauss = kWg[0] * fc;
  for (int i = 1; i < 8; ++i) {
    const double dx = h * kXgk[i];
    const double fs = f(c - dx) + f(c + dx);
    kron += kWgk[i] * fs;
    if (i % 2 == 0) gauss += kWg[i / 2] * fs;
  }
  kron *= h;
  gauss *= h;
  double err = std::abs(kron - gauss);
  // standard QUADPACK-style sharpening of the error estimate
  err = std::min(err, 200.0 * err * std::sqrt(std::max(err, 0.0)));
  if (!(err >= 0)) err = std::abs(kron - gauss);
  return {kron, err};
}

double composite_doubling(const std::function<double(double)>& f, double a, double b,
                          double tol) {
  double prev = gk15(f, a, b).value;
  for (int pieces = 2; pieces <= 4096; pieces *= 2) {
    double sum = 0;
    const double h = (b - a) / pieces;
    for (int i = 0; i < pieces; ++i) sum += gk15(f, a + i * h, a + (i + 1) * h).value;
    if (std::abs(sum - prev) <= tol) return sum;
    prev = sum;
  }
  throw quadrature_error("composite quadrature did not converge on [" +
                         format_double(a) + ", " + format_double(b) + "]");
}

double adaptive(const std::function<double(double)>& f, double a, double b, double tol,
                int depth) {
  GkResult r = gk15(f, a, b);
  if (r.error <= tol || b - a < 1e-15 * (1.0 + std::abs(a))) return r.value;
  if (depth >= 48) return composite_doubling(f, a, b, tol);
  const double c = 0.5 * (a + b);
  return adaptive(f, a, c, 0.5 * tol, depth + 1) + adaptive(f, c, b, 0.5 * tol, depth + 1);
}

}  // namespace

double integrate(const std::function<double(double)>& f, double a, double b,
                 double rel_tol, double abs_tol) {
  if (a == b) return 0.0;
  GkResult coarse = gk15(f, a, b);
  double tol = std::max(abs_tol, rel_tol * std::abs(coarse.value));
  if (coarse.error <= tol) return coarse.value;
  double v = adaptive(f, a, b, tol, 0);
  // re-apportion once if the first pass badly underestimated the magnitude
  double tol2 = std::max(abs_tol, rel_tol * std::abs(v));
  if (tol2 > 4.0 * tol) return v;
  if (tol2 < 0.25 * tol) v = adaptive(f, a, b, tol2, 0);
  return v;
}

double integrate_with_breaks(const std::function<double(double)>& f, double a, double b,
                             const std::vector<double>& breaks, double rel_tol,
                             double abs_tol) {
  std::vector<double> pts{a};
  for (double p : breaks)
    if (p > a && p < b) pts.push_back(p);
  pts.push_back(b);
  std::sort(pts.begin(), pts.end());
  double sum = 0;
  for (std::size_t i = 0; i + 1 < pts.size(); ++i)
    sum += integrate(f, pts[i], pts[i + 1], rel_tol,
                     abs_tol / static_cast<double>(pts.size()));
  return sum;
}

double integrate_triangle(const std::function<double(double, double)>& f, double a,
                          double b, double rel_tol, double abs_tol) {
  auto outer = [&](double x) {
    return integrate([&](double y) { return f(x, y); }, a, x, rel_tol * 0.5,
                     abs_tol * 0.1);
  };
  return integrate(outer, a, b, rel_tol, abs_tol);
}

double log_integrate_exp(const std::function<double(double)>& u, double a, double b,
                         double rel_tol) {
  if (a == b) return -std::numeric_limits<double>::infinity();
  // scan for a shift; exactness is irrelevant, only overflow protection
  const int scan = 257;
  double m = -std::numeric_limits<double>::infinity();
  for (int i = 0; i <= scan; ++i) m = std::max(m, u(a + (b - a) * i / scan));
  double v = integrate([&](double x) { return std::exp(u(x) - m); }, a, b, rel_tol,
                       1e-300);
  if (!(v > 0)) throw quadrature_error("log_integrate_exp: vanishing integral");
  return m + std::log(v);
}

std::vector<double> cumulative_integral(const std::function<double(double)>& f,
                                        double a, double b, int cells, double rel_tol) {
  std::vector<double> out(static_cast<std::size_t>(cells) + 1, 0.0);
  const double h = (b - a) / cells;
  for (int k = 0; k < cells; ++k)
    out[k + 1] = out[k] + integrate(f, a + k * h, a + (k + 1) * h, rel_tol, 1e-16);
  return out;
}

}  // namespace ratchet
