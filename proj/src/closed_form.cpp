#include "ratchet/closed_form.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "ratchet/quadrature.hpp"
#include "ratchet/util.hpp"

namespace ratchet {
namespace {

// Above this |omega/sigma| the direct denominator alpha*beta + beta+*beta-
// suffers cancellation (omega < 0) or overflow (omega > 0), so the log-space
// and reflection routes take over.
constexpr double kDirectLimit = 30.0;

double logsumexp(double a, double b) {
  if (a == -std::numeric_limits<double>::infinity()) return b;
  if (b == -std::numeric_limits<double>::infinity()) return a;
  const double m = std::max(a, b);
  return m + std::log(std::exp(a - m) + std::exp(b - m));
}

// log of the triangle integral int int_{y<=x} exp(u(y) - u(x)) dy dx,
// shift-protected so the inner exponential never overflows.
double log_beta_integral(const std::function<double(double)>& u) {
  const int scan = 512;
  double umin = std::numeric_limits<double>::infinity(), umax = -umin;
  for (int i = 0; i <= scan; ++i) {
    const double v = u(static_cast<double>(i) / scan);
    umin = std::min(umin, v);
    umax = std::max(umax, v);
  }
  const double shift = umax - umin;
  const double v = integrate_triangle(
      [&](double x, double y) { return std::exp(u(y) - u(x) - shift); }, 0.0, 1.0,
      1e-11, 1e-300);
  if (!(v > 0)) throw quadrature_error("beta integral vanished");
  return shift + std::log(v);
}

struct ScaledCoeffs {
  double alpha, log_beta_plus, log_beta_minus, log_beta;
  double A, B;  // always finite
};

// Coefficients at already-scaled arguments (w, psi_s = psi/sigma).
ScaledCoeffs coeffs_scaled(double w, const PotentialPtr& psi_s) {
  auto u = [&](double x) { return w * x + psi_s->value(x); };

  ScaledCoeffs out{};
  if (w == 0.0) {
    // A = 0 exactly by branch; the formula would divide 0 by a positive number
    out.alpha = 0.0;
    out.log_beta_plus = log_integrate_exp(u, 0.0, 1.0);
    out.log_beta_minus = log_integrate_exp([&](double x) { return -u(x); }, 0.0, 1.0);
    out.log_beta = log_beta_integral(u);
    out.A = 0.0;
    out.B = std::exp(-out.log_beta_minus);
    return out;
  }

  if (std::abs(w) <= kDirectLimit) {
    const double alpha = std::expm1(w);
    const double beta_plus = integrate([&](double x) { return std::exp(u(x)); }, 0.0,
                                       1.0, 1e-12, 1e-15);
    const double beta_minus = integrate([&](double x) { return std::exp(-u(x)); }, 0.0,
                                        1.0, 1e-12, 1e-15);
    const double beta = integrate_triangle(
        [&](double x, double y) { return std::exp(u(y) - u(x)); }, 0.0, 1.0, 1e-11,
        1e-14);
    const double denom = alpha * beta + beta_plus * beta_minus;
    if (!(denom > 0)) throw quadrature_error("nonpositive closed-form denominator");
    out.alpha = alpha;
    out.log_beta_plus = std::log(beta_plus);
    out.log_beta_minus = std::log(beta_minus);
    out.log_beta = std::log(beta);
    out.A = alpha / denom;
    out.B = beta_plus / denom;
    return out;
  }

  if (w > 0) {
    const double log_alpha = w + std::log1p(-std::exp(-w));
    out.alpha = log_alpha > 709.0 ? std::numeric_limits<double>::infinity()
                                  : std::exp(log_alpha);
    out.log_beta_plus = log_integrate_exp(u, 0.0, 1.0);
    out.log_beta_minus = log_integrate_exp([&](double x) { return -u(x); }, 0.0, 1.0);
    out.log_beta = log_beta_integral(u);
    const double log_denom = logsumexp(log_alpha + out.log_beta,
                                       out.log_beta_plus + out.log_beta_minus);
    out.A = std::exp(log_alpha - log_denom);
    out.B = std::exp(out.log_beta_plus - log_denom);
    return out;
  }

  // large negative w is handled by the reflection route in compute_coeffs
  throw std::logic_error("coeffs_scaled: unexpected regime");
}

}  // namespace

ClosedFormCoeffs compute_coeffs(double omega, const PotentialPtr& psi, double sigma) {
  if (!(sigma > 0)) throw std::invalid_argument("compute_coeffs: sigma must be positive");
  const double w = omega / sigma;
  PotentialPtr psi_s = make_scaled(psi, sigma);

  ClosedFormCoeffs c;
  c.omega = omega;
  c.sigma = sigma;

  ScaledCoeffs s{};
  if (w < -kDirectLimit) {
    // reflection route: A(w, psi) = -A(-w, psi(1-.)), B = beta_plus A / alpha
    ScaledCoeffs r = coeffs_scaled(-w, make_reflected(psi_s));
    auto u = [&](double x) { return w * x + psi_s->value(x); };
    s.alpha = std::expm1(w);  // in (-1, 0), exact
    s.log_beta_plus = log_integrate_exp(u, 0.0, 1.0);
    s.log_beta_minus = log_integrate_exp([&](double x) { return -u(x); }, 0.0, 1.0);
    s.log_beta = log_beta_integral(u);
    s.A = -r.A;
    s.B = std::exp(s.log_beta_plus) * (s.A / s.alpha);
    if (!std::isfinite(s.B))
      s.B = std::exp(s.log_beta_plus + std::log(s.A / s.alpha));
  } else {
    s = coeffs_scaled(w, psi_s);
  }

  c.alpha = s.alpha;
  c.beta_plus = std::exp(s.log_beta_plus);
  c.beta_minus = std::exp(s.log_beta_minus);
  c.beta = std::exp(s.log_beta);
  c.A = s.A;
  c.B = s.B;

  if (omega > 0 && !(c.A > 0)) throw quadrature_error("A must be positive for omega > 0");
  if (omega < 0 && !(c.A < 0)) throw quadrature_error("A must be negative for omega < 0");
  return c;
}

GridFunction stationary_density(double omega, const PotentialPtr& psi, double sigma,
                                int n) {
  if (n < 8) throw std::invalid_argument("stationary_density: n must be >= 8");
  const double w = omega / sigma;
  if (w < 0) {
    // g*(x; omega, psi) = g*(1-x; -omega, psi(1-.))
    GridFunction refl = stationary_density(-omega, make_reflected(psi), sigma, n);
    GridFunction g(n);
    for (int j = 0; j < n; ++j) g.values[j] = refl.values[n - 1 - j];
    return g;
  }

  PotentialPtr psi_s = make_scaled(psi, sigma);
  auto u = [&](double x) { return w * x + psi_s->value(x); };
  const ClosedFormCoeffs c = compute_coeffs(omega, psi, sigma);
  const double logA = c.A > 0 ? std::log(c.A) : -std::numeric_limits<double>::infinity();
  const double logB = std::log(c.B);

  // prefix of log int_0^x e^u at half-cell resolution; centers are odd entries
  const int half = 2 * n;
  std::vector<double> log_prefix(static_cast<std::size_t>(half) + 1,
                                 -std::numeric_limits<double>::infinity());
  for (int k = 0; k < half; ++k) {
    const double piece =
        log_integrate_exp(u, static_cast<double>(k) / half,
                          static_cast<double>(k + 1) / half, 1e-12);
    log_prefix[k + 1] = logsumexp(log_prefix[k], piece);
  }

  GridFunction g(n);
  for (int j = 0; j < n; ++j) {
    const double x = g.cell_center(j);
    const double ux = u(x);
    const double t1 = std::exp(logB - ux);
    const double t2 = std::exp(logA - ux + log_prefix[2 * j + 1]);
    g.values[j] = t1 + t2;
    if (!(g.values[j] > 0))
      throw quadrature_error("stationary density sample not positive");
  }

  // consistency of A and B: the continuum mass of the formula must be 1
  if (std::abs(w) <= kDirectLimit) {
    auto interp = [&](double x) {
      const int k = std::min(static_cast<int>(x * half), half - 1);
      const double base = std::exp(log_prefix[k]);
      const double rest =
          integrate([&](double y) { return std::exp(u(y)); },
                    static_cast<double>(k) / half, x, 1e-12, 1e-15);
      return std::exp(-u(x)) * (c.B + c.A * (base + rest));
    };
    const double quad_mass = integrate(interp, 0.0, 1.0, 1e-10, 1e-12);
    if (std::abs(quad_mass - 1.0) > 1e-8)
      throw quadrature_error("stationary density mass check failed: " +
                             format_double(quad_mass));
  }

  return g.normalized();
}

double tilted_velocity(double omega, const PotentialPtr& psi, double sigma) {
  if (omega == 0.0) return 0.0;
  return -sigma * compute_coeffs(omega, psi, sigma).A;
}

double adiabatic_velocity(double omega, const PotentialPtr& psi, double sigma) {
  if (omega == 0.0) return 0.0;
  const double Ap = compute_coeffs(omega, psi, sigma).A;
  const double Am = compute_coeffs(-omega, psi, sigma).A;
  return -sigma * (Ap + Am) / 2.0;
}

double j_functional(double omega, const PotentialPtr& psi, double sigma) {
  if (omega == 0.0)
    throw std::invalid_argument("j_functional: omega must be nonzero");
  const double w = omega / sigma;
  PotentialPtr psi_s = make_scaled(psi, sigma);
  const double num = integrate_triangle(
      [&](double x, double y) {
        return std::sinh(psi_s->value(x) - psi_s->value(y)) *
               std::sinh(w * (x - y - 0.5));
      },
      0.0, 1.0, 1e-10, 1e-13);
  return 2.0 * num / std::sinh(w / 2.0);
}

double semiadiabatic_velocity(double omega, const PotentialPtr& psi, double sigma) {
  if (omega == 0.0) return 0.0;
  return omega - sigma * compute_coeffs(omega, psi, sigma).A;
}

VelocityReport velocity_report(double omega, const PotentialPtr& psi, double sigma) {
  VelocityReport r;
  r.v_tilted = tilted_velocity(omega, psi, sigma);
  r.v_adiabatic = adiabatic_velocity(omega, psi, sigma);
  r.v_semiadiabatic = semiadiabatic_velocity(omega, psi, sigma);
  r.J = omega != 0.0 ? j_functional(omega, psi, sigma) : 0.0;
  if (omega == 0.0 || std::abs(r.J) <= 1e-9)
    r.predicted_sign = SignPrediction::Zero;
  else
    r.predicted_sign = r.J > 0 ? SignPrediction::Positive : SignPrediction::Negative;
  return r;
}

}  // namespace ratchet
