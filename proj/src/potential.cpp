#include "ratchet/potential.hpp"

#include <cmath>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include "ratchet/linalg.hpp"
#include "ratchet/quadrature.hpp"
#include "ratchet/util.hpp"

namespace ratchet {
namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

struct ZeroPotential final : BasePotential {
  double value(double) const override { return 0.0; }
  double deriv(double) const override { return 0.0; }
  std::string describe() const override { return "zero"; }
};

struct CosinePotential final : BasePotential {
  int k;
  double a;
  CosinePotential(int k_, double a_) : k(k_), a(a_) {}
  double value(double x) const override { return a * std::cos(kTwoPi * k * x); }
  double deriv(double x) const override {
    return -a * kTwoPi * k * std::sin(kTwoPi * k * x);
  }
  std::string describe() const override {
    return "cosine " + std::to_string(k) + " " + format_double(a);
  }
};

struct SinePotential final : BasePotential {
  int k;
  double a;
  SinePotential(int k_, double a_) : k(k_), a(a_) {}
  double value(double x) const override { return a * std::sin(kTwoPi * k * x); }
  double deriv(double x) const override {
    return a * kTwoPi * k * std::cos(kTwoPi * k * x);
  }
  std::string describe() const override {
    return "sine " + std::to_string(k) + " " + format_double(a);
  }
};

struct AsymPotential final : BasePotential {
  double a, b;
  AsymPotential(double a_, double b_) : a(a_), b(b_) {}
  double value(double x) const override {
    return a * std::cos(kTwoPi * x) + b * std::sin(2 * kTwoPi * x);
  }
  double deriv(double x) const override {
    return -a * kTwoPi * std::sin(kTwoPi * x) +
           2 * kTwoPi * b * std::cos(2 * kTwoPi * x);
  }
  std::string describe() const override {
    return "asym " + format_double(a) + " " + format_double(b);
  }
};

struct SawPotential final : BasePotential {
  double c;
  explicit SawPotential(double c_) : c(c_) {}
  double value(double x) const override { return c * frac(x); }
  double deriv(double x) const override {
    (void)x;
    return c;  // a.e.; the unit drop at the seam is not differentiable
  }
  std::string describe() const override { return "saw " + format_double(c); }
};

// Periodic cubic spline through values at knots k/m.
struct SampledPotential final : BasePotential {
  std::vector<double> v;     // knot values
  std::vector<double> m2;    // second derivatives at knots
  double h;

  explicit SampledPotential(std::vector<double> knots) : v(std::move(knots)) {
    const int m = static_cast<int>(v.size());
    if (m < 3) throw std::invalid_argument("sampled potential needs >= 3 knots");
    h = 1.0 / m;
    std::vector<double> a(m, h / 6.0), b(m, 2.0 * h / 3.0), c(m, h / 6.0), d(m);
    for (int k = 0; k < m; ++k)
      d[k] = (v[(k + 1) % m] - 2.0 * v[k] + v[(k + m - 1) % m]) / h;
    m2 = solve_cyclic_tridiagonal(a, b, c, d);
  }

  double value(double x) const override {
    const int m = static_cast<int>(v.size());
    double u = frac(x) * m;
    int k = static_cast<int>(u);
    if (k >= m) k = m - 1;
    const double t = (u - k) * h;  // offset inside [x_k, x_{k+1}]
    const double s = h - t;
    const int k1 = (k + 1) % m;
    return m2[k] * s * s * s / (6 * h) + m2[k1] * t * t * t / (6 * h) +
           (v[k] / h - m2[k] * h / 6) * s + (v[k1] / h - m2[k1] * h / 6) * t;
  }

  double deriv(double x) const override {
    const int m = static_cast<int>(v.size());
    double u = frac(x) * m;
    int k = static_cast<int>(u);
    if (k >= m) k = m - 1;
    const double t = (u - k) * h;
    const double s = h - t;
    const int k1 = (k + 1) % m;
    return -m2[k] * s * s / (2 * h) + m2[k1] * t * t / (2 * h) -
           (v[k] / h - m2[k] * h / 6) + (v[k1] / h - m2[k1] * h / 6);
  }

  std::string describe() const override {
    std::string s = "sampled";
    for (double x : v) s += " " + format_double(x);
    return s;
  }
};

struct ReflectedPotential final : BasePotential {
  PotentialPtr base;
  explicit ReflectedPotential(PotentialPtr b) : base(std::move(b)) {}
  double value(double x) const override { return base->value(1.0 - x); }
  double deriv(double x) const override { return -base->deriv(1.0 - x); }
  std::string describe() const override { return "reflected(" + base->describe() + ")"; }
};

struct ScaledPotential final : BasePotential {
  PotentialPtr base;
  double s;
  ScaledPotential(PotentialPtr b, double s_) : base(std::move(b)), s(s_) {}
  double value(double x) const override { return base->value(x) / s; }
  double deriv(double x) const override { return base->deriv(x) / s; }
  std::string describe() const override { return "scaled(" + base->describe() + ")"; }
};

// C^3 smoothstep and its antiderivative; gluing ramps with it keeps the
// reparametrization density C^3, hence the map C^4.
double smoothstep3(double t) {
  const double t2 = t * t;
  return t2 * t2 * (35.0 + t * (-84.0 + t * (70.0 - 20.0 * t)));
}
double smoothstep3_integral(double t) {
  const double t2 = t * t;
  return t2 * t2 * t * (7.0 + t * (-14.0 + t * (10.0 - 2.5 * t)));
}

struct SqueezePotential final : BasePotential {
  double lambda;
  PotentialPtr base;
  double a0, L;      // arc start and its length
  double q, w, r;    // arc preimage [0,q], window [q,1], ramp width
  double c1, c2;     // reparametrization density levels

  SqueezePotential(double lambda_, PotentialPtr base_, double arc_a, double arc_b)
      : lambda(lambda_), base(std::move(base_)), a0(arc_a) {
    if (lambda < 0.0 || lambda >= 1.0)
      throw std::invalid_argument("squeeze: lambda must lie in [0,1)");
    L = frac(arc_b - arc_a);
    if (L == 0.0) L = 1.0;  // whole-circle arc
    q = 1.0 - (1.0 - lambda) * (1.0 - L);
    w = 1.0 - q;
    r = w / 4.0;
    if (w > 0.0) {
      c1 = L / q;
      c2 = c1 + (1.0 - L - c1 * w) / (w - r);
    } else {
      c1 = c2 = 1.0;
    }
  }

  // monotone C^4 map of [0,1] onto [0,1] with m(q) = L
  double map(double u) const {
    if (w == 0.0) return u;
    if (u <= q) return c1 * u;
    const double du = c2 - c1;
    if (u <= q + r)
      return c1 * u + du * r * smoothstep3_integral((u - q) / r);
    if (u <= 1.0 - r) return c1 * u + du * (0.5 * r + (u - q - r));
    return c1 * u + du * (0.5 * r + (w - 2 * r) +
                          r * (0.5 - smoothstep3_integral((1.0 - u) / r)));
  }

  double map_deriv(double u) const {
    if (w == 0.0) return 1.0;
    if (u <= q) return c1;
    const double du = c2 - c1;
    if (u <= q + r) return c1 + du * smoothstep3((u - q) / r);
    if (u <= 1.0 - r) return c2;
    return c1 + du * smoothstep3((1.0 - u) / r);
  }

  double value(double x) const override {
    const double u = frac(x - a0);
    return base->value(a0 + map(u));
  }
  double deriv(double x) const override {
    const double u = frac(x - a0);
    return base->deriv(a0 + map(u)) * map_deriv(u);
  }
  std::string describe() const override {
    return "squeeze " + format_double(lambda) + " arc " + format_double(a0) + " " +
           format_double(a0 + L) + " (" + base->describe() + ")";
  }
};

struct ArcLimitPotential final : BasePotential {
  PotentialPtr base;
  double a0, L;
  ArcLimitPotential(PotentialPtr b, double arc_a, double arc_b)
      : base(std::move(b)), a0(arc_a) {
    L = frac(arc_b - arc_a);
    if (L == 0.0) L = 1.0;
  }
  double value(double x) const override { return base->value(a0 + L * frac(x - a0)); }
  double deriv(double x) const override {
    return L * base->deriv(a0 + L * frac(x - a0));
  }
  std::string describe() const override {
    return "arc-limit " + format_double(a0) + " " + format_double(a0 + L) + " (" +
           base->describe() + ")";
  }
};

double parse_number(const std::string& tok, const char* what) {
  try {
    std::size_t pos = 0;
    double v = std::stod(tok, &pos);
    if (pos != tok.size()) throw std::invalid_argument(tok);
    return v;
  } catch (const std::exception&) {
    throw std::invalid_argument(std::string("expected a number for ") + what +
                                ", got '" + tok + "'");
  }
}

}  // namespace

PotentialPtr make_zero_potential() { return std::make_shared<ZeroPotential>(); }
PotentialPtr make_cosine_potential(int k, double a) {
  return std::make_shared<CosinePotential>(k, a);
}
PotentialPtr make_sine_potential(int k, double a) {
  return std::make_shared<SinePotential>(k, a);
}
PotentialPtr make_asym_potential(double a, double b) {
  return std::make_shared<AsymPotential>(a, b);
}
PotentialPtr make_saw_potential(double c) { return std::make_shared<SawPotential>(c); }
PotentialPtr make_sampled_potential(std::vector<double> knots) {
  return std::make_shared<SampledPotential>(std::move(knots));
}
PotentialPtr make_reflected(PotentialPtr base) {
  return std::make_shared<ReflectedPotential>(std::move(base));
}
PotentialPtr make_scaled(PotentialPtr base, double s) {
  if (s == 1.0) return base;
  return std::make_shared<ScaledPotential>(std::move(base), s);
}
PotentialPtr make_squeeze_potential(double lambda, PotentialPtr base, double arc_a,
                                    double arc_b) {
  return std::make_shared<SqueezePotential>(lambda, std::move(base), arc_a, arc_b);
}
PotentialPtr make_arc_limit_potential(PotentialPtr base, double arc_a, double arc_b) {
  return std::make_shared<ArcLimitPotential>(std::move(base), arc_a, arc_b);
}

PotentialPtr parse_potential(const std::vector<std::string>& tokens) {
  if (tokens.empty()) throw std::invalid_argument("empty potential spec");
  const std::string& kind = tokens[0];
  const std::size_t argc = tokens.size() - 1;
  auto arg = [&](std::size_t i, double dflt) {
    return argc > i ? parse_number(tokens[i + 1], kind.c_str()) : dflt;
  };
  if (kind == "zero") return make_zero_potential();
  if (kind == "cosine")
    return make_cosine_potential(static_cast<int>(arg(0, 1)), arg(1, 1.0));
  if (kind == "sine")
    return make_sine_potential(static_cast<int>(arg(0, 1)), arg(1, 1.0));
  if (kind == "asym") return make_asym_potential(arg(0, 1.0), arg(1, 0.3));
  if (kind == "saw") return make_saw_potential(arg(0, 1.0));
  if (kind == "sampled") {
    std::vector<double> knots;
    for (std::size_t i = 1; i < tokens.size(); ++i)
      knots.push_back(parse_number(tokens[i], "sampled knot"));
    return make_sampled_potential(std::move(knots));
  }
  if (kind == "squeeze") {
    if (argc < 2) throw std::invalid_argument("squeeze needs: lambda [arc a b] base...");
    double lambda = parse_number(tokens[1], "squeeze lambda");
    std::size_t next = 2;
    double aa = 0.0, bb = 1.0;
    if (tokens[next] == "arc") {
      if (argc < 5) throw std::invalid_argument("squeeze arc needs two endpoints");
      aa = parse_number(tokens[next + 1], "arc start");
      bb = parse_number(tokens[next + 2], "arc end");
      next += 3;
    }
    std::vector<std::string> rest(tokens.begin() + next, tokens.end());
    return make_squeeze_potential(lambda, parse_potential(rest), aa, bb);
  }
  throw std::invalid_argument("unknown potential preset '" + kind + "'");
}

PotentialPtr parse_potential(const std::string& spec) {
  std::istringstream in(spec);
  std::vector<std::string> tokens;
  std::string tok;
  while (in >> tok) tokens.push_back(tok);
  return parse_potential(tokens);
}

double TiltProtocol::period() const {
  double T = 0;
  for (const auto& [dur, tilt] : segments) {
    (void)tilt;
    T += dur;
  }
  return T;
}

double TiltProtocol::tilt_integral() const {
  double s = 0;
  for (const auto& [dur, tilt] : segments) s += dur * tilt;
  return s;
}

bool TiltProtocol::unbiased(double tol) const { return std::abs(tilt_integral()) <= tol; }

ForceProtocol ForceProtocol::traveling(PotentialPtr psi, double omega) {
  ForceProtocol p;
  p.base = std::move(psi);
  p.traveling_omega = omega;
  p.traveling_period = omega != 0.0 ? 1.0 / std::abs(omega) : 1.0;
  return p;
}

ForceProtocol ForceProtocol::constant(std::function<double(double)> f, double period) {
  ForceProtocol p;
  Segment s;
  s.duration = period;
  s.force = std::move(f);
  p.segments.push_back(std::move(s));
  return p;
}

double ForceProtocol::period() const {
  if (is_traveling()) return traveling_period;
  double T = 0;
  for (const auto& s : segments) T += s.duration;
  return T;
}

int ForceProtocol::segment_index(double t) const {
  const double T = period();
  double tm = std::fmod(t, T);
  if (tm < 0) tm += T;
  double cum = 0;
  for (std::size_t i = 0; i < segments.size(); ++i) {
    cum += segments[i].duration;
    if (tm < cum || i + 1 == segments.size()) return static_cast<int>(i);
  }
  return static_cast<int>(segments.size()) - 1;
}

std::vector<double> ForceProtocol::boundaries() const {
  std::vector<double> b{0.0};
  double cum = 0;
  for (const auto& s : segments) {
    cum += s.duration;
    b.push_back(cum);
  }
  return b;
}

double ForceProtocol::force_at(double x, double t) const {
  if (is_traveling()) return -base->deriv(x - *traveling_omega * t);
  return segments[static_cast<std::size_t>(segment_index(t))].force(frac(x));
}

bool ForceProtocol::is_tilting() const {
  if (is_traveling() || !base || segments.empty()) return false;
  for (const auto& s : segments)
    if (!s.from_tilt) return false;
  return true;
}

ForceProtocol tilt_to_force(const TiltProtocol& tp) {
  ForceProtocol p;
  p.base = tp.base;
  for (const auto& [dur, tilt] : tp.segments) {
    if (!(dur > 0)) throw std::invalid_argument("tilt segment durations must be positive");
    ForceProtocol::Segment s;
    s.duration = dur;
    s.tilt = tilt;
    s.from_tilt = true;
    PotentialPtr psi = tp.base;
    double H = tilt;
    s.force = [psi, H](double x) { return -psi->deriv(x) - H; };
    p.segments.push_back(std::move(s));
  }
  return p;
}

TiltProtocol square_wave_tilt(PotentialPtr psi, double omega, double T) {
  return TiltProtocol{std::move(psi), {{T / 2, omega}, {T / 2, -omega}}};
}

TiltProtocol semiadiabatic_tilt(PotentialPtr psi, double omega, double T, double tau) {
  if (!(tau > 0) || !(tau < T))
    throw std::invalid_argument("semiadiabatic tilt needs 0 < tau < T");
  const double Omega = -omega * (T - tau) / tau;
  return TiltProtocol{std::move(psi), {{tau, Omega}, {T - tau, omega}}};
}

TiltProtocol constant_tilt(PotentialPtr psi, double omega, double T) {
  return TiltProtocol{std::move(psi), {{T, omega}}};
}

double unbiasedness_defect(const ForceProtocol& p) {
  const double T = p.period();
  if (p.is_traveling()) {
    auto inner = [&](double t) {
      return integrate([&](double x) { return p.force_at(x, t); }, 0.0, 1.0, 1e-12,
                       1e-14);
    };
    return integrate(inner, 0.0, T, 1e-11, 1e-13) / T;
  }
  double total = 0;
  for (const auto& s : p.segments)
    total += s.duration * integrate(s.force, 0.0, 1.0, 1e-12, 1e-14);
  return total / T;
}

}  // namespace ratchet
