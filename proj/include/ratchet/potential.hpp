#ifndef RATCHET_POTENTIAL_HPP
#define RATCHET_POTENTIAL_HPP

#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace ratchet {

/// 1-periodic base potential psi; evaluation gives psi(x) and psi_x(x).
/// Implementations are immutable and safe to share across threads.
class BasePotential {
 public:
  virtual ~BasePotential() = default;
  virtual double value(double x) const = 0;
  virtual double deriv(double x) const = 0;
  virtual std::string describe() const = 0;
};

using PotentialPtr = std::shared_ptr<const BasePotential>;

PotentialPtr make_zero_potential();
/// a * cos(2 pi k x)
PotentialPtr make_cosine_potential(int k = 1, double a = 1.0);
/// a * sin(2 pi k x)
PotentialPtr make_sine_potential(int k = 1, double a = 1.0);
/// a * cos(2 pi x) + b * sin(4 pi x)
PotentialPtr make_asym_potential(double a = 1.0, double b = 0.3);
/// c * frac(x); increasing on (0,1) with a unit drop at the seam
PotentialPtr make_saw_potential(double c = 1.0);
/// periodic cubic spline through knots at k/m
PotentialPtr make_sampled_potential(std::vector<double> knots);
/// psi(1 - x)
PotentialPtr make_reflected(PotentialPtr base);
/// psi / s
PotentialPtr make_scaled(PotentialPtr base, double s);

/// Squeeze homotopy family: reparametrizes the circle so the values of the
/// base along the oriented arc [arc_a, arc_b] fill all but a window whose
/// width shrinks by the factor (1 - lambda); the rest of the base's graph is
/// compressed into that window.  The map is a C^4 monotone spline, so the
/// result stays C^4 whenever the base is.  lambda = 0 gives the base itself.
PotentialPtr make_squeeze_potential(double lambda, PotentialPtr base,
                                    double arc_a = 0.0, double arc_b = 1.0);

/// lambda -> 1 limit of the squeeze family: the base's values along the arc
/// stretched over the whole circle, psi_1(x) = base(arc_a + L frac(x - arc_a)).
PotentialPtr make_arc_limit_potential(PotentialPtr base, double arc_a, double arc_b);

/// Parses "cosine 1 1", "asym 1 0.3", "squeeze 0.9 saw", "sampled v0 v1 ...",
/// etc.  Throws std::invalid_argument on unknown presets or bad arity.
PotentialPtr parse_potential(const std::vector<std::string>& tokens);
PotentialPtr parse_potential(const std::string& spec);

/// Piecewise-constant-in-time tilt H(t) over a base potential:
/// Psi(x,t) = psi(x) + H(t) x.
struct TiltProtocol {
  PotentialPtr base;
  /// (duration, tilt) pairs; durations must be positive
  std::vector<std::pair<double, double>> segments;

  double period() const;
  /// integral of H over one period (zero for unbiased protocols)
  double tilt_integral() const;
  bool unbiased(double tol = 1e-12) const;
};

/// Time-piecewise force field F(x,t) = -Psi_x(x,t) on the circle, or a
/// traveling wave F(x,t) = -psi'(x - omega t).
struct ForceProtocol {
  struct Segment {
    double duration = 0;
    std::function<double(double)> force;
    double tilt = 0;        // meaningful when from_tilt
    bool from_tilt = false;
  };

  std::vector<Segment> segments;
  PotentialPtr base;                      // set for tilting / traveling protocols
  std::optional<double> traveling_omega;  // set for traveling mode
  double traveling_period = 0;

  static ForceProtocol traveling(PotentialPtr psi, double omega);
  static ForceProtocol constant(std::function<double(double)> f, double period = 1.0);

  double period() const;
  /// F(x, t mod T) with right-continuous segment selection; x taken mod 1
  double force_at(double x, double t) const;
  /// index of the segment active at time t (segments mode only)
  int segment_index(double t) const;
  /// cumulative segment start times, last entry = period
  std::vector<double> boundaries() const;
  bool is_traveling() const { return traveling_omega.has_value(); }
  /// true when every segment came from a tilt over a shared base
  bool is_tilting() const;
};

/// Tilting protocol to explicit per-segment forces F = -psi' - tilt_i.
ForceProtocol tilt_to_force(const TiltProtocol& tp);

/// Square-wave tilting of swing omega: +omega on the first half period,
/// -omega on the second.
TiltProtocol square_wave_tilt(PotentialPtr psi, double omega, double T);

/// Two-segment tilt [(tau, Omega), (T - tau, omega)] with Omega chosen so the
/// protocol is unbiased: Omega tau + omega (T - tau) = 0.
TiltProtocol semiadiabatic_tilt(PotentialPtr psi, double omega, double T, double tau);

/// Single-segment constant tilt (the tilted potential psi + omega x).
TiltProtocol constant_tilt(PotentialPtr psi, double omega, double T = 1.0);

/// (1/T) int_0^T int_0^1 F dx dt by per-segment quadrature.
double unbiasedness_defect(const ForceProtocol& p);

}  // namespace ratchet

#endif
