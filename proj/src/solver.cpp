#include "ratchet/solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>
#include <stdexcept>

#include "ratchet/util.hpp"
#include "scheme_detail.hpp"

namespace ratchet {
namespace {

using detail::Operator;
using detail::apply_theta_step;
using detail::build_operator;
using detail::sample_faces;

// Times at which the protocol's force field changes inside [0, T).
std::vector<double> segment_starts(const ForceProtocol& p) {
  if (p.is_traveling()) return {0.0};
  std::vector<double> b = p.boundaries();
  b.pop_back();
  return b;
}

// Advance g across [t0, t1] assuming no segment boundary strictly inside.
GridFunction advance_plain(GridFunction g, const ForceProtocol& p, double sigma,
                           double t0, double t1, const SolverConfig& cfg) {
  const double span = t1 - t0;
  if (span <= 0) return g;
  const int steps = std::max(1, static_cast<int>(std::ceil(span / cfg.dt - 1e-12)));
  const double dt = span / steps;
  if (!p.is_traveling()) {
    // the span contains no boundary, so its midpoint identifies the segment
    // robustly even when t0 sits on a boundary up to roundoff
    const int seg = p.segment_index(0.5 * (t0 + t1));
    const Operator L = build_operator(
        sample_faces(p.segments[static_cast<std::size_t>(seg)].force, g.n), sigma, g.n);
    for (int s = 0; s < steps; ++s) g = apply_theta_step(g, L, L, dt, cfg.theta);
    return g;
  }
  for (int s = 0; s < steps; ++s) {
    const double ta = t0 + s * dt, tb = t0 + (s + 1) * dt;
    const Operator Lold = build_operator(
        sample_faces([&](double x) { return p.force_at(x, ta); }, g.n), sigma, g.n);
    const Operator Lnew = build_operator(
        sample_faces([&](double x) { return p.force_at(x, tb); }, g.n), sigma, g.n);
    g = apply_theta_step(g, Lold, Lnew, dt, cfg.theta);
  }
  return g;
}

}  // namespace

GridFunction step(const GridFunction& g, const std::function<double(double)>& force,
                  double sigma, double dt, double theta) {
  if (!(sigma > 0) || !(dt > 0)) throw std::invalid_argument("step: need sigma, dt > 0");
  const Operator L = build_operator(sample_faces(force, g.n), sigma, g.n);
  return apply_theta_step(g, L, L, dt, theta);
}

GridFunction evolve(const GridFunction& g0, const ForceProtocol& p, double sigma,
                    double t0, double t1, const SolverConfig& cfg) {
  if (t1 < t0) throw std::invalid_argument("evolve: t1 must be >= t0");
  if (t1 == t0) return g0;
  const double T = p.period();
  // collect segment boundaries inside (t0, t1)
  std::vector<double> cuts{t0};
  if (!p.is_traveling() && p.segments.size() > 1) {
    const std::vector<double> starts = segment_starts(p);
    const double kmin = std::floor(t0 / T) - 1;
    const double kmax = std::ceil(t1 / T) + 1;
    for (double k = kmin; k <= kmax; ++k)
      for (double s : starts) {
        const double t = k * T + s;
        if (t > t0 + 1e-14 && t < t1 - 1e-14) cuts.push_back(t);
      }
  }
  cuts.push_back(t1);
  std::sort(cuts.begin(), cuts.end());
  GridFunction g = g0;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i)
    g = advance_plain(std::move(g), p, sigma, cuts[i], cuts[i + 1], cfg);
  return g;
}

PeriodicOrbit find_periodic_solution(const ForceProtocol& p, double sigma,
                                     const SolverConfig& cfg,
                                     std::optional<GridFunction> warm_start) {
  if (cfg.n < 16) throw std::invalid_argument("find_periodic_solution: n must be >= 16");
  const double T = p.period();
  GridFunction g = warm_start ? std::move(*warm_start) : GridFunction::uniform(cfg.n);
  double residual = std::numeric_limits<double>::infinity();
  int iters = 0;
  for (; iters < cfg.max_period_iterations; ++iters) {
    GridFunction next = evolve(g, p, sigma, 0.0, T, cfg);
    residual = l1_distance(next, g);
    g = std::move(next);
    if (residual <= cfg.tolerance) break;
  }
  if (residual > cfg.tolerance)
    throw solver_error("periodic orbit iteration did not converge (residual " +
                           format_double(residual) + ")",
                       residual);

  // record one period: segment boundaries plus a uniform grid of times
  std::set<double> times{0.0, T};
  for (double s : segment_starts(p))
    if (s > 0 && s < T) times.insert(s);
  const int m = std::max(1, cfg.snapshot_interior);
  for (int k = 1; k < m; ++k) times.insert(T * k / m);

  PeriodicOrbit orbit;
  orbit.protocol = p;
  orbit.sigma = sigma;
  orbit.iterations = iters + 1;
  GridFunction cur = g;
  double prev_t = 0.0;
  orbit.snapshots.emplace_back(0.0, cur);
  for (double t : times) {
    if (t == 0.0) continue;
    cur = evolve(cur, p, sigma, prev_t, t, cfg);
    orbit.snapshots.emplace_back(t, cur);
    prev_t = t;
  }
  orbit.closure_residual = l1_distance(orbit.snapshots.back().second,
                                       orbit.snapshots.front().second);
  return orbit;
}

std::pair<double, double> average_velocity_forms(const PeriodicOrbit& orbit) {
  const ForceProtocol& p = orbit.protocol;
  const double T = orbit.period();
  const int n = orbit.snapshots.front().second.n;
  const double dx = 1.0 / n;

  auto force_sum = [&](const GridFunction& g, double t) {
    double s = 0;
    for (int j = 0; j < n; ++j) s += p.force_at(g.cell_center(j), t) * g.values[j];
    return s * dx;
  };

  double full = 0;
  for (std::size_t i = 0; i + 1 < orbit.snapshots.size(); ++i) {
    const auto& [ta, ga] = orbit.snapshots[i];
    const auto& [tb, gb] = orbit.snapshots[i + 1];
    // integrate per segment: the segment owning (ta, tb) supplies the field
    // at both ends, so jumps at switches stay on interval boundaries
    double sa, sb;
    if (p.is_traveling()) {
      sa = force_sum(ga, ta);
      sb = force_sum(gb, tb);
    } else {
      const auto& seg =
          p.segments[static_cast<std::size_t>(p.segment_index(0.5 * (ta + tb)))];
      double accum_a = 0, accum_b = 0;
      for (int j = 0; j < n; ++j) {
        const double f = seg.force(ga.cell_center(j));
        accum_a += f * ga.values[j];
        accum_b += f * gb.values[j];
      }
      sa = accum_a * dx;
      sb = accum_b * dx;
    }
    full += 0.5 * (sa + sb) * (tb - ta);
  }
  full /= T;

  double reduced = 0;
  if (p.is_tilting()) {
    auto psi_sum = [&](const GridFunction& g) {
      double s = 0;
      for (int j = 0; j < n; ++j) s += p.base->deriv(g.cell_center(j)) * g.values[j];
      return -s * dx;
    };
    for (std::size_t i = 0; i + 1 < orbit.snapshots.size(); ++i) {
      const auto& [ta, ga] = orbit.snapshots[i];
      const auto& [tb, gb] = orbit.snapshots[i + 1];
      reduced += 0.5 * (psi_sum(ga) + psi_sum(gb)) * (tb - ta);
    }
    reduced /= T;
  }
  return {full, reduced};
}

double average_velocity(const PeriodicOrbit& orbit) {
  auto [full, reduced] = average_velocity_forms(orbit);
  const ForceProtocol& p = orbit.protocol;
  if (p.is_tilting()) {
    double bias = 0;
    for (const auto& s : p.segments) bias += s.duration * s.tilt;
    if (std::abs(bias) <= 1e-12) return reduced;
  }
  return full;
}

EntropyTrace entropy_decay_trace(const GridFunction& g0, const ForceProtocol& p,
                                 double sigma, const PeriodicOrbit& reference,
                                 const SolverConfig& cfg, int periods) {
  const double T = p.period();
  GridFunction g = g0;
  GridFunction ref = reference.initial();
  if (g.n != ref.n)
    throw std::invalid_argument("entropy_decay_trace: grid sizes differ");

  EntropyTrace trace;
  trace.times.push_back(0.0);
  trace.entropy.push_back(relative_entropy(g, ref));
  trace.production.push_back(entropy_production(g, ref));

  // step both densities through the identical subdivision
  std::vector<double> cuts{0.0};
  for (int k = 0; k < periods; ++k)
    for (double s : segment_starts(p)) {
      const double t = k * T + s;
      if (t > 0) cuts.push_back(t);
    }
  cuts.push_back(periods * T);
  std::sort(cuts.begin(), cuts.end());

  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    const double ta = cuts[i], tb = cuts[i + 1];
    const int steps = std::max(1, static_cast<int>(std::ceil((tb - ta) / cfg.dt - 1e-12)));
    const double dt = (tb - ta) / steps;
    for (int s = 0; s < steps; ++s) {
      const double t0 = ta + s * dt, t1 = ta + (s + 1) * dt;
      if (p.is_traveling()) {
        const Operator Lold = build_operator(
            sample_faces([&](double x) { return p.force_at(x, t0); }, g.n), sigma, g.n);
        const Operator Lnew = build_operator(
            sample_faces([&](double x) { return p.force_at(x, t1); }, g.n), sigma, g.n);
        g = apply_theta_step(g, Lold, Lnew, dt, cfg.theta);
        ref = apply_theta_step(ref, Lold, Lnew, dt, cfg.theta);
      } else {
        const int seg = p.segment_index(0.5 * (t0 + t1));
        const Operator L = build_operator(
            sample_faces(p.segments[static_cast<std::size_t>(seg)].force, g.n), sigma,
            g.n);
        g = apply_theta_step(g, L, L, dt, cfg.theta);
        ref = apply_theta_step(ref, L, L, dt, cfg.theta);
      }
      trace.times.push_back(t1);
      trace.entropy.push_back(relative_entropy(g, ref));
      trace.production.push_back(entropy_production(g, ref));
    }
  }
  trace.decay_rate_estimate = fit_decay_rate(trace.times, trace.entropy);
  return trace;
}

GridFunction wrap_line_density(const std::vector<std::pair<double, double>>& samples,
                               int n) {
  if (samples.size() < 2)
    throw std::invalid_argument("wrap_line_density: need at least two samples");
  const double h = samples[1].first - samples[0].first;
  if (!(h > 0)) throw std::invalid_argument("wrap_line_density: samples must increase");
  for (std::size_t i = 1; i < samples.size(); ++i) {
    if (std::abs(samples[i].first - samples[i - 1].first - h) > 1e-9 * std::max(1.0, h))
      throw std::invalid_argument("wrap_line_density: sample grid must be uniform");
    if (samples[i].second < 0)
      throw std::invalid_argument("wrap_line_density: negative density value");
  }
  double total = 0;
  for (const auto& [x, v] : samples) {
    (void)x;
    total += v * h;
  }
  if (std::abs(total - 1.0) > 1e-6)
    throw std::invalid_argument("wrap_line_density: input mass " + format_double(total) +
                                " is not 1 within 1e-6");

  GridFunction g(n);
  const double dx = 1.0 / n;
  for (const auto& [x, v] : samples) {
    if (v == 0.0) continue;
    double l = x - 0.5 * h;
    const double r = x + 0.5 * h;
    // deposit the rectangle [l, r) cell by cell, wrapping around the circle
    while (l < r - 1e-15 * std::max(1.0, std::abs(r))) {
      const double fl = frac(l);
      int j = std::min(static_cast<int>(fl * n), n - 1);
      const double cell_right = l + ((j + 1) * dx - fl);
      const double seg = std::min(r, cell_right);
      g.values[j] += v * (seg - l) / dx;  // mass -> cell average
      l = seg;
    }
  }
  return g.normalized();
}

}  // namespace ratchet
