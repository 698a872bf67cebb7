#include "ratchet/multistate.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "ratchet/quadrature.hpp"
#include "ratchet/util.hpp"
#include "scheme_detail.hpp"

namespace ratchet {
namespace {

using detail::Operator;

// Per-cell exchange generator: column j loses at sum_i nu_ij, row i gains.
SmallMatrix exchange_generator(const MultiStateSystem& sys, double x) {
  const int N = sys.num_states;
  SmallMatrix G(N);
  for (int j = 0; j < N; ++j) {
    double loss = 0;
    for (int i = 0; i < N; ++i) {
      if (i == j) continue;
      const double nu = sys.rate(i, j, x);
      if (nu < 0) throw std::invalid_argument("transition rates must be nonnegative");
      G(i, j) = nu;
      loss += nu;
    }
    G(j, j) = -loss;
  }
  return G;
}

std::vector<Operator> transport_operators(const MultiStateSystem& sys, int n) {
  std::vector<Operator> ops;
  ops.reserve(sys.num_states);
  for (int i = 0; i < sys.num_states; ++i)
    ops.push_back(detail::build_operator(detail::sample_faces(sys.forces[i], n),
                                         sys.sigma, n));
  return ops;
}

void apply_exchange(MultiStateDensity& d, const std::vector<SmallMatrix>& exps) {
  const int n = d.n();
  const int N = static_cast<int>(d.components.size());
  std::vector<double> cell(N), out(N);
  for (int j = 0; j < n; ++j) {
    for (int i = 0; i < N; ++i) cell[i] = d.components[i].values[j];
    out = mat_vec(exps[j], cell);
    for (int i = 0; i < N; ++i) d.components[i].values[j] = out[i];
  }
}

// Assembled block coefficients of the full discrete generator C, with
// C g = transport divergence + exchange loss - exchange gain (C g = 0 at
// stationarity).  Blocks are indexed by cell; states live inside a block.
struct BlockSystem {
  std::vector<SmallMatrix> sub, diag, super;
};

BlockSystem assemble_generator(const MultiStateSystem& sys, int n) {
  const int N = sys.num_states;
  const std::vector<Operator> ops = transport_operators(sys, n);
  BlockSystem S;
  S.sub.assign(n, SmallMatrix(N));
  S.diag.assign(n, SmallMatrix(N));
  S.super.assign(n, SmallMatrix(N));
  for (int j = 0; j < n; ++j) {
    const double x = (j + 0.5) / n;
    const SmallMatrix G = exchange_generator(sys, x);
    for (int i = 0; i < N; ++i) {
      S.sub[j](i, i) = ops[i].sub[j];
      S.super[j](i, i) = ops[i].super[j];
      for (int k = 0; k < N; ++k)
        S.diag[j](i, k) = (i == k ? ops[i].diag[j] : 0.0) - G(i, k);
    }
  }
  return S;
}

}  // namespace

MultiStateSystem MultiStateSystem::two_state(SpatialField f1, SpatialField f2,
                                             SpatialField nu12, SpatialField nu21,
                                             double sigma) {
  MultiStateSystem sys;
  sys.num_states = 2;
  sys.forces = {std::move(f1), std::move(f2)};
  sys.rates.assign(2, std::vector<SpatialField>(2));
  sys.rates[0][1] = std::move(nu12);
  sys.rates[1][0] = std::move(nu21);
  sys.sigma = sigma;
  return sys;
}

double MultiStateDensity::total_mass() const {
  double s = 0;
  for (const auto& g : components) s += mass(g);
  return s;
}

MultiStateDensity MultiStateDensity::uniform(int states, int n) {
  MultiStateDensity d;
  for (int i = 0; i < states; ++i)
    d.components.push_back(GridFunction::uniform(n, 1.0 / states));
  return d;
}

MultiStateDensity ms_evolve(const MultiStateDensity& d0, const MultiStateSystem& sys,
                            double t0, double t1, const SolverConfig& cfg) {
  if (!(sys.sigma > 0)) throw std::invalid_argument("ms_evolve: sigma must be positive");
  if (t1 < t0) throw std::invalid_argument("ms_evolve: t1 must be >= t0");
  if (t1 == t0) return d0;
  const int n = d0.n();
  const double span = t1 - t0;
  const int steps = std::max(1, static_cast<int>(std::ceil(span / cfg.dt - 1e-12)));
  const double dt = span / steps;

  const std::vector<Operator> ops = transport_operators(sys, n);
  std::vector<SmallMatrix> ehalf(n), efull(n);
  for (int j = 0; j < n; ++j) {
    const SmallMatrix G = exchange_generator(sys, (j + 0.5) / n);
    SmallMatrix H(G.m);
    for (std::size_t q = 0; q < G.e.size(); ++q) H.e[q] = G.e[q] * (0.5 * dt);
    ehalf[j] = expm(H);
    efull[j] = ehalf[j] * ehalf[j];
  }

  // Strang, with the interior half-steps fused: E(h/2) [T E(h)]^{k-1} T E(h/2)
  MultiStateDensity d = d0;
  apply_exchange(d, ehalf);
  for (int s = 0; s < steps; ++s) {
    for (int i = 0; i < sys.num_states; ++i)
      d.components[i] =
          detail::apply_theta_step(d.components[i], ops[i], ops[i], dt, cfg.theta);
    apply_exchange(d, s + 1 < steps ? efull : ehalf);
  }
  return d;
}

double ms_stationary_residual(const MultiStateDensity& d, const MultiStateSystem& sys) {
  const int n = d.n();
  const int N = sys.num_states;
  const std::vector<Operator> ops = transport_operators(sys, n);
  double total = 0;
  for (int i = 0; i < N; ++i) {
    const std::vector<double> tr = detail::apply_operator(ops[i], d.components[i]);
    for (int j = 0; j < n; ++j) {
      const double x = (j + 0.5) / n;
      double r = tr[j];
      for (int k = 0; k < N; ++k) {
        if (k == i) continue;
        r += sys.rate(k, i, x) * d.components[i].values[j];  // loss i -> k
        r -= sys.rate(i, k, x) * d.components[k].values[j];  // gain k -> i
      }
      total += std::abs(r);
    }
  }
  return total / n;
}

MultiStateDensity ms_stationary(const MultiStateSystem& sys, const SolverConfig& cfg) {
  if (!(sys.sigma > 0))
    throw std::invalid_argument("ms_stationary: sigma must be positive");
  const int n = cfg.n;
  const int N = sys.num_states;
  MultiStateDensity d = MultiStateDensity::uniform(N, n);

  // coarse time-march toward the attractor
  const double march_tol = std::max(cfg.tolerance, 1e-4);
  const double Tmarch = 1.0;
  double change = std::numeric_limits<double>::infinity();
  for (int it = 0; it < cfg.max_period_iterations && change > march_tol; ++it) {
    MultiStateDensity next = ms_evolve(d, sys, 0.0, Tmarch, cfg);
    change = 0;
    for (int i = 0; i < N; ++i) change += l1_distance(next.components[i], d.components[i]);
    d = std::move(next);
  }

  // shifted inverse power iterations on the assembled generator pin the
  // discrete stationary vector (the march fixed point carries an O(dt)
  // splitting bias that would otherwise show up in the residual)
  const BlockSystem S = assemble_generator(sys, n);
  const double shift = 1e-3;
  std::vector<SmallMatrix> diag_shifted = S.diag;
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < N; ++i) diag_shifted[j](i, i) += shift;

  double residual = ms_stationary_residual(d, sys);
  for (int it = 0; it < 64 && residual > 5.0 * cfg.tolerance; ++it) {
    std::vector<double> rhs(static_cast<std::size_t>(n) * N);
    for (int j = 0; j < n; ++j)
      for (int i = 0; i < N; ++i)
        rhs[static_cast<std::size_t>(j) * N + i] = shift * d.components[i].values[j];
    const std::vector<double> sol =
        solve_block_cyclic_tridiagonal(S.sub, diag_shifted, S.super, rhs);
    for (int j = 0; j < n; ++j)
      for (int i = 0; i < N; ++i)
        d.components[i].values[j] = sol[static_cast<std::size_t>(j) * N + i];
    const double m = d.total_mass();
    if (!(m > 0)) throw solver_error("ms_stationary: lost positivity", m);
    for (int i = 0; i < N; ++i)
      for (double& v : d.components[i].values) v /= m;
    residual = ms_stationary_residual(d, sys);
  }
  if (residual > 10.0 * cfg.tolerance)
    throw solver_error("ms_stationary: residual " + format_double(residual) +
                           " above 10 x tolerance",
                       residual);
  return d;
}

double ms_velocity(const MultiStateDensity& d, const MultiStateSystem& sys) {
  const int n = d.n();
  double v = 0;
  for (int i = 0; i < sys.num_states; ++i) {
    double s = 0;
    for (int j = 0; j < n; ++j)
      s += sys.forces[i]((j + 0.5) / n) * d.components[i].values[j];
    v += s / n;
  }
  return v;
}

namespace {

std::vector<double> find_zeros(const SpatialField& F) {
  const int scan = 4096;
  std::vector<double> zeros;
  std::vector<double> vals(scan + 1);
  for (int i = 0; i <= scan; ++i) vals[i] = F(static_cast<double>(i) / scan);
  auto bisect = [&](double lo, double hi) {
    double flo = F(lo);
    for (int it = 0; it < 200; ++it) {
      const double mid = 0.5 * (lo + hi);
      const double fm = F(mid);
      if (fm == 0.0) return mid;
      if ((flo < 0) != (fm < 0)) {
        hi = mid;
      } else {
        lo = mid;
        flo = fm;
      }
      if (hi - lo < 1e-13) break;
    }
    return 0.5 * (lo + hi);
  };
  for (int i = 0; i < scan; ++i) {
    const double a = vals[i], b = vals[i + 1];
    if (a == 0.0) zeros.push_back(static_cast<double>(i) / scan);
    if ((a < 0 && b > 0) || (a > 0 && b < 0))
      zeros.push_back(bisect(static_cast<double>(i) / scan,
                             static_cast<double>(i + 1) / scan));
  }
  // touching zeros: local minima of |F| below 1e-7, refined by ternary search
  for (int i = 1; i < scan; ++i) {
    const double m = std::abs(vals[i]);
    if (m < 1e-7 && m <= std::abs(vals[i - 1]) && m <= std::abs(vals[i + 1]) &&
        vals[i] != 0.0 && (vals[i - 1] < 0) == (vals[i + 1] < 0)) {
      double lo = (i - 1.0) / scan, hi = (i + 1.0) / scan;
      for (int it = 0; it < 120; ++it) {
        const double m1 = lo + (hi - lo) / 3, m2 = hi - (hi - lo) / 3;
        if (std::abs(F(m1)) < std::abs(F(m2)))
          hi = m2;
        else
          lo = m1;
      }
      const double x = 0.5 * (lo + hi);
      if (std::abs(F(x)) < 1e-7) zeros.push_back(x);
    }
  }
  std::sort(zeros.begin(), zeros.end());
  // dedupe near-coincident roots
  std::vector<double> out;
  for (double z : zeros)
    if (out.empty() || z - out.back() > 1e-9) out.push_back(z);
  if (!out.empty() && out.size() > 1 && (1.0 - out.back()) + out.front() < 1e-9)
    out.pop_back();
  return out;
}

double circle_dist(double a, double b) {
  const double d = std::abs(frac(a) - frac(b));
  return std::min(d, 1.0 - d);
}

}  // namespace

ClassifyResult classify_sign(const SpatialField& F1, const SpatialField& F2,
                             const SpatialField& nu12, const SpatialField& nu21) {
  ClassifyResult res;
  res.zeros1 = find_zeros(F1);
  res.zeros2 = find_zeros(F2);
  for (double z1 : res.zeros1)
    for (double z2 : res.zeros2)
      if (circle_dist(z1, z2) <= 1e-8)
        throw std::invalid_argument("classify_sign: common zero near x = " +
                                    format_double(z1));

  const bool has1 = !res.zeros1.empty(), has2 = !res.zeros2.empty();
  if (has1 && has2) {
    res.case_tag = 1;
    bool pos = true, neg = true;
    for (double z : res.zeros1) {  // F1(z) = 0, partner is F2
      const double v = F2(z);
      pos = pos && v > 0;
      neg = neg && v < 0;
    }
    for (double z : res.zeros2) {
      const double v = F1(z);
      pos = pos && v > 0;
      neg = neg && v < 0;
    }
    res.sign = pos ? MsSign::Positive : (neg ? MsSign::Negative : MsSign::Undetermined);
    return res;
  }
  if (has1 != has2) {
    res.case_tag = 2;
    const SpatialField& zero_free = has1 ? F2 : F1;
    res.sign = zero_free(0.0) > 0 ? MsSign::Positive : MsSign::Negative;
    return res;
  }
  res.case_tag = 3;
  res.case3_integral =
      integrate([&](double x) { return nu12(x) / F2(x) + nu21(x) / F1(x); }, 0.0, 1.0,
                1e-11, 1e-13);
  if (std::abs(res.case3_integral) <= 1e-8) {
    res.sign = MsSign::Undetermined;
    return res;
  }
  const double sgnF = (F1(0.0) > 0 ? 1.0 : -1.0) * (F2(0.0) > 0 ? 1.0 : -1.0);
  const double s = sgnF * (res.case3_integral > 0 ? 1.0 : -1.0);
  res.sign = s > 0 ? MsSign::Positive : MsSign::Negative;
  return res;
}

ZeroDiffusionSolution zero_diffusion_case3(const SpatialField& F1, const SpatialField& F2,
                                           const SpatialField& nu12,
                                           const SpatialField& nu21) {
  if (!find_zeros(F1).empty() || !find_zeros(F2).empty())
    throw std::invalid_argument("zero_diffusion_case3: forces must be zero-free");

  // own copies of the fields so the returned closures cannot dangle
  const SpatialField f1 = F1, f2 = F2, r12 = nu12, r21 = nu21;
  const SpatialField q = [f1, f2, r12, r21](double y) {
    return r12(y) / f2(y) + r21(y) / f1(y);
  };
  const int K = 2048;
  auto Qgrid = std::make_shared<std::vector<double>>(cumulative_integral(q, 0.0, 1.0, K));
  const SpatialField Q = [Qgrid, q, K](double x) {
    const int k = std::min(static_cast<int>(x * K), K - 1);
    return (*Qgrid)[k] + integrate(q, static_cast<double>(k) / K, x, 1e-12, 1e-15);
  };
  const SpatialField wint = [Q, f2, r12](double s) {
    return std::exp(Q(s)) * r12(s) / f2(s);
  };
  auto Wgrid =
      std::make_shared<std::vector<double>>(cumulative_integral(wint, 0.0, 1.0, K));
  const SpatialField W = [Wgrid, wint, K](double x) {
    const int k = std::min(static_cast<int>(x * K), K - 1);
    return (*Wgrid)[k] + integrate(wint, static_cast<double>(k) / K, x, 1e-12, 1e-15);
  };

  const double Q1 = Qgrid->back();
  const double W1 = Wgrid->back();
  const double eQ1 = std::exp(-Q1);

  // unknowns (M, v): periodicity and total-mass normalization
  const double p_M = eQ1 - 1.0;
  const double p_v = eQ1 * W1;
  const double n_M = integrate(
      [&](double x) { return std::exp(-Q(x)) * (1.0 / f1(x) - 1.0 / f2(x)); }, 0.0, 1.0,
      1e-11, 1e-13);
  const double n_v = integrate(
      [&](double x) {
        const double ew = std::exp(-Q(x)) * W(x);
        return ew / f1(x) + (1.0 - ew) / f2(x);
      },
      0.0, 1.0, 1e-11, 1e-13);

  const double det = p_M * n_v - p_v * n_M;
  const double scale = std::abs(p_M * n_v) + std::abs(p_v * n_M) + 1e-30;
  if (std::abs(det) < 1e-12 * scale)
    throw solver_error("zero_diffusion_case3: degenerate protocol (singular system)",
                       det);
  // p_M M + p_v v = 0;  n_M M + n_v v = 1
  const double M = -p_v / det;
  const double v = p_M / det;

  ZeroDiffusionSolution sol;
  sol.M = M;
  sol.v = v;
  sol.zeta1 = [M, v, Q, W, f1](double x) {
    return (M * std::exp(-Q(x)) + v * std::exp(-Q(x)) * W(x)) / f1(x);
  };
  sol.zeta2 = [M, v, Q, W, f2](double x) {
    return (-M * std::exp(-Q(x)) + v * (1.0 - std::exp(-Q(x)) * W(x))) / f2(x);
  };
  double rmax = 0;
  for (int i = 0; i < 1000; ++i) {
    const double x = (i + 0.5) / 1000;
    rmax = std::max(rmax,
                    std::abs(f1(x) * sol.zeta1(x) + f2(x) * sol.zeta2(x) - v));
  }
  sol.identity_residual = rmax;
  return sol;
}

double random_tilt_velocity(double omega, const PotentialPtr& psi, double nu12,
                            double nu21, const SolverConfig& cfg) {
  if (!(nu12 > 0) || !(nu21 > 0))
    throw std::invalid_argument("random_tilt_velocity: rates must be positive");
  const double Omega = -omega * nu12 / nu21;
  PotentialPtr base = psi;
  MultiStateSystem sys = MultiStateSystem::two_state(
      [base, omega](double x) { return -(base->deriv(x) + omega); },
      [base, Omega](double x) { return -(base->deriv(x) + Omega); },
      [nu12](double) { return nu12; }, [nu21](double) { return nu21; }, 1.0);
  const MultiStateDensity d = ms_stationary(sys, cfg);
  return ms_velocity(d, sys);
}

}  // namespace ratchet
