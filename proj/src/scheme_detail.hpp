#ifndef RATCHET_SCHEME_DETAIL_HPP
#define RATCHET_SCHEME_DETAIL_HPP

#include <cmath>
#include <functional>
#include <vector>

#include "ratchet/grid.hpp"
#include "ratchet/linalg.hpp"

namespace ratchet::detail {

// Bernoulli function t / (e^t - 1); t/expm1 is stable away from 0 and the
// limits are handled by IEEE semantics (overflow -> 0, large negative -> -t).
inline double bernoulli(double t) {
  if (t == 0.0) return 1.0;
  const double d = std::expm1(t);
  if (std::isinf(d)) return 0.0;
  return t / d;
}

// Row coefficients of the discrete divergence operator L, where
// dg/dt = -L g and the flux through face j+1/2 is
//   (sigma/dx) (B(-t_f) g_j - B(t_f) g_{j+1}),  t_f = F_f dx / sigma.
// Columns of L sum to zero, so mass is conserved exactly, and the implicit
// matrix I + theta dt L is an M-matrix (positivity for theta = 1).
struct Operator {
  std::vector<double> sub, diag, super;  // row j couples g_{j-1}, g_j, g_{j+1}
};

inline Operator build_operator(const std::vector<double>& face_force, double sigma,
                               int n) {
  const double dx = 1.0 / n;
  const double scale = sigma / (dx * dx);
  Operator L;
  L.sub.resize(n);
  L.diag.resize(n);
  L.super.resize(n);
  for (int j = 0; j < n; ++j) {
    const double tr = face_force[j] * dx / sigma;                // right face
    const double tl = face_force[(j + n - 1) % n] * dx / sigma;  // left face
    L.sub[j] = -scale * bernoulli(-tl);
    L.super[j] = -scale * bernoulli(tr);
    L.diag[j] = scale * (bernoulli(-tr) + bernoulli(tl));
  }
  return L;
}

inline std::vector<double> sample_faces(const std::function<double(double)>& force,
                                        int n) {
  std::vector<double> f(n);
  for (int j = 0; j < n; ++j) f[j] = force(static_cast<double>(j + 1) / n);
  return f;
}

inline GridFunction apply_theta_step(const GridFunction& g, const Operator& Lold,
                                     const Operator& Lnew, double dt, double theta) {
  const int n = g.n;
  std::vector<double> rhs(n);
  if (theta < 1.0) {
    const double w = (1.0 - theta) * dt;
    for (int j = 0; j < n; ++j) {
      rhs[j] = g.values[j] -
               w * (Lold.sub[j] * g.at(j - 1) + Lold.diag[j] * g.values[j] +
                    Lold.super[j] * g.at(j + 1));
    }
  } else {
    rhs = g.values;
  }
  std::vector<double> a(n), b(n), c(n);
  const double w = theta * dt;
  for (int j = 0; j < n; ++j) {
    a[j] = w * Lnew.sub[j];
    b[j] = 1.0 + w * Lnew.diag[j];
    c[j] = w * Lnew.super[j];
  }
  return GridFunction(n, solve_cyclic_tridiagonal(a, b, c, rhs));
}

inline std::vector<double> apply_operator(const Operator& L, const GridFunction& g) {
  const int n = g.n;
  std::vector<double> r(n);
  for (int j = 0; j < n; ++j)
    r[j] = L.sub[j] * g.at(j - 1) + L.diag[j] * g.values[j] + L.super[j] * g.at(j + 1);
  return r;
}

}  // namespace ratchet::detail

#endif
