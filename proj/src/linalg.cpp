#include "ratchet/linalg.hpp"

#include <cmath>
#include <cstddef>
#include <stdexcept>

namespace ratchet {
namespace {

// Thomas algorithm; a[0] and c[n-1] are ignored.
std::vector<double> solve_tridiagonal(const std::vector<double>& a,
                                      const std::vector<double>& b,
                                      const std::vector<double>& c,
                                      std::vector<double> d) {
  const std::size_t n = b.size();
  std::vector<double> cp(n);
  double piv = b[0];
  if (piv == 0.0) throw std::runtime_error("tridiagonal solve: zero pivot");
  cp[0] = c[0] / piv;
  d[0] /= piv;
  for (std::size_t i = 1; i < n; ++i) {
    piv = b[i] - a[i] * cp[i - 1];
    if (piv == 0.0) throw std::runtime_error("tridiagonal solve: zero pivot");
    cp[i] = c[i] / piv;
    d[i] = (d[i] - a[i] * d[i - 1]) / piv;
  }
  for (std::size_t i = n - 1; i-- > 0;) d[i] -= cp[i] * d[i + 1];
  return d;
}

}  // namespace

std::vector<double> solve_cyclic_tridiagonal(const std::vector<double>& a,
                                             const std::vector<double>& b,
                                             const std::vector<double>& c,
                                             const std::vector<double>& d) {
  const std::size_t n = b.size();
  if (n < 3) throw std::invalid_argument("cyclic tridiagonal solve needs n >= 3");
  // A = T + u v^T with u = (gamma, 0, ..., c[n-1]), v = (1, 0, ..., a[0]/gamma)
  const double gamma = -b[0];
  std::vector<double> bb = b;
  bb[0] = b[0] - gamma;
  bb[n - 1] = b[n - 1] - c[n - 1] * a[0] / gamma;
  std::vector<double> u(n, 0.0);
  u[0] = gamma;
  u[n - 1] = c[n - 1];
  std::vector<double> y = solve_tridiagonal(a, bb, c, d);
  std::vector<double> z = solve_tridiagonal(a, bb, c, u);
  const double vy = y[0] + (a[0] / gamma) * y[n - 1];
  const double vz = z[0] + (a[0] / gamma) * z[n - 1];
  const double factor = vy / (1.0 + vz);
  std::vector<double> x(n);
  for (std::size_t i = 0; i < n; ++i) x[i] = y[i] - factor * z[i];
  return x;
}

SmallMatrix SmallMatrix::identity(int m) {
  SmallMatrix I(m);
  for (int i = 0; i < m; ++i) I(i, i) = 1.0;
  return I;
}

SmallMatrix operator*(const SmallMatrix& A, const SmallMatrix& B) {
  SmallMatrix R(A.m);
  for (int i = 0; i < A.m; ++i)
    for (int k = 0; k < A.m; ++k) {
      const double aik = A(i, k);
      if (aik == 0.0) continue;
      for (int j = 0; j < A.m; ++j) R(i, j) += aik * B(k, j);
    }
  return R;
}

std::vector<double> mat_vec(const SmallMatrix& A, const std::vector<double>& x) {
  std::vector<double> r(A.m, 0.0);
  for (int i = 0; i < A.m; ++i)
    for (int j = 0; j < A.m; ++j) r[i] += A(i, j) * x[j];
  return r;
}

std::vector<double> solve_dense(SmallMatrix A, std::vector<double> rhs) {
  const int m = A.m;
  std::vector<int> perm(m);
  for (int i = 0; i < m; ++i) perm[i] = i;
  for (int col = 0; col < m; ++col) {
    int piv = col;
    for (int r = col + 1; r < m; ++r)
      if (std::abs(A(r, col)) > std::abs(A(piv, col))) piv = r;
    if (A(piv, col) == 0.0) throw std::runtime_error("singular small matrix");
    if (piv != col) {
      for (int j = 0; j < m; ++j) std::swap(A.e[piv * m + j], A.e[col * m + j]);
      std::swap(rhs[piv], rhs[col]);
    }
    for (int r = col + 1; r < m; ++r) {
      const double f = A(r, col) / A(col, col);
      if (f == 0.0) continue;
      for (int j = col; j < m; ++j) A(r, j) -= f * A(col, j);
      rhs[r] -= f * rhs[col];
    }
  }
  for (int r = m - 1; r >= 0; --r) {
    double s = rhs[r];
    for (int j = r + 1; j < m; ++j) s -= A(r, j) * rhs[j];
    rhs[r] = s / A(r, r);
  }
  return rhs;
}

SmallMatrix expm(const SmallMatrix& A) {
  const int m = A.m;
  double norm = 0.0;
  for (int i = 0; i < m; ++i) {
    double row = 0.0;
    for (int j = 0; j < m; ++j) row += std::abs(A(i, j));
    norm = std::max(norm, row);
  }
  int squarings = 0;
  while (norm > 0.5 && squarings < 40) {
    norm *= 0.5;
    ++squarings;
  }
  const double scale = std::ldexp(1.0, -squarings);
  SmallMatrix S(m);
  for (std::size_t i = 0; i < S.e.size(); ++i) S.e[i] = A.e[i] * scale;
  SmallMatrix R = SmallMatrix::identity(m);
  SmallMatrix term = SmallMatrix::identity(m);
  for (int k = 1; k <= 16; ++k) {
    term = term * S;
    for (std::size_t i = 0; i < term.e.size(); ++i) term.e[i] /= k;
    for (std::size_t i = 0; i < R.e.size(); ++i) R.e[i] += term.e[i];
  }
  for (int s = 0; s < squarings; ++s) R = R * R;
  return R;
}

std::vector<double> solve_block_cyclic_tridiagonal(const std::vector<SmallMatrix>& A,
                                                   const std::vector<SmallMatrix>& B,
                                                   const std::vector<SmallMatrix>& C,
                                                   const std::vector<double>& D) {
  const int n = static_cast<int>(B.size());
  const int m = B[0].m;
  if (n < 3) throw std::invalid_argument("block cyclic solve needs n >= 3");

  // Treat X[0] as a parameter xi.  Rows 1..n-1 form a block tridiagonal
  // system; solve it once for the particular part and m times for the
  // columns of the homogeneous response, then close with row 0.
  const int nin = n - 1;  // interior rows 1..n-1
  const int nrhs = m + 1;
  // rhs layout: column 0 = particular, columns 1..m = response to e_k in xi
  std::vector<std::vector<double>> rhs(
      nrhs, std::vector<double>(static_cast<std::size_t>(nin) * m, 0.0));
  for (int j = 1; j < n; ++j)
    for (int r = 0; r < m; ++r)
      rhs[0][static_cast<std::size_t>(j - 1) * m + r] =
          D[static_cast<std::size_t>(j) * m + r];
  for (int k = 0; k < m; ++k) {
    // row 1 couples to X[0] through A[1]; row n-1 through C[n-1]
    for (int r = 0; r < m; ++r) {
      rhs[k + 1][r] = -A[1](r, k);
      rhs[k + 1][static_cast<std::size_t>(nin - 1) * m + r] = -C[n - 1](r, k);
    }
  }

  // Block Thomas forward elimination on rows 1..n-1 (no cyclic wrap inside).
  std::vector<SmallMatrix> diag(nin), upper(nin);
  for (int j = 0; j < nin; ++j) {
    diag[j] = B[j + 1];
    upper[j] = C[j + 1];
  }
  // multi-rhs LU sweep using dense solves against the running pivot block
  for (int j = 1; j < nin; ++j) {
    const SmallMatrix& low = A[j + 1];
    // eliminate: diag[j] -= low * diag[j-1]^{-1} * upper[j-1], same for rhs
    SmallMatrix du(m);
    for (int c = 0; c < m; ++c) {
      std::vector<double> col(m);
      for (int r = 0; r < m; ++r) col[r] = upper[j - 1](r, c);
      std::vector<double> s = solve_dense(diag[j - 1], col);
      for (int r = 0; r < m; ++r) du(r, c) = s[r];
    }
    SmallMatrix ldu = low * du;
    for (int r = 0; r < m; ++r)
      for (int c = 0; c < m; ++c) diag[j](r, c) -= ldu(r, c);
    for (int q = 0; q < nrhs; ++q) {
      std::vector<double> prev(m);
      for (int r = 0; r < m; ++r)
        prev[r] = rhs[q][static_cast<std::size_t>(j - 1) * m + r];
      std::vector<double> s = solve_dense(diag[j - 1], prev);
      std::vector<double> ls = mat_vec(low, s);
      for (int r = 0; r < m; ++r)
        rhs[q][static_cast<std::size_t>(j) * m + r] -= ls[r];
    }
  }
  // back substitution
  std::vector<std::vector<double>> sol(
      nrhs, std::vector<double>(static_cast<std::size_t>(nin) * m, 0.0));
  for (int q = 0; q < nrhs; ++q) {
    std::vector<double> last(m);
    for (int r = 0; r < m; ++r)
      last[r] = rhs[q][static_cast<std::size_t>(nin - 1) * m + r];
    std::vector<double> x = solve_dense(diag[nin - 1], last);
    for (int r = 0; r < m; ++r)
      sol[q][static_cast<std::size_t>(nin - 1) * m + r] = x[r];
    for (int j = nin - 2; j >= 0; --j) {
      std::vector<double> xnext(m), b(m);
      for (int r = 0; r < m; ++r)
        xnext[r] = sol[q][static_cast<std::size_t>(j + 1) * m + r];
      std::vector<double> ux = mat_vec(upper[j], xnext);
      for (int r = 0; r < m; ++r)
        b[r] = rhs[q][static_cast<std::size_t>(j) * m + r] - ux[r];
      std::vector<double> x2 = solve_dense(diag[j], b);
      for (int r = 0; r < m; ++r) sol[q][static_cast<std::size_t>(j) * m + r] = x2[r];
    }
  }

  // Row 0: B[0] xi + C[0] X[1] + A[0] X[n-1] = D[0], with
  // X[j](xi) = particular + H columns * xi.
  SmallMatrix closure = B[0];
  std::vector<double> rhs0(m);
  for (int r = 0; r < m; ++r) rhs0[r] = D[r];
  for (int k = 0; k < m; ++k) {
    std::vector<double> h1(m), hn(m);
    for (int r = 0; r < m; ++r) {
      h1[r] = sol[k + 1][r];  // X[1] response
      hn[r] = sol[k + 1][static_cast<std::size_t>(nin - 1) * m + r];
    }
    std::vector<double> c1 = mat_vec(C[0], h1);
    std::vector<double> an = mat_vec(A[0], hn);
    for (int r = 0; r < m; ++r) closure(r, k) += c1[r] + an[r];
  }
  {
    std::vector<double> p1(m), pn(m);
    for (int r = 0; r < m; ++r) {
      p1[r] = sol[0][r];
      pn[r] = sol[0][static_cast<std::size_t>(nin - 1) * m + r];
    }
    std::vector<double> c1 = mat_vec(C[0], p1);
    std::vector<double> an = mat_vec(A[0], pn);
    for (int r = 0; r < m; ++r) rhs0[r] -= c1[r] + an[r];
  }
  std::vector<double> xi = solve_dense(closure, rhs0);

  std::vector<double> X(static_cast<std::size_t>(n) * m);
  for (int r = 0; r < m; ++r) X[r] = xi[r];
  for (int j = 1; j < n; ++j)
    for (int r = 0; r < m; ++r) {
      double v = sol[0][static_cast<std::size_t>(j - 1) * m + r];
      for (int k = 0; k < m; ++k)
        v += sol[k + 1][static_cast<std::size_t>(j - 1) * m + r] * xi[k];
      X[static_cast<std::size_t>(j) * m + r] = v;
    }
  return X;
}

}  // namespace ratchet
