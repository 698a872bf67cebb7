#ifndef RATCHET_LINALG_HPP
#define RATCHET_LINALG_HPP

#include <vector>

namespace ratchet {

/// Solves the cyclic tridiagonal system
///   a[j] x[j-1] + b[j] x[j] + c[j] x[j+1] = d[j]   (indices mod n)
/// by the Sherman-Morrison reduction to a plain Thomas solve.
/// Requires n >= 3 and a nonsingular system.
std::vector<double> solve_cyclic_tridiagonal(const std::vector<double>& a,
                                             const std::vector<double>& b,
                                             const std::vector<double>& c,
                                             const std::vector<double>& d);

/// Dense m-by-m matrix in row-major order, m small (state counts).
struct SmallMatrix {
  int m = 0;
  std::vector<double> e;  // e[r*m + c]
  SmallMatrix() = default;
  explicit SmallMatrix(int m_) : m(m_), e(static_cast<std::size_t>(m_) * m_, 0.0) {}
  double& operator()(int r, int c) { return e[static_cast<std::size_t>(r) * m + c]; }
  double operator()(int r, int c) const { return e[static_cast<std::size_t>(r) * m + c]; }
  static SmallMatrix identity(int m);
};

SmallMatrix operator*(const SmallMatrix& A, const SmallMatrix& B);
std::vector<double> mat_vec(const SmallMatrix& A, const std::vector<double>& x);

/// LU solve with partial pivoting, in place on a copy; throws on singular.
std::vector<double> solve_dense(SmallMatrix A, std::vector<double> rhs);

/// exp(A) for a small matrix by scaling and squaring with a Taylor kernel.
SmallMatrix expm(const SmallMatrix& A);

/// Block cyclic tridiagonal solve:
///   A[j] X[j-1] + B[j] X[j] + C[j] X[j+1] = D[j]   (block indices mod n)
/// with m-by-m blocks, solved by bordering on X[0].
/// D and the result are stored as n contiguous m-vectors.
std::vector<double> solve_block_cyclic_tridiagonal(const std::vector<SmallMatrix>& A,
                                                   const std::vector<SmallMatrix>& B,
                                                   const std::vector<SmallMatrix>& C,
                                                   const std::vector<double>& D);

}  // namespace ratchet

#endif
