#pragma once

// Test-only helpers and oracles. Nothing here calls into the eigen/SVD code
// paths it is used to check.

#include <cmath>
#include <complex>
#include <utility>
#include <vector>

#include "cartan/hereditary.hpp"
#include "cartan/matrix.hpp"
#include "cartan/random.hpp"

namespace cartan::testing {

/// Determinant by LU with partial pivoting.
inline Complex lu_determinant(ComplexMatrix a) {
  const std::size_t n = a.rows();
  Complex det = 1.0;
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t piv = c;
    for (std::size_t r = c + 1; r < n; ++r)
      if (std::abs(a(r, c)) > std::abs(a(piv, c))) piv = r;
    if (a(piv, c) == Complex{}) return 0.0;
    if (piv != c) {
      for (std::size_t k = 0; k < n; ++k) std::swap(a(c, k), a(piv, k));
      det = -det;
    }
    det *= a(c, c);
    for (std::size_t r = c + 1; r < n; ++r) {
      const Complex f = a(r, c) / a(c, c);
      for (std::size_t k = c; k < n; ++k) a(r, k) -= f * a(c, k);
    }
  }
  return det;
}

inline ComplexMatrix random_matrix(std::size_t r, std::size_t c, Rng& rng) { return ginibre(r, c, rng); }

inline ComplexMatrix random_hermitian(std::size_t n, Rng& rng) {
  auto g = ginibre(n, n, rng);
  return (g + g.adjoint()) * Complex(0.5);
}

inline ComplexMatrix random_antisymmetric(std::size_t n, Rng& rng) {
  auto g = ginibre(n, n, rng);
  return (g - g.transpose()) * Complex(0.5);
}

inline double unitarity_defect(const ComplexMatrix& u) {
  return (u.adjoint() * u - ComplexMatrix::identity(u.cols())).frobenius_norm();
}

/// Lower bound on ||A|| from random unit vectors.
inline double random_vector_norm_bound(const ComplexMatrix& a, int samples, Rng& rng) {
  double best = 0;
  for (int s = 0; s < samples; ++s) {
    auto v = ginibre(a.cols(), 1, rng);
    v *= Complex(1.0 / v.frobenius_norm());
    best = std::max(best, (a * v).frobenius_norm());
  }
  return best;
}

inline ComplexMatrix jordan_block2() {
  // S e1 = e2, S e2 = 0.
  return ComplexMatrix{{0.0, 0.0}, {1.0, 0.0}};
}

inline ComplexMatrix shift3() {
  return ComplexMatrix{{0.0, 0.0, 0.0}, {1.0, 0.0, 0.0}, {0.0, 1.0, 0.0}};
}

/// Diagonal tuple whose j-th joint eigenvalue is pts[j].
inline std::vector<ComplexMatrix> diagonal_tuple(const std::vector<ComplexVector>& pts) {
  const std::size_t n = pts.front().size();
  std::vector<ComplexMatrix> t(n, ComplexMatrix(pts.size(), pts.size()));
  for (std::size_t j = 0; j < pts.size(); ++j)
    for (std::size_t i = 0; i < n; ++i) t[i](j, j) = pts[j][i];
  return t;
}

inline std::vector<ComplexMatrix> conjugated(const std::vector<ComplexMatrix>& t, const ComplexMatrix& u) {
  std::vector<ComplexMatrix> out;
  for (const auto& m : t) out.push_back(u * m * u.adjoint());
  return out;
}

/// Sum of `terms` random monomials with each exponent in [0, maxdeg].
inline HereditaryPolynomial random_hereditary(std::size_t n, int terms, int maxdeg, Rng& rng) {
  HereditaryPolynomial p(n);
  for (int t = 0; t < terms; ++t) {
    MultiIndex a(n), b(n);
    for (std::size_t i = 0; i < n; ++i) {
      a[i] = static_cast<int>(uniform_index(rng, 0, static_cast<std::size_t>(maxdeg)));
      b[i] = static_cast<int>(uniform_index(rng, 0, static_cast<std::size_t>(maxdeg)));
    }
    p += HereditaryPolynomial::monomial(a, b, complex_normal(rng));
  }
  return p;
}

}  // namespace cartan::testing
