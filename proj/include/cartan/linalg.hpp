#pragma once

// Dense complex linear algebra at desk scale (matrices up to ~128x128):
// cyclic Jacobi for Hermitian eigenproblems, one-sided (Hestenes) Jacobi for
// the SVD, the unitary-congruence canonical form of antisymmetric matrices,
// joint diagonalization of commuting normal families and Haar sampling.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numeric>
#include <span>
#include <vector>

#include "cartan/error.hpp"
#include "cartan/matrix.hpp"
#include "cartan/random.hpp"

namespace cartan {

inline constexpr double kDefaultTol = 1e-10;

namespace detail {

inline constexpr int kMaxJacobiSweeps = 100;
inline constexpr double kJacobiEps = 4.0 * std::numeric_limits<double>::epsilon();

// Unitary J acting on coordinates (p, q) such that J^* [[app, apq], [conj(apq), aqq]] J
// is diagonal. Stored as (Jpp, Jpq, Jqp, Jqq).
struct PlaneRotation {
  Complex pp, pq, qp, qq;
};

inline PlaneRotation jacobi_rotation(double app, double aqq, Complex apq) {
  const double g = std::abs(apq);
  const Complex phase = apq / g;
  const double theta = (aqq - app) / (2.0 * g);
  double t = 1.0 / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
  if (theta < 0) t = -t;
  const double c = 1.0 / std::sqrt(t * t + 1.0);
  const double s = t * c;
  const Complex ph = std::conj(phase);
  return {Complex(c), Complex(s), -s * ph, c * ph};
}

// M <- M J on columns p, q.
inline void rotate_columns(ComplexMatrix& m, std::size_t p, std::size_t q, const PlaneRotation& j) {
  for (std::size_t k = 0; k < m.rows(); ++k) {
    const Complex mp = m(k, p);
    const Complex mq = m(k, q);
    m(k, p) = mp * j.pp + mq * j.qp;
    m(k, q) = mp * j.pq + mq * j.qq;
  }
}

// M <- J^* M on rows p, q.
inline void rotate_rows(ComplexMatrix& m, std::size_t p, std::size_t q, const PlaneRotation& j) {
  for (std::size_t k = 0; k < m.cols(); ++k) {
    const Complex mp = m(p, k);
    const Complex mq = m(q, k);
    m(p, k) = std::conj(j.pp) * mp + std::conj(j.qp) * mq;
    m(q, k) = std::conj(j.pq) * mp + std::conj(j.qq) * mq;
  }
}

inline double column_norm2(const ComplexMatrix& m, std::size_t j) {
  double s = 0;
  for (std::size_t i = 0; i < m.rows(); ++i) s += abs2(m(i, j));
  return s;
}

inline Complex column_inner(const ComplexMatrix& m, std::size_t i, std::size_t j) {
  Complex s{};
  for (std::size_t k = 0; k < m.rows(); ++k) s += std::conj(m(k, i)) * m(k, j);
  return s;
}

// Result of one-sided Jacobi: all column norms of A V (descending), V unitary
// (n x n) and W = A V with columns permuted accordingly.
struct HestenesResult {
  std::vector<double> norms;
  ComplexMatrix v;
  ComplexMatrix w;
};

inline HestenesResult hestenes(const ComplexMatrix& a) {
  const std::size_t n = a.cols();
  ComplexMatrix w = a;
  ComplexMatrix v = ComplexMatrix::identity(n);
  // Columns that are numerically zero (rank deficiency, wide matrices) only
  // carry rounding noise; rotating them against each other never settles.
  const double noise = std::pow(static_cast<double>(std::max<std::size_t>(n, 1)) * kJacobiEps, 2) *
                       std::pow(a.frobenius_norm(), 2);
  bool converged = n < 2;
  for (int sweep = 0; sweep < kMaxJacobiSweeps && !converged; ++sweep) {
    bool rotated = false;
    for (std::size_t i = 0; i + 1 < n; ++i) {
      for (std::size_t j = i + 1; j < n; ++j) {
        const double alpha = column_norm2(w, i);
        const double beta = column_norm2(w, j);
        const Complex gamma = column_inner(w, i, j);
        const double g = std::abs(gamma);
        if (g <= noise || g <= kJacobiEps * std::sqrt(alpha * beta)) continue;
        rotated = true;
        const auto rot = jacobi_rotation(alpha, beta, gamma);
        rotate_columns(w, i, j, rot);
        rotate_columns(v, i, j, rot);
      }
    }
    converged = !rotated;
  }
  if (!converged) throw Error(ErrorKind::NoConvergence, "one-sided Jacobi sweep cap exceeded");

  std::vector<double> norms(n);
  for (std::size_t j = 0; j < n; ++j) norms[j] = std::sqrt(column_norm2(w, j));
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](auto x, auto y) { return norms[x] > norms[y]; });

  HestenesResult r{std::vector<double>(n), ComplexMatrix(n, n), ComplexMatrix(a.rows(), n)};
  for (std::size_t k = 0; k < n; ++k) {
    r.norms[k] = norms[order[k]];
    for (std::size_t i = 0; i < n; ++i) r.v(i, k) = v(i, order[k]);
    for (std::size_t i = 0; i < a.rows(); ++i) r.w(i, k) = w(i, order[k]);
  }
  return r;
}

// Removes the components of v along the given orthonormal columns (two passes
// of classical Gram-Schmidt) and returns the residual.
inline ComplexMatrix project_out(const std::vector<ComplexMatrix>& basis, ComplexMatrix v) {
  for (int pass = 0; pass < 2; ++pass)
    for (const auto& b : basis) v.axpy(-inner(b, v), b);
  return v;
}

}  // namespace detail

/// Extends the orthonormal columns of q (m x k) to an m x m unitary.
inline ComplexMatrix complete_to_unitary(const ComplexMatrix& q, std::size_t m) {
  std::vector<ComplexMatrix> basis;
  for (std::size_t j = 0; j < q.cols(); ++j) basis.push_back(q.col(j));
  while (basis.size() < m) {
    ComplexMatrix best;
    double best_norm = -1;
    for (std::size_t e = 0; e < m; ++e) {
      ComplexMatrix v(m, 1);
      v(e, 0) = 1.0;
      auto r = detail::project_out(basis, std::move(v));
      const double nr = r.frobenius_norm();
      if (nr > best_norm) {
        best_norm = nr;
        best = std::move(r);
      }
    }
    best *= Complex(1.0 / best_norm);
    basis.push_back(std::move(best));
  }
  return ComplexMatrix::hcat(basis, m);
}

struct HermitianEig {
  std::vector<double> values;  // ascending
  ComplexMatrix vectors;       // columns are eigenvectors
};

/// Cyclic Jacobi on a Hermitian matrix. Throws NotHermitian when
/// ||A - A*|| > tol ||A|| (Frobenius norms).
inline HermitianEig hermitian_eig(const ComplexMatrix& a_in, double tol = kDefaultTol) {
  if (!a_in.square()) throw Error(ErrorKind::SizeMismatch, "hermitian_eig needs a square matrix");
  const double scale = a_in.frobenius_norm();
  if ((a_in - a_in.adjoint()).frobenius_norm() > tol * scale)
    throw Error(ErrorKind::NotHermitian, "||A - A*|| exceeds tol * ||A||");

  const std::size_t n = a_in.rows();
  ComplexMatrix a = hermitian_part(a_in);
  ComplexMatrix v = ComplexMatrix::identity(n);

  auto off_norm = [&] {
    double s = 0;
    for (std::size_t p = 0; p < n; ++p)
      for (std::size_t q = p + 1; q < n; ++q) s += abs2(a(p, q));
    return std::sqrt(s);
  };

  bool converged = false;
  for (int sweep = 0; sweep <= detail::kMaxJacobiSweeps; ++sweep) {
    if (off_norm() <= detail::kJacobiEps * scale) {
      converged = true;
      break;
    }
    for (std::size_t p = 0; p + 1 < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        const Complex apq = a(p, q);
        if (apq == Complex{}) continue;
        const auto rot = detail::jacobi_rotation(a(p, p).real(), a(q, q).real(), apq);
        detail::rotate_columns(a, p, q, rot);
        detail::rotate_rows(a, p, q, rot);
        a(p, q) = a(q, p) = 0.0;
        a(p, p) = a(p, p).real();
        a(q, q) = a(q, q).real();
        detail::rotate_columns(v, p, q, rot);
      }
    }
  }
  if (!converged) throw Error(ErrorKind::NoConvergence, "Jacobi sweep cap exceeded");

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](auto x, auto y) { return a(x, x).real() < a(y, y).real(); });
  HermitianEig out{std::vector<double>(n), ComplexMatrix(n, n)};
  for (std::size_t k = 0; k < n; ++k) {
    out.values[k] = a(order[k], order[k]).real();
    for (std::size_t i = 0; i < n; ++i) out.vectors(i, k) = v(i, order[k]);
  }
  return out;
}

struct Svd {
  ComplexMatrix u;              // m x m unitary
  std::vector<double> sigmas;   // min(m, n), descending
  ComplexMatrix v;              // n x n unitary
};

/// A = U diag(sigmas) V*.
inline Svd svd(const ComplexMatrix& a) {
  if (a.rows() < a.cols()) {
    auto t = svd(a.adjoint());
    return {std::move(t.v), std::move(t.sigmas), std::move(t.u)};
  }
  const std::size_t m = a.rows();
  const std::size_t n = a.cols();
  auto h = detail::hestenes(a);
  const std::size_t k = std::min(m, n);
  const double smax = h.norms.empty() ? 0.0 : h.norms.front();
  const double cutoff = smax * std::max<double>(m, n) * std::numeric_limits<double>::epsilon();

  std::vector<ComplexMatrix> ucols;
  for (std::size_t j = 0; j < k; ++j) {
    if (h.norms[j] <= cutoff || h.norms[j] == 0.0) break;
    auto c = h.w.col(j);
    c *= Complex(1.0 / h.norms[j]);
    ucols.push_back(detail::project_out(ucols, std::move(c)));
    ucols.back() *= Complex(1.0 / ucols.back().frobenius_norm());
  }
  Svd out;
  out.u = complete_to_unitary(ComplexMatrix::hcat(ucols, m), m);
  out.sigmas.assign(h.norms.begin(), h.norms.begin() + static_cast<std::ptrdiff_t>(k));
  out.v = std::move(h.v);
  return out;
}

inline std::vector<double> singular_values(const ComplexMatrix& a) {
  auto h = detail::hestenes(a.rows() >= a.cols() ? a : a.adjoint());
  h.norms.resize(std::min(a.rows(), a.cols()));
  return h.norms;
}

/// Largest singular value.
inline double operator_norm(const ComplexMatrix& a) {
  if (a.empty()) return 0.0;
  return singular_values(a).front();
}

/// Orthonormal basis (columns) of {x : A x = 0}, with singular values below
/// tol * max(1, sigma_max) treated as zero.
inline ComplexMatrix null_space(const ComplexMatrix& a, double tol) {
  const std::size_t n = a.cols();
  if (a.rows() == 0) return ComplexMatrix::identity(n);
  auto h = detail::hestenes(a);
  const double thr = tol * std::max(1.0, h.norms.empty() ? 0.0 : h.norms.front());
  std::size_t first = 0;
  while (first < n && h.norms[first] > thr) ++first;
  return h.v.cols_range(first, n - first);
}

inline std::size_t numerical_rank(const ComplexMatrix& a, double rel_tol) {
  auto s = singular_values(a);
  if (s.empty() || s.front() == 0.0) return 0;
  return static_cast<std::size_t>(
      std::count_if(s.begin(), s.end(), [&](double x) { return x > rel_tol * s.front(); }));
}

/// Min eigenvalue >= -tol * max(1, ||A||).
inline bool is_psd(const ComplexMatrix& a, double tol = kDefaultTol) {
  const double scale = std::max(1.0, a.frobenius_norm());
  if ((a - a.adjoint()).frobenius_norm() > tol * scale)
    throw Error(ErrorKind::NotHermitian, "is_psd needs a Hermitian matrix");
  if (a.rows() == 0) return true;
  auto e = hermitian_eig(hermitian_part(a), 1.0);
  const double norm = std::max(std::abs(e.values.front()), std::abs(e.values.back()));
  return e.values.front() >= -tol * std::max(1.0, norm);
}

inline double min_eigenvalue(const ComplexMatrix& a) {
  if (a.rows() == 0) return 0.0;
  return hermitian_eig(hermitian_part(a), 1.0).values.front();
}

/// Haar-distributed unitary: Gram-Schmidt QR of a Ginibre matrix. Gram-Schmidt
/// yields an R factor with positive diagonal, which is the phase convention that
/// makes Q Haar distributed.
inline ComplexMatrix haar_unitary(std::size_t n, Rng& rng) {
  if (n == 0) throw Error(ErrorKind::InvalidArgument, "haar_unitary needs n >= 1");
  const auto g = ginibre(n, n, rng);
  std::vector<ComplexMatrix> q;
  q.reserve(n);
  for (std::size_t j = 0; j < n; ++j) {
    auto v = detail::project_out(q, g.col(j));
    v *= Complex(1.0 / v.frobenius_norm());
    q.push_back(std::move(v));
  }
  return ComplexMatrix::hcat(q, n);
}

inline ComplexMatrix haar_unitary(std::size_t n, std::uint64_t seed) {
  Rng rng(seed);
  return haar_unitary(n, rng);
}

/// Smallest subspace containing the columns of `start` and invariant under every
/// applier. A candidate direction is kept when its residual after projection
/// exceeds tol * max(1, ||candidate||).
inline ComplexMatrix orthonormal_closure(const ComplexMatrix& start,
                                         std::span<const ComplexMatrix> appliers,
                                         double tol = kDefaultTol) {
  const std::size_t k = start.rows();
  for (const auto& a : appliers)
    if (a.rows() != k || a.cols() != k)
      throw Error(ErrorKind::SizeMismatch, "applier extent differs from vector length");

  std::vector<ComplexMatrix> basis;
  auto try_add = [&](const ComplexMatrix& v) {
    const double nv = v.frobenius_norm();
    auto r = detail::project_out(basis, v);
    const double nr = r.frobenius_norm();
    if (nr > tol * std::max(1.0, nv)) {
      r *= Complex(1.0 / nr);
      basis.push_back(std::move(r));
    }
  };
  for (std::size_t j = 0; j < start.cols(); ++j) try_add(start.col(j));
  for (std::size_t next = 0; next < basis.size(); ++next) {
    const ComplexMatrix b = basis[next];
    for (const auto& a : appliers) try_add(a * b);
  }
  return ComplexMatrix::hcat(basis, k);
}

// ---------------------------------------------------------------------------
// Antisymmetric unitary-congruence canonical form.

struct YoulaForm {
  ComplexMatrix u;             // unitary, U Z U^t = canonical
  std::vector<double> sigmas;  // one per 2x2 block, descending
  ComplexMatrix canonical;     // direct sum of sigma_j [[0,1],[-1,0]] padded with zeros
  double residual = 0.0;       // ||U Z U^t - canonical||_F
};

inline ComplexMatrix youla_block_form(std::span<const double> sigmas, std::size_t n) {
  ComplexMatrix c(n, n);
  for (std::size_t j = 0; j < sigmas.size() && 2 * j + 1 < n; ++j) {
    c(2 * j, 2 * j + 1) = sigmas[j];
    c(2 * j + 1, 2 * j) = -sigmas[j];
  }
  return c;
}

/// Finds unitary U with U Z U^t block diagonal. Left singular vectors of Z are
/// eigenvectors of Z Z*; within a singular-value cluster, each chosen vector q
/// is paired with -Z conj(q) / sigma, which is orthogonal to q because
/// conj(q)^t Z conj(q) vanishes for antisymmetric Z.
inline YoulaForm youla_canonical(const ComplexMatrix& z_in, double tol = kDefaultTol) {
  if (!z_in.square()) throw Error(ErrorKind::NotAntisymmetric, "matrix is not square");
  const std::size_t n = z_in.rows();
  const double znorm = z_in.frobenius_norm();
  if ((z_in + z_in.transpose()).frobenius_norm() > tol * std::max(1.0, znorm))
    throw Error(ErrorKind::NotAntisymmetric, "||Z + Z^t|| exceeds tolerance");
  const ComplexMatrix z = (z_in - z_in.transpose()) * Complex(0.5);

  const auto s = svd(z);
  const double smax = s.sigmas.empty() ? 0.0 : s.sigmas.front();
  const double zero_thr = tol * std::max(smax, std::numeric_limits<double>::min());
  const double cluster_gap = 1e-8 * std::max(smax, 1.0);

  std::vector<ComplexMatrix> chosen;
  std::vector<double> pair_sigmas;
  std::size_t j = 0;
  while (j < n && s.sigmas[j] > zero_thr) {
    std::size_t end = j + 1;
    while (end < n && s.sigmas[end] > zero_thr && s.sigmas[end - 1] - s.sigmas[end] <= cluster_gap)
      ++end;
    std::vector<ComplexMatrix> candidates;
    for (std::size_t c = j; c < end; ++c) candidates.push_back(s.u.col(c));
    for (std::size_t pair = 0; pair < (end - j) / 2; ++pair) {
      ComplexMatrix best;
      double best_norm = -1;
      for (const auto& c : candidates) {
        auto r = detail::project_out(chosen, c);
        const double nr = r.frobenius_norm();
        if (nr > best_norm) {
          best_norm = nr;
          best = std::move(r);
        }
      }
      if (best_norm < 0.5) break;
      best *= Complex(1.0 / best_norm);
      ComplexMatrix image = z * best.conjugate();
      const double sigma = image.frobenius_norm();
      ComplexMatrix partner = image * Complex(-1.0 / sigma);
      chosen.push_back(std::move(best));
      partner = detail::project_out(chosen, std::move(partner));
      partner *= Complex(1.0 / partner.frobenius_norm());
      chosen.push_back(std::move(partner));
      pair_sigmas.push_back(sigma);
    }
    j = end;
  }

  YoulaForm out;
  const ComplexMatrix q = complete_to_unitary(ComplexMatrix::hcat(chosen, n), n);
  out.u = q.adjoint();
  out.sigmas = pair_sigmas;
  out.sigmas.resize(n / 2, 0.0);
  out.canonical = youla_block_form(out.sigmas, n);
  out.residual = (out.u * z_in * out.u.transpose() - out.canonical).frobenius_norm();
  return out;
}

// ---------------------------------------------------------------------------
// Joint diagonalization of commuting normal families.

struct Spectrum {
  std::vector<ComplexVector> points;
  std::vector<std::size_t> multiplicities;

  std::size_t total_multiplicity() const {
    return std::accumulate(multiplicities.begin(), multiplicities.end(), std::size_t{0});
  }
};

/// Agglomerative merge of joint eigenvalue tuples at Euclidean distance <= tol.
inline Spectrum merge_points(const std::vector<ComplexVector>& pts, double tol) {
  Spectrum s;
  for (const auto& p : pts) {
    bool merged = false;
    for (std::size_t k = 0; k < s.points.size() && !merged; ++k) {
      double d2 = 0;
      for (std::size_t i = 0; i < p.size(); ++i) d2 += abs2(p[i] - s.points[k][i]);
      if (std::sqrt(d2) <= tol) {
        ++s.multiplicities[k];
        merged = true;
      }
    }
    if (!merged) {
      s.points.push_back(p);
      s.multiplicities.push_back(1);
    }
  }
  return s;
}

struct JointDiagonalization {
  ComplexMatrix u;                          // columns: joint eigenvectors
  std::vector<ComplexVector> column_points;  // joint eigenvalue tuple per column
  Spectrum spectrum;
};

inline bool is_commuting_family(std::span<const ComplexMatrix> t, double tol) {
  for (std::size_t i = 0; i < t.size(); ++i)
    for (std::size_t j = i + 1; j < t.size(); ++j)
      if (commutator_norm(t[i], t[j]) >
          tol * std::max(1.0, t[i].frobenius_norm() * t[j].frobenius_norm()))
        return false;
  return true;
}

inline bool is_normal_matrix(const ComplexMatrix& a, double tol) {
  const double n = a.frobenius_norm();
  return commutator_norm(a, a.adjoint()) <= tol * std::max(1.0, n * n);
}

/// Diagonalizes a random real combination of the Hermitian and skew-Hermitian
/// parts, then refines inside eigenvalue clusters (gap 1e-8 ||combination||).
/// The combination coefficients come from a fixed internal seed.
inline JointDiagonalization joint_diagonalize(std::span<const ComplexMatrix> t,
                                              double tol = kDefaultTol) {
  if (t.empty()) throw Error(ErrorKind::InvalidArgument, "empty tuple");
  const std::size_t k = t.front().rows();
  for (const auto& m : t)
    if (m.rows() != k || m.cols() != k) throw Error(ErrorKind::SizeMismatch, "tuple extents differ");
  for (const auto& m : t)
    if (!is_normal_matrix(m, tol)) throw Error(ErrorKind::NotNormal, "coordinate is not normal");
  if (!is_commuting_family(t, tol)) throw Error(ErrorKind::NotCommuting, "coordinates do not commute");

  std::vector<ComplexMatrix> parts;
  for (const auto& m : t) {
    parts.push_back(hermitian_part(m));
    parts.push_back((m - m.adjoint()) * Complex(0.0, -0.5));
  }

  Rng rng(0x6a09e667f3bcc908ULL);
  std::vector<ComplexMatrix> done;
  struct Work {
    ComplexMatrix basis;
    int depth;
  };
  std::vector<Work> stack{{ComplexMatrix::identity(k), 0}};
  constexpr int kMaxDepth = 24;

  while (!stack.empty()) {
    Work w = std::move(stack.back());
    stack.pop_back();
    const std::size_t c = w.basis.cols();
    if (c == 1) {
      done.push_back(std::move(w.basis));
      continue;
    }
    // Scalar on this block already?
    bool scalar = true;
    for (const auto& m : t) {
      const auto r = w.basis.adjoint() * m * w.basis;
      const auto mean = r.trace() / static_cast<double>(c);
      if ((r - ComplexMatrix::identity(c) * mean).frobenius_norm() >
          tol * std::max(1.0, m.frobenius_norm())) {
        scalar = false;
        break;
      }
    }
    if (scalar) {
      done.push_back(std::move(w.basis));
      continue;
    }
    if (w.depth >= kMaxDepth) throw Error(ErrorKind::NoConvergence, "joint diagonalization refinement");

    ComplexMatrix comb(c, c);
    for (const auto& p : parts) comb.axpy(uniform(rng, -1.0, 1.0), w.basis.adjoint() * p * w.basis);
    comb = hermitian_part(comb);
    const auto e = hermitian_eig(comb, 1.0);
    const double cnorm = std::max(std::abs(e.values.front()), std::abs(e.values.back()));
    const double gap = 1e-8 * cnorm;
    std::size_t first = 0;
    while (first < c) {
      std::size_t last = first + 1;
      while (last < c && e.values[last] - e.values[last - 1] <= gap) ++last;
      stack.push_back({w.basis * e.vectors.cols_range(first, last - first), w.depth + 1});
      first = last;
    }
  }

  JointDiagonalization out;
  out.u = ComplexMatrix::hcat(done, k);
  for (std::size_t j = 0; j < k; ++j) {
    const auto uj = out.u.col(j);
    ComplexVector pt;
    for (const auto& m : t) pt.push_back(inner(uj, m * uj));
    out.column_points.push_back(std::move(pt));
  }
  for (std::size_t i = 0; i < t.size(); ++i) {
    ComplexVector d(k);
    for (std::size_t j = 0; j < k; ++j) d[j] = out.column_points[j][i];
    const double off = (out.u.adjoint() * t[i] * out.u - diag(d)).frobenius_norm();
    if (off > 10.0 * tol * std::max(1.0, t[i].frobenius_norm()))
      throw Error(ErrorKind::NoConvergence, "joint diagonalization residual above 10*tol");
  }
  out.spectrum = merge_points(out.column_points, tol);
  return out;
}

}  // namespace cartan
