#pragma once

// Finite atomic models of boundary isometries: a measure on Shilov points, its
// diagonal multiplication tuple, an invariant subspace H and the compression S.
// On top of that: intertwiner spaces, the norm-preserving lift of an
// intertwiner to the extensions, the semispectral domination inequality and the
// isometric / surjective / bijective preservation checks.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "cartan/domains.hpp"
#include "cartan/error.hpp"
#include "cartan/linalg.hpp"
#include "cartan/matrix.hpp"
#include "cartan/random.hpp"
#include "cartan/verifier.hpp"

namespace cartan {

inline constexpr double kLiftNullThreshold = 1e-8;

struct Atom {
  FlatPoint point;
  double weight = 1.0;
};

/// Atoms at distinct points with positive weights. Atoms closer than tol are
/// merged with their weights summed, so L^2(mu) has one coordinate per point.
class AtomicMeasure {
 public:
  AtomicMeasure(const DomainDescriptor& d, std::vector<Atom> atoms, double tol = kClassifyTol) : descriptor_(d) {
    for (auto& a : atoms) {
      check_length(d, a.point);
      if (!(a.weight > 0.0) || !std::isfinite(a.weight))
        throw Error(ErrorKind::InvalidArgument, "atom weights must be positive");
      if (!on_shilov(d, a.point, tol)) throw Error(ErrorKind::NotOnShilov, "atom is not on the Shilov boundary");
      auto same = std::find_if(atoms_.begin(), atoms_.end(), [&](const Atom& b) { return distance(a.point, b.point) <= tol; });
      if (same != atoms_.end())
        same->weight += a.weight;
      else
        atoms_.push_back(std::move(a));
    }
    if (atoms_.empty()) throw Error(ErrorKind::EmptyMeasure, "measure has no atoms");
  }

  const DomainDescriptor& descriptor() const noexcept { return descriptor_; }
  const std::vector<Atom>& atoms() const noexcept { return atoms_; }
  std::size_t size() const noexcept { return atoms_.size(); }

  static double distance(std::span<const Complex> a, std::span<const Complex> b) {
    double s = 0;
    for (std::size_t i = 0; i < a.size(); ++i) s += abs2(a[i] - b[i]);
    return std::sqrt(s);
  }

 private:
  DomainDescriptor descriptor_;
  std::vector<Atom> atoms_;
};

/// Multiplication by the coordinate functions on L^2(mu), written in the
/// orthonormal basis e_j / sqrt(w_j); the weights drop out of the matrices.
inline Tuple multiplication_tuple(const AtomicMeasure& mu) {
  const std::size_t k = mu.size();
  const std::size_t n = mu.descriptor().dimension();
  Tuple t(n, ComplexMatrix(k, k));
  for (std::size_t j = 0; j < k; ++j)
    for (std::size_t i = 0; i < n; ++i) t[i](j, j) = mu.atoms()[j].point[i];
  return t;
}

/// Coordinates of a function on the atoms (values g(zeta_j)) in the orthonormal basis.
inline ComplexMatrix function_coordinates(const AtomicMeasure& mu, std::span<const Complex> values) {
  if (values.size() != mu.size()) throw Error(ErrorKind::WrongLength, "function needs one value per atom");
  ComplexMatrix v(mu.size(), 1);
  for (std::size_t j = 0; j < mu.size(); ++j) v(j, 0) = values[j] * std::sqrt(mu.atoms()[j].weight);
  return v;
}

struct InvariantSpan {
  ComplexMatrix basis;
  bool invariant = false;
  double defect = 0.0;  // invariance_defect of the basis
};

/// span{N^alpha g : |alpha| <= degree}, with its invariance measured rather than assumed.
inline InvariantSpan invariant_subspace(std::span<const ComplexMatrix> n, const ComplexMatrix& generators, int degree,
                                        double tol = kDefaultTol) {
  if (degree < 0) throw Error(ErrorKind::InvalidArgument, "degree must be nonnegative");
  InvariantSpan s;
  s.basis = orbit_span(n, generators, degree, tol);
  s.defect = s.basis.cols() ? invariance_defect(n, s.basis) : 0.0;
  s.invariant = s.defect <= tol;
  return s;
}

struct SubnormalModel {
  AtomicMeasure measure;
  Tuple n;                // multiplication tuple on L^2(mu)
  ComplexMatrix h_basis;  // orthonormal basis of the invariant subspace H
  Tuple s;                // compression of n to H

  const DomainDescriptor& descriptor() const { return measure.descriptor(); }
};

/// `generators` holds one function per entry (values at the atoms, in atom
/// order after merging). Throws NotInvariant when the orbit span up to
/// `degree` is not invariant.
inline SubnormalModel build_model(AtomicMeasure mu, const std::vector<ComplexVector>& generators, int degree,
                                  double tol = kDefaultTol) {
  auto n = multiplication_tuple(mu);
  if (generators.empty()) throw Error(ErrorKind::InvalidArgument, "model needs at least one generator");
  std::vector<ComplexMatrix> cols;
  for (const auto& g : generators) cols.push_back(function_coordinates(mu, g));
  const auto span = invariant_subspace(n, ComplexMatrix::hcat(cols, mu.size()), degree, tol);
  if (!span.invariant)
    throw Error(ErrorKind::NotInvariant,
                "orbit span up to degree " + std::to_string(degree) + " is not invariant; raise the degree");
  if (span.basis.cols() == 0) throw Error(ErrorKind::InvalidArgument, "generators span the zero subspace");
  auto s = compress(n, span.basis, tol);
  return SubnormalModel{std::move(mu), std::move(n), span.basis, std::move(s)};
}

// ---------------------------------------------------------------------------
// Intertwiners.

namespace detail {

// vec is column-major: vec(A Y B) = (B^t kron A) vec(Y).
inline ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b) {
  ComplexMatrix k(a.rows() * b.rows(), a.cols() * b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) {
      const Complex s = a(i, j);
      if (s == Complex{}) continue;
      for (std::size_t p = 0; p < b.rows(); ++p)
        for (std::size_t q = 0; q < b.cols(); ++q) k(i * b.rows() + p, j * b.cols() + q) = s * b(p, q);
    }
  return k;
}

inline ComplexMatrix vec(const ComplexMatrix& m) {
  ComplexMatrix v(m.rows() * m.cols(), 1);
  for (std::size_t j = 0; j < m.cols(); ++j)
    for (std::size_t i = 0; i < m.rows(); ++i) v(j * m.rows() + i, 0) = m(i, j);
  return v;
}

inline ComplexMatrix unvec(const ComplexMatrix& v, std::size_t rows, std::size_t cols) {
  ComplexMatrix m(rows, cols);
  for (std::size_t j = 0; j < cols; ++j)
    for (std::size_t i = 0; i < rows; ++i) m(i, j) = v(j * rows + i, 0);
  return m;
}

// Rows of Y -> Y A_i - B_i Y for Y of shape rows(B) x cols(A), stacked over i.
inline ComplexMatrix sylvester_stack(std::span<const ComplexMatrix> a, std::span<const ComplexMatrix> b) {
  const std::size_t m = a.front().rows(), n = b.front().rows();
  std::vector<ComplexMatrix> blocks;
  std::size_t rows = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    auto blk = kron(a[i].transpose(), ComplexMatrix::identity(n));
    blk -= kron(ComplexMatrix::identity(m), b[i]);
    rows += blk.rows();
    blocks.push_back(std::move(blk));
  }
  ComplexMatrix out(rows, m * n);
  std::size_t r0 = 0;
  for (const auto& blk : blocks) {
    for (std::size_t r = 0; r < blk.rows(); ++r)
      for (std::size_t c = 0; c < blk.cols(); ++c) out(r0 + r, c) = blk(r, c);
    r0 += blk.rows();
  }
  return out;
}

inline ComplexMatrix vstack(const ComplexMatrix& a, const ComplexMatrix& b) {
  ComplexMatrix out(a.rows() + b.rows(), a.cols());
  for (std::size_t r = 0; r < a.rows(); ++r)
    for (std::size_t c = 0; c < a.cols(); ++c) out(r, c) = a(r, c);
  for (std::size_t r = 0; r < b.rows(); ++r)
    for (std::size_t c = 0; c < b.cols(); ++c) out(a.rows() + r, c) = b(r, c);
  return out;
}

inline void check_arity(std::span<const ComplexMatrix> s, std::span<const ComplexMatrix> t) {
  if (s.size() != t.size()) throw Error(ErrorKind::ArityMismatch, "tuples have different lengths");
  tuple_extent(s);
  tuple_extent(t);
}

}  // namespace detail

/// Largest ||X S_i - T_i X|| / max(1, ||X|| (||S_i|| + ||T_i||)).
inline double intertwining_defect(const ComplexMatrix& x, std::span<const ComplexMatrix> s,
                                  std::span<const ComplexMatrix> t) {
  detail::check_arity(s, t);
  if (x.rows() != t.front().rows() || x.cols() != s.front().rows())
    throw Error(ErrorKind::SizeMismatch, "intertwiner shape does not match the tuples");
  const double nx = operator_norm(x);
  double worst = 0;
  for (std::size_t i = 0; i < s.size(); ++i)
    worst = std::max(worst, operator_norm(x * s[i] - t[i] * x) /
                                std::max(1.0, nx * (operator_norm(s[i]) + operator_norm(t[i]))));
  return worst;
}

/// Frobenius-orthonormal basis of {X : X S_i = T_i X for all i}.
inline std::vector<ComplexMatrix> intertwiner_space(std::span<const ComplexMatrix> s, std::span<const ComplexMatrix> t,
                                                    double tol = kLiftNullThreshold) {
  detail::check_arity(s, t);
  const std::size_t h = s.front().rows(), j = t.front().rows();
  const auto null = null_space(detail::sylvester_stack(s, t), tol);
  std::vector<ComplexMatrix> basis;
  for (std::size_t c = 0; c < null.cols(); ++c) basis.push_back(detail::unvec(null.col(c), j, h));
  return basis;
}

// ---------------------------------------------------------------------------
// Lifting.

/// ReducingSpan: the extension of H is the smallest N-reducing subspace
/// containing it. Ambient: the whole atom space.
enum class ExtensionMode { ReducingSpan, Ambient };

struct LiftDiagnostics {
  double existence_residual = 0.0;    // stacked-system residual over max(1, ||X||)
  double sylvester_residual = 0.0;    // max_i ||Y M_i - N_i Y||
  double restriction_residual = 0.0;  // ||P_J Y|_H - X||
  std::size_t solution_dimension = 0;
  double norm_x = 0.0;
  double norm_lift = 0.0;
  double norm_gap = 0.0;
  std::size_t extension_dim_s = 0;
  std::size_t extension_dim_t = 0;
  std::size_t cyclic_dim_s = 0;
  std::size_t cyclic_dim_t = 0;
};

struct LiftResult {
  ComplexMatrix lifted;        // extension(S) -> extension(T), in extension coordinates
  ComplexMatrix ext_basis_s;   // orthonormal basis of extension(S) in the atom space of S
  ComplexMatrix ext_basis_t;
  ComplexMatrix cyclic_lift;   // lifted compressed to the reducing spans of H and J
  LiftDiagnostics diagnostics;
};

namespace detail {

inline ComplexMatrix extension_basis(const SubnormalModel& m, ExtensionMode mode, double tol) {
  if (mode == ExtensionMode::Ambient) return ComplexMatrix::identity(m.measure.size());
  return reducing_span(m.n, m.h_basis, tol).basis;
}

}  // namespace detail

/// Solves {Y M_i = N_i Y, P_J Y|_H = X} by minimum-norm least squares, where M
/// and N are the multiplication tuples restricted to the extensions.
inline LiftResult lift(const ComplexMatrix& x, const SubnormalModel& ms, const SubnormalModel& mt,
                       double tol = kClassifyTol, ExtensionMode mode = ExtensionMode::ReducingSpan) {
  if (!(ms.descriptor() == mt.descriptor())) throw Error(ErrorKind::ArityMismatch, "models over different domains");
  if (intertwining_defect(x, ms.s, mt.s) > tol) throw Error(ErrorKind::NotIntertwiner, "X S_i != T_i X");

  LiftResult r;
  r.ext_basis_s = detail::extension_basis(ms, mode, kDefaultTol);
  r.ext_basis_t = detail::extension_basis(mt, mode, kDefaultTol);
  const auto& es = r.ext_basis_s;
  const auto& et = r.ext_basis_t;
  const std::size_t m = es.cols(), n = et.cols();
  Tuple ma, nb;
  for (const auto& a : ms.n) ma.push_back(es.adjoint() * a * es);
  for (const auto& b : mt.n) nb.push_back(et.adjoint() * b * et);
  const ComplexMatrix hh = es.adjoint() * ms.h_basis;  // m x h
  const ComplexMatrix jj = et.adjoint() * mt.h_basis;  // n x j

  const auto syl = detail::sylvester_stack(ma, nb);
  const auto restr = detail::kron(hh.transpose(), jj.adjoint());
  const auto a = detail::vstack(syl, restr);
  ComplexMatrix rhs(a.rows(), 1);
  const auto vx = detail::vec(x);
  for (std::size_t i = 0; i < vx.rows(); ++i) rhs(syl.rows() + i, 0) = vx(i, 0);

  const auto dec = svd(a);
  const double smax = dec.sigmas.empty() ? 0.0 : dec.sigmas.front();
  const double cut = kLiftNullThreshold * std::max(smax, 1e-300);
  ComplexMatrix y(a.cols(), 1);
  std::size_t rank = 0;
  for (std::size_t k = 0; k < dec.sigmas.size(); ++k) {
    if (dec.sigmas[k] <= cut) continue;
    ++rank;
    Complex c{};
    for (std::size_t i = 0; i < a.rows(); ++i) c += std::conj(dec.u(i, k)) * rhs(i, 0);
    c /= dec.sigmas[k];
    for (std::size_t i = 0; i < a.cols(); ++i) y(i, 0) += c * dec.v(i, k);
  }
  r.lifted = detail::unvec(y, n, m);

  auto& d = r.diagnostics;
  d.solution_dimension = a.cols() - rank;
  d.norm_x = operator_norm(x);
  d.existence_residual = (a * y - rhs).frobenius_norm() / std::max(1.0, d.norm_x);
  for (std::size_t i = 0; i < ma.size(); ++i)
    d.sylvester_residual = std::max(d.sylvester_residual, operator_norm(r.lifted * ma[i] - nb[i] * r.lifted));
  d.restriction_residual = operator_norm(jj.adjoint() * r.lifted * hh - x);
  d.norm_lift = operator_norm(r.lifted);
  d.norm_gap = std::abs(d.norm_lift - d.norm_x);
  d.extension_dim_s = m;
  d.extension_dim_t = n;

  const auto cs = es.adjoint() * reducing_span(ms.n, ms.h_basis, kDefaultTol).basis;
  const auto ct = et.adjoint() * reducing_span(mt.n, mt.h_basis, kDefaultTol).basis;
  d.cyclic_dim_s = cs.cols();
  d.cyclic_dim_t = ct.cols();
  r.cyclic_lift = ct.adjoint() * r.lifted * cs;

  if (d.existence_residual > tol)
    throw Error(ErrorKind::NoLiftExists, "lift system is inconsistent (residual " + std::to_string(d.existence_residual) + ")");
  return r;
}

// ---------------------------------------------------------------------------
// Semispectral domination.

struct DominationReport {
  bool pass = true;
  double min_eigenvalue = 0.0;  // smallest eigenvalue over all points, before the tolerance
  std::size_t points_checked = 0;
};

namespace detail {

// rho({zeta}) compressed to H: B* diag(1 at atoms matching zeta) B.
inline ComplexMatrix point_mass(const SubnormalModel& m, std::span<const Complex> zeta, double tol) {
  const std::size_t h = m.h_basis.cols();
  ComplexMatrix out(h, h);
  for (std::size_t j = 0; j < m.measure.size(); ++j) {
    if (AtomicMeasure::distance(m.measure.atoms()[j].point, zeta) > tol) continue;
    for (std::size_t a = 0; a < h; ++a)
      for (std::size_t b = 0; b < h; ++b) out(a, b) += std::conj(m.h_basis(j, a)) * m.h_basis(j, b);
  }
  return out;
}

}  // namespace detail

/// Checks ||X||^2 rho_S({zeta}) - X* rho_T({zeta}) X >= 0 at every atom of
/// either model; additivity extends it to every set.
inline DominationReport semispectral_domination(const ComplexMatrix& x, const SubnormalModel& ms,
                                                const SubnormalModel& mt, double tol = kClassifyTol) {
  if (intertwining_defect(x, ms.s, mt.s) > tol) throw Error(ErrorKind::NotIntertwiner, "X S_i != T_i X");
  std::vector<FlatPoint> points;
  for (const auto* m : {&ms, &mt})
    for (const auto& a : m->measure.atoms())
      if (std::none_of(points.begin(), points.end(),
                       [&](const FlatPoint& p) { return AtomicMeasure::distance(p, a.point) <= kClassifyTol; }))
        points.push_back(a.point);

  const double nx2 = std::pow(operator_norm(x), 2);
  DominationReport rep;
  rep.min_eigenvalue = std::numeric_limits<double>::infinity();
  for (const auto& zeta : points) {
    auto g = detail::point_mass(ms, zeta, kClassifyTol) * Complex(nx2);
    g -= x.adjoint() * detail::point_mass(mt, zeta, kClassifyTol) * x;
    g = hermitian_part(g);
    const double lo = min_eigenvalue(g);
    rep.min_eigenvalue = std::min(rep.min_eigenvalue, lo);
    rep.pass = rep.pass && lo >= -tol * std::max(1.0, nx2);
    ++rep.points_checked;
  }
  return rep;
}

// ---------------------------------------------------------------------------
// Preservation of isometric, surjective and bijective intertwiners.

struct Implication {
  bool hypothesis = false;
  bool conclusion = false;
  bool holds() const { return !hypothesis || conclusion; }
};

struct PreservationReport {
  Implication isometric;
  Implication surjective;
  Implication bijective;
  bool holds() const { return isometric.holds() && surjective.holds() && bijective.holds(); }
};

inline bool is_isometry(const ComplexMatrix& x, double tol) {
  auto g = x.adjoint() * x;
  g -= ComplexMatrix::identity(x.cols());
  return operator_norm(g) <= tol;
}

inline bool is_surjective(const ComplexMatrix& x, double tol) {
  if (x.rows() == 0) return true;
  if (x.cols() < x.rows()) return false;
  const auto sv = singular_values(x);
  return sv[x.rows() - 1] > tol * std::max(1.0, sv.front());
}

inline bool is_bijective(const ComplexMatrix& x, double tol) { return x.rows() == x.cols() && is_surjective(x, tol); }

/// Finite-dimensional reading of the three preservation statements. `lifted`
/// is the lift restricted to the reducing spans of H and J.
inline PreservationReport preservation_checks(const ComplexMatrix& x, const ComplexMatrix& lifted,
                                              double tol = kClassifyTol) {
  PreservationReport r;
  r.isometric = {is_isometry(x, tol), is_isometry(lifted, tol)};
  r.surjective = {is_surjective(x, tol), is_surjective(lifted, tol)};
  r.bijective = {is_bijective(x, tol), is_bijective(lifted, tol)};
  return r;
}

// ---------------------------------------------------------------------------
// Random model pairs.

enum class PairKind { RandomIntertwiner, Identity, Embedding };

inline const char* to_string(PairKind k) {
  switch (k) {
    case PairKind::RandomIntertwiner: return "random";
    case PairKind::Identity: return "identity";
    case PairKind::Embedding: return "embedding";
  }
  return "?";
}

struct ModelPair {
  SubnormalModel s;
  SubnormalModel t;
  ComplexMatrix x;
  PairKind kind = PairKind::RandomIntertwiner;
};

namespace detail {

// Atom-matching partial isometry L^2(mu_S) -> L^2(mu_T) sending e_a to e_b when
// the atoms sit at the same point.
inline ComplexMatrix atom_matching(const AtomicMeasure& s, const AtomicMeasure& t, double tol) {
  ComplexMatrix e(t.size(), s.size());
  for (std::size_t a = 0; a < s.size(); ++a)
    for (std::size_t b = 0; b < t.size(); ++b)
      if (AtomicMeasure::distance(s.atoms()[a].point, t.atoms()[b].point) <= tol) e(b, a) = 1.0;
  return e;
}

inline SubnormalModel random_model(const DomainDescriptor& d, const std::vector<FlatPoint>& pool,
                                   const std::vector<std::size_t>& chosen, const std::vector<bool>& in_support,
                                   Rng& rng) {
  std::vector<Atom> atoms;
  for (auto i : chosen) atoms.push_back({pool[i], uniform(rng, 0.5, 2.0)});
  AtomicMeasure mu(d, std::move(atoms));
  ComplexVector g(mu.size());
  for (std::size_t j = 0; j < g.size(); ++j) g[j] = in_support[j] ? complex_normal(rng) : Complex{};
  return build_model(std::move(mu), {g}, static_cast<int>(g.size()));
}

}  // namespace detail

/// Two models over a shared pool of Shilov points and an intertwiner between
/// their compressions. Kinds: a random element of the intertwiner space, the
/// identity on a model paired with itself, or the canonical embedding into a
/// model whose H contains the image.
inline ModelPair random_model_pair(const DomainDescriptor& d, Rng& rng) {
  const std::size_t pool_size = uniform_index(rng, 2, 5);
  std::vector<FlatPoint> pool;
  for (std::size_t i = 0; i < pool_size; ++i) pool.push_back(sample_shilov_point(d, rng));

  auto random_subset = [&](std::size_t min_size) {
    std::vector<std::size_t> idx;
    while (idx.size() < min_size) {
      idx.clear();
      for (std::size_t i = 0; i < pool_size; ++i)
        if (uniform(rng, 0.0, 1.0) < 0.7) idx.push_back(i);
    }
    return idx;
  };
  auto random_support = [&](std::size_t k) {
    std::vector<bool> sup(k);
    bool any = false;
    for (std::size_t j = 0; j < k; ++j) any |= (sup[j] = uniform(rng, 0.0, 1.0) < 0.7);
    if (!any) sup[uniform_index(rng, 0, k - 1)] = true;
    return sup;
  };

  const double u = uniform(rng, 0.0, 1.0);
  const PairKind kind = u < 0.5 ? PairKind::RandomIntertwiner : (u < 0.75 ? PairKind::Identity : PairKind::Embedding);

  const auto s_atoms = random_subset(1);
  auto ms = detail::random_model(d, pool, s_atoms, random_support(s_atoms.size()), rng);

  if (kind == PairKind::Identity) {
    auto mt = ms;
    const auto x = ComplexMatrix::identity(ms.h_basis.cols());
    return {std::move(ms), std::move(mt), x, kind};
  }

  if (kind == PairKind::Embedding) {
    // T contains every S atom and its H contains the image of H_S.
    std::vector<std::size_t> t_atoms = s_atoms;
    for (std::size_t i = 0; i < pool_size; ++i)
      if (std::find(t_atoms.begin(), t_atoms.end(), i) == t_atoms.end() && uniform(rng, 0.0, 1.0) < 0.5)
        t_atoms.push_back(i);
    std::vector<bool> sup(t_atoms.size(), false);
    for (std::size_t j = 0; j < t_atoms.size(); ++j) {
      double in_h = 0;
      if (j < s_atoms.size())
        for (std::size_t c = 0; c < ms.h_basis.cols(); ++c) in_h += abs2(ms.h_basis(j, c));
      sup[j] = in_h > 1e-12 || uniform(rng, 0.0, 1.0) < 0.5;
    }
    auto mt = detail::random_model(d, pool, t_atoms, sup, rng);
    const auto e = detail::atom_matching(ms.measure, mt.measure, kClassifyTol);
    const ComplexMatrix x = mt.h_basis.adjoint() * e * ms.h_basis;
    return {std::move(ms), std::move(mt), x, kind};
  }

  const auto t_atoms = random_subset(1);
  auto mt = detail::random_model(d, pool, t_atoms, random_support(t_atoms.size()), rng);
  const auto basis = intertwiner_space(ms.s, mt.s);
  ComplexMatrix x(mt.h_basis.cols(), ms.h_basis.cols());
  for (const auto& b : basis) x.axpy(complex_normal(rng), b);
  return {std::move(ms), std::move(mt), x, kind};
}

}  // namespace cartan
