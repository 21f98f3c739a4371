#pragma once

// Two independent tests of whether a commuting normal tuple is a boundary
// isometry for a Cartan domain: joint spectrum inside the Shilov boundary, and
// the hereditary identity set. Plus compression/extension plumbing and a
// randomized equivalence sweep.

#include <algorithm>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "cartan/domains.hpp"
#include "cartan/error.hpp"
#include "cartan/hereditary.hpp"
#include "cartan/linalg.hpp"
#include "cartan/matrix.hpp"
#include "cartan/random.hpp"

namespace cartan {

inline constexpr double kClassifyTol = 1e-8;

using Tuple = std::vector<ComplexMatrix>;

/// Common extent of a tuple; throws SizeMismatch for ragged or non-square input.
inline std::size_t tuple_extent(std::span<const ComplexMatrix> s) {
  if (s.empty()) throw Error(ErrorKind::ArityMismatch, "empty tuple");
  const std::size_t k = s.front().rows();
  for (const auto& m : s)
    if (m.rows() != k || m.cols() != k) throw Error(ErrorKind::SizeMismatch, "tuple coordinates must be square of one size");
  return k;
}

inline bool check_commuting(std::span<const ComplexMatrix> s, double tol = kClassifyTol) {
  tuple_extent(s);
  return is_commuting_family(s, tol);
}

inline bool check_normal(std::span<const ComplexMatrix> s, double tol = kClassifyTol) {
  return std::all_of(s.begin(), s.end(), [&](const ComplexMatrix& m) { return is_normal_matrix(m, tol); });
}

struct SpectralResult {
  bool pass = false;
  Spectrum spectrum;
  double max_defect = 0.0;  // largest Shilov defect over joint eigenvalues
};

inline SpectralResult classify_spectral(std::span<const ComplexMatrix> s, const DomainDescriptor& d,
                                        double tol = kClassifyTol) {
  tuple_extent(s);
  if (s.size() != d.dimension())
    throw Error(ErrorKind::ArityMismatch, "tuple length " + std::to_string(s.size()) + " but " + d.to_string() +
                                              " has dimension " + std::to_string(d.dimension()));
  auto jd = joint_diagonalize(s, tol);
  SpectralResult r;
  for (const auto& pt : jd.column_points) r.max_defect = std::max(r.max_defect, shilov_defect(d, pt));
  r.pass = r.max_defect <= tol;
  r.spectrum = std::move(jd.spectrum);
  return r;
}

enum class IdentityRoute { PerFactor, WholeTuple };

struct IdentityResidual {
  std::string label;
  double residual;
};

struct VerificationReport {
  DomainDescriptor descriptor;
  bool commuting = false;
  bool normal = false;
  std::optional<bool> spectral_pass{};
  std::optional<double> spectral_defect{};
  std::vector<IdentityResidual> identity_residuals{};
  bool identity_pass = false;
  double max_identity_residual = 0.0;
  std::optional<bool> agreement{};
  bool marginal = false;  // a disagreement with a deciding quantity within 10x of tol
};

namespace detail {

inline void append_residuals(TupleEvaluator& ev, const IdentitySet& set, const std::string& prefix,
                             std::vector<IdentityResidual>& out) {
  const std::size_t k = ev.size();
  for (const auto& c : set.constraints) {
    auto v = ev.evaluate(c.poly);
    if (c.target != Complex{})
      for (std::size_t i = 0; i < k; ++i) v(i, i) -= c.target;
    out.push_back({prefix + c.label, operator_norm(v) / std::max(1.0, std::abs(c.target))});
  }
}

inline bool near_tolerance(double x, double tol) { return x > tol / 10 && x <= 10 * tol; }

}  // namespace detail

/// Residual per constraint is ||p(S, S*) - target I|| / max(1, |target|). Products
/// are checked factor by factor on the corresponding coordinate block unless
/// the whole-tuple route is requested.
inline VerificationReport classify_identities(std::span<const ComplexMatrix> s, const DomainDescriptor& d,
                                              double tol = kClassifyTol,
                                              IdentityRoute route = IdentityRoute::PerFactor) {
  tuple_extent(s);
  if (s.size() != d.dimension())
    throw Error(ErrorKind::ArityMismatch, "tuple length " + std::to_string(s.size()) + " but " + d.to_string() +
                                              " has dimension " + std::to_string(d.dimension()));
  if (!check_commuting(s, tol)) throw Error(ErrorKind::NotCommuting, "tuple does not commute");
  VerificationReport r{.descriptor = d};
  r.commuting = true;
  r.normal = check_normal(s, tol);
  if (route == IdentityRoute::WholeTuple && d.factor_count() > 1) {
    TupleEvaluator ev(s, tol);
    detail::append_residuals(ev, identity_set(d), "", r.identity_residuals);
  } else {
    for (std::size_t k = 0; k < d.factor_count(); ++k) {
      const auto& f = d.factors()[k];
      TupleEvaluator ev(s.subspan(d.offset(k), f.dimension()), tol);
      const std::string prefix = d.factor_count() > 1 ? "[" + std::to_string(k) + "] " : "";
      detail::append_residuals(ev, factor_identity_set(f), prefix, r.identity_residuals);
    }
  }
  for (const auto& x : r.identity_residuals) r.max_identity_residual = std::max(r.max_identity_residual, x.residual);
  r.identity_pass = r.max_identity_residual <= tol;
  return r;
}

/// Identity route always; spectral route when the tuple is normal. Records
/// agreement and whether a disagreement sits within a decade of tol.
inline VerificationReport classify(std::span<const ComplexMatrix> s, const DomainDescriptor& d,
                                   double tol = kClassifyTol) {
  auto r = classify_identities(s, d, tol);
  if (r.normal) {
    const auto sp = classify_spectral(s, d, tol);
    r.spectral_pass = sp.pass;
    r.spectral_defect = sp.max_defect;
    r.agreement = sp.pass == r.identity_pass;
    if (!*r.agreement)
      r.marginal = detail::near_tolerance(r.max_identity_residual, tol) || detail::near_tolerance(sp.max_defect, tol);
  }
  return r;
}

// ---------------------------------------------------------------------------
// Compressions and reducing spans.

/// Largest ||(I - B B*) N_i B|| / max(1, ||N_i||) over coordinates.
inline double invariance_defect(std::span<const ComplexMatrix> n, const ComplexMatrix& basis) {
  double worst = 0;
  for (const auto& m : n) {
    const auto nb = m * basis;
    auto r = nb - basis * (basis.adjoint() * nb);
    worst = std::max(worst, operator_norm(r) / std::max(1.0, operator_norm(m)));
  }
  return worst;
}

/// Matrices of N_i restricted to the invariant subspace spanned by the
/// orthonormal columns of `basis`.
inline Tuple compress(std::span<const ComplexMatrix> n, const ComplexMatrix& basis, double tol = kDefaultTol) {
  const std::size_t k = tuple_extent(n);
  if (basis.rows() != k) throw Error(ErrorKind::SizeMismatch, "basis rows differ from tuple extent");
  auto gram = basis.adjoint() * basis;
  gram -= ComplexMatrix::identity(basis.cols());
  if (gram.max_abs() > 1e-8)
    throw Error(ErrorKind::InvalidArgument, "basis columns are not orthonormal");
  if (const double def = invariance_defect(n, basis); def > tol)
    throw Error(ErrorKind::NotInvariant, "subspace is not invariant (defect " + std::to_string(def) + ")");
  Tuple out;
  out.reserve(n.size());
  for (const auto& m : n) out.push_back(basis.adjoint() * m * basis);
  return out;
}

struct ReducingSpan {
  ComplexMatrix basis;
  Tuple restricted;
};

/// Smallest subspace containing H that is invariant under every N_i and N_i*.
inline ReducingSpan reducing_span(std::span<const ComplexMatrix> n, const ComplexMatrix& h,
                                  double tol = kDefaultTol) {
  tuple_extent(n);
  std::vector<ComplexMatrix> appliers;
  for (const auto& m : n) {
    appliers.push_back(m);
    appliers.push_back(m.adjoint());
  }
  ReducingSpan r;
  r.basis = orthonormal_closure(h, appliers, tol);
  for (const auto& m : n) r.restricted.push_back(r.basis.adjoint() * m * r.basis);
  return r;
}

/// Smallest N-invariant subspace containing the columns of `start`.
inline ComplexMatrix cyclic_subspace(std::span<const ComplexMatrix> n, const ComplexMatrix& start,
                                     double tol = kDefaultTol) {
  tuple_extent(n);
  return orthonormal_closure(start, n, tol);
}

/// Orthonormal basis of span{N^alpha x : |alpha| <= degree} for the columns x
/// of `start`, grown level by level from the directions added at the previous level.
inline ComplexMatrix orbit_span(std::span<const ComplexMatrix> n, const ComplexMatrix& start, int degree,
                                double tol = kDefaultTol) {
  const std::size_t k = tuple_extent(n);
  if (start.rows() != k) throw Error(ErrorKind::SizeMismatch, "generator length differs from tuple extent");
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
  std::size_t level_begin = 0;
  for (int d = 0; d < degree && level_begin < basis.size(); ++d) {
    const std::size_t level_end = basis.size();
    for (std::size_t i = level_begin; i < level_end; ++i)
      for (const auto& m : n) try_add(m * basis[i]);
    level_begin = level_end;
  }
  return ComplexMatrix::hcat(basis, k);
}

// ---------------------------------------------------------------------------
// Randomized equivalence sweep.

struct EquivalenceCaps {
  int max_pq = 3;
  int max_lie_n = 5;
  int max_type_iii = 5;
  std::size_t max_factors = 3;
};

/// Throws CapExceeded when the descriptor is beyond the sweep's supported sizes.
inline void check_equivalence_caps(const DomainDescriptor& d, const EquivalenceCaps& caps = {}) {
  if (d.factor_count() > caps.max_factors) throw Error(ErrorKind::CapExceeded, "more than 3 factors");
  for (const auto& f : d.factors()) {
    const bool ok = (f.type == FactorType::I && f.q <= caps.max_pq) || (f.type == FactorType::II && f.p <= caps.max_pq) ||
                    (f.type == FactorType::III && f.p <= caps.max_type_iii) ||
                    (f.type == FactorType::IV && f.p <= caps.max_lie_n);
    if (!ok) throw Error(ErrorKind::CapExceeded, f.to_string() + " is beyond the sweep caps");
  }
}

struct EquivalenceOptions {
  std::size_t max_atoms = 8;
  double min_scale = 0.5;
  double max_scale = 0.99;
};

struct TrialRecord {
  std::size_t index = 0;
  std::uint64_t seed = 0;
  std::size_t atoms = 0;
  bool truth = false;  // every atom on the Shilov boundary
  bool spectral = false;
  bool identity = false;
  bool whole_identity = false;
  double spectral_defect = 0.0;
  double max_residual = 0.0;
  bool marginal = false;
};

struct EquivalenceReport {
  DomainDescriptor descriptor;
  std::uint64_t seed = 0;
  double tol = 0.0;
  std::vector<TrialRecord> trials{};
  std::size_t disagreements = 0;           // spectral vs identity, non-marginal
  std::size_t marginal_disagreements = 0;  // spectral vs identity within a decade of tol
  std::size_t truth_mismatches = 0;        // spectral vs construction label
  std::size_t route_mismatches = 0;        // per-factor vs whole-tuple identity pass
};

/// Random normal tuple for one trial: diagonal over Shilov points and scaled
/// points, conjugated by a Haar unitary. Half the trials use Shilov atoms only;
/// the rest draw each atom Shilov or scaled with equal odds and force at least
/// one scaled atom.
struct TrialTuple {
  Tuple tuple;
  bool truth = false;
};

inline TrialTuple random_trial_tuple(const DomainDescriptor& d, Rng& rng, const EquivalenceOptions& opt = {}) {
  const std::size_t k = uniform_index(rng, 1, opt.max_atoms);
  const bool all_shilov = uniform(rng, 0.0, 1.0) < 0.5;
  std::vector<FlatPoint> atoms;
  std::vector<bool> scaled(k, false);
  if (!all_shilov) {
    bool any = false;
    for (std::size_t j = 0; j < k; ++j) any |= (scaled[j] = uniform(rng, 0.0, 1.0) < 0.5);
    if (!any) scaled[uniform_index(rng, 0, k - 1)] = true;
  }
  for (std::size_t j = 0; j < k; ++j) {
    auto z = sample_shilov_point(d, rng);
    if (scaled[j]) z = perturb_off_shilov(d, z, uniform(rng, opt.min_scale, opt.max_scale));
    atoms.push_back(std::move(z));
  }
  const auto u = haar_unitary(k, rng);
  TrialTuple t;
  t.truth = all_shilov;
  for (std::size_t i = 0; i < d.dimension(); ++i) {
    ComplexMatrix diagm(k, k);
    for (std::size_t j = 0; j < k; ++j) diagm(j, j) = atoms[j][i];
    t.tuple.push_back(u * diagm * u.adjoint());
  }
  return t;
}

inline EquivalenceReport verify_equivalence(const DomainDescriptor& d, std::size_t trials, std::uint64_t seed,
                                            double tol = kClassifyTol, const EquivalenceOptions& opt = {}) {
  check_equivalence_caps(d);
  EquivalenceReport rep{.descriptor = d, .seed = seed, .tol = tol};
  for (std::size_t i = 0; i < trials; ++i) {
    TrialRecord rec;
    rec.index = i;
    rec.seed = derive_seed(seed, i);
    Rng rng(rec.seed);
    const auto t = random_trial_tuple(d, rng, opt);
    rec.atoms = t.tuple.front().rows();
    rec.truth = t.truth;
    const auto r = classify(t.tuple, d, tol);
    rec.spectral = r.spectral_pass.value_or(false);
    rec.identity = r.identity_pass;
    rec.spectral_defect = r.spectral_defect.value_or(0.0);
    rec.max_residual = r.max_identity_residual;
    rec.marginal = r.marginal;
    rec.whole_identity = d.factor_count() > 1
                             ? classify_identities(t.tuple, d, tol, IdentityRoute::WholeTuple).identity_pass
                             : rec.identity;
    if (rec.spectral != rec.identity) ++(rec.marginal ? rep.marginal_disagreements : rep.disagreements);
    if (rec.spectral != rec.truth) ++rep.truth_mismatches;
    if (rec.whole_identity != rec.identity) ++rep.route_mismatches;
    rep.trials.push_back(rec);
  }
  return rep;
}

}  // namespace cartan
