#pragma once

// Hereditary polynomials p(z, w) = sum a_{alpha,beta} z^alpha w^beta and their
// "stars on the left" evaluation p(S, S*) = sum a_{alpha,beta} S*^beta S^alpha
// on commuting tuples, plus the boundary identity sets of the Cartan domains.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <numeric>
#include <span>
#include <map>
#include <mutex>
#include <sstream>
#include <string>
#include <vector>

#include "cartan/domains.hpp"
#include "cartan/error.hpp"
#include "cartan/linalg.hpp"
#include "cartan/matrix.hpp"

namespace cartan {

using MultiIndex = std::vector<int>;

inline constexpr int kMaxTotalDegree = 64;

class HereditaryPolynomial {
 public:
  /// Exponents of z (alpha) followed by exponents of w (beta); length 2 * nvars.
  using Key = std::vector<int>;

  HereditaryPolynomial() = default;
  explicit HereditaryPolynomial(std::size_t nvars) : nvars_(nvars) {}

  static HereditaryPolynomial constant(std::size_t nvars, Complex c) {
    HereditaryPolynomial p(nvars);
    p.add_term(Key(2 * nvars, 0), c);
    return p;
  }
  static HereditaryPolynomial z(std::size_t nvars, std::size_t i) {
    HereditaryPolynomial p(nvars);
    Key k(2 * nvars, 0);
    k.at(i) = 1;
    p.add_term(std::move(k), 1.0);
    return p;
  }
  static HereditaryPolynomial w(std::size_t nvars, std::size_t i) {
    HereditaryPolynomial p(nvars);
    Key k(2 * nvars, 0);
    k.at(nvars + i) = 1;
    p.add_term(std::move(k), 1.0);
    return p;
  }
  static HereditaryPolynomial monomial(const MultiIndex& alpha, const MultiIndex& beta, Complex c) {
    if (alpha.size() != beta.size()) throw Error(ErrorKind::ArityMismatch, "alpha/beta lengths differ");
    HereditaryPolynomial p(alpha.size());
    Key k(alpha);
    k.insert(k.end(), beta.begin(), beta.end());
    p.add_term(std::move(k), c);
    return p;
  }

  std::size_t nvars() const noexcept { return nvars_; }
  const std::map<Key, Complex>& terms() const noexcept { return terms_; }
  bool is_zero() const noexcept { return terms_.empty(); }

  void add_term(Key key, Complex c) {
    if (key.size() != 2 * nvars_) throw Error(ErrorKind::ArityMismatch, "monomial length");
    if (c == Complex{}) return;
    auto [it, inserted] = terms_.try_emplace(std::move(key), c);
    if (!inserted) {
      it->second += c;
      if (it->second == Complex{}) terms_.erase(it);
    }
  }

  int total_degree() const {
    int d = 0;
    for (const auto& [k, c] : terms_) {
      int s = 0;
      for (int e : k) s += e;
      d = std::max(d, s);
    }
    return d;
  }

  HereditaryPolynomial& operator+=(const HereditaryPolynomial& o) {
    check_arity_(o);
    for (const auto& [k, c] : o.terms_) add_term(k, c);
    return *this;
  }
  HereditaryPolynomial& operator-=(const HereditaryPolynomial& o) {
    check_arity_(o);
    for (const auto& [k, c] : o.terms_) add_term(k, -c);
    return *this;
  }
  HereditaryPolynomial& operator*=(Complex s) {
    if (s == Complex{}) {
      terms_.clear();
      return *this;
    }
    for (auto& [k, c] : terms_) c *= s;
    return *this;
  }
  friend HereditaryPolynomial operator+(HereditaryPolynomial a, const HereditaryPolynomial& b) {
    return a += b;
  }
  friend HereditaryPolynomial operator-(HereditaryPolynomial a, const HereditaryPolynomial& b) {
    return a -= b;
  }
  friend HereditaryPolynomial operator*(HereditaryPolynomial a, Complex s) { return a *= s; }
  friend HereditaryPolynomial operator*(Complex s, HereditaryPolynomial a) { return a *= s; }
  friend HereditaryPolynomial operator*(const HereditaryPolynomial& a, const HereditaryPolynomial& b) {
    a.check_arity_(b);
    HereditaryPolynomial r(a.nvars_);
    Key k(2 * a.nvars_);
    for (const auto& [ka, ca] : a.terms_)
      for (const auto& [kb, cb] : b.terms_) {
        for (std::size_t i = 0; i < k.size(); ++i) k[i] = ka[i] + kb[i];
        r.add_term(k, ca * cb);
      }
    return r;
  }
  friend bool operator==(const HereditaryPolynomial&, const HereditaryPolynomial&) = default;

  /// Same polynomial with variable i renamed to offset + i inside `total` variables.
  HereditaryPolynomial embedded(std::size_t offset, std::size_t total) const {
    if (offset + nvars_ > total) throw Error(ErrorKind::ArityMismatch, "embedding out of range");
    HereditaryPolynomial r(total);
    for (const auto& [k, c] : terms_) {
      Key e(2 * total, 0);
      for (std::size_t i = 0; i < nvars_; ++i) {
        e[offset + i] = k[i];
        e[total + offset + i] = k[nvars_ + i];
      }
      r.add_term(std::move(e), c);
    }
    return r;
  }

  /// Human-readable form using the given variable names (default z1.., w1..).
  std::string to_string(const std::vector<std::string>& names = {}) const;

 private:
  void check_arity_(const HereditaryPolynomial& o) const {
    if (o.nvars_ != nvars_) throw Error(ErrorKind::ArityMismatch, "polynomials over different arities");
  }

  std::size_t nvars_ = 0;
  std::map<Key, Complex> terms_;
};

namespace detail {

inline std::string format_coefficient(Complex c) {
  std::ostringstream os;
  os.precision(12);
  if (c.imag() == 0.0)
    os << c.real();
  else if (c.real() == 0.0)
    os << c.imag() << "i";
  else
    os << "(" << c.real() << (c.imag() < 0 ? "-" : "+") << std::abs(c.imag()) << "i)";
  return os.str();
}

}  // namespace detail

inline std::string HereditaryPolynomial::to_string(const std::vector<std::string>& names) const {
  if (terms_.empty()) return "0";
  auto name = [&](std::size_t i) {
    return i < names.size() ? names[i] : "(" + std::to_string(i + 1) + ")";
  };
  std::string out;
  bool first = true;
  for (const auto& [k, c] : terms_) {
    Complex coeff = c;
    const bool real_negative = c.imag() == 0.0 && c.real() < 0;
    if (!first) out += real_negative ? " - " : " + ";
    else if (real_negative) out += "-";
    if (real_negative) coeff = -c;
    first = false;

    std::string mono;
    for (std::size_t i = 0; i < nvars_; ++i)
      if (k[i]) mono += "z" + name(i) + (k[i] > 1 ? "^" + std::to_string(k[i]) : "");
    for (std::size_t i = 0; i < nvars_; ++i)
      if (k[nvars_ + i]) mono += "w" + name(i) + (k[nvars_ + i] > 1 ? "^" + std::to_string(k[nvars_ + i]) : "");
    if (mono.empty())
      out += detail::format_coefficient(coeff);
    else if (coeff == Complex(1.0))
      out += mono;
    else
      out += detail::format_coefficient(coeff) + "*" + mono;
  }
  return out;
}

// ---------------------------------------------------------------------------
// Evaluation.

/// Evaluates hereditary polynomials on one commuting tuple, memoizing S^alpha
/// per multi-index. Adjoints are always applied on the left: the term
/// z^alpha w^beta becomes (S^beta)* S^alpha.
class TupleEvaluator {
 public:
  TupleEvaluator(std::span<const ComplexMatrix> tuple, double tol = kDefaultTol)
      : tuple_(tuple.begin(), tuple.end()) {
    if (tuple_.empty()) throw Error(ErrorKind::ArityMismatch, "empty tuple");
    size_ = tuple_.front().rows();
    for (const auto& m : tuple_)
      if (m.rows() != size_ || m.cols() != size_) throw Error(ErrorKind::SizeMismatch, "tuple extents differ");
    if (!is_commuting_family(tuple_, tol)) throw Error(ErrorKind::NotCommuting, "tuple does not commute");
  }

  std::size_t arity() const noexcept { return tuple_.size(); }
  std::size_t size() const noexcept { return size_; }

  const ComplexMatrix& power(const MultiIndex& alpha) {
    if (auto it = cache_.find(alpha); it != cache_.end()) return it->second;
    std::size_t last = alpha.size();
    for (std::size_t i = alpha.size(); i-- > 0;)
      if (alpha[i] > 0) {
        last = i;
        break;
      }
    ComplexMatrix value;
    if (last == alpha.size()) {
      value = ComplexMatrix::identity(size_);
    } else {
      MultiIndex lower = alpha;
      --lower[last];
      value = tuple_[last] * power(lower);
    }
    return cache_.emplace(alpha, std::move(value)).first->second;
  }

  ComplexMatrix evaluate(const HereditaryPolynomial& p) {
    if (p.nvars() != tuple_.size())
      throw Error(ErrorKind::ArityMismatch, "polynomial has " + std::to_string(p.nvars()) +
                                                " variables, tuple has " + std::to_string(tuple_.size()));
    if (p.total_degree() > kMaxTotalDegree) throw Error(ErrorKind::CapExceeded, "total degree above 64");
    const std::size_t n = p.nvars();
    // Group by beta: sum_beta (S^beta)* (sum_alpha a S^alpha).
    std::map<MultiIndex, ComplexMatrix> by_beta;
    MultiIndex alpha(n), beta(n);
    for (const auto& [k, c] : p.terms()) {
      std::copy(k.begin(), k.begin() + static_cast<std::ptrdiff_t>(n), alpha.begin());
      std::copy(k.begin() + static_cast<std::ptrdiff_t>(n), k.end(), beta.begin());
      auto [it, inserted] = by_beta.try_emplace(beta, size_, size_);
      it->second.axpy(c, power(alpha));
    }
    ComplexMatrix out(size_, size_);
    for (const auto& [b, acc] : by_beta) {
      if (std::all_of(b.begin(), b.end(), [](int e) { return e == 0; }))
        out += acc;
      else
        out += power(b).adjoint() * acc;
    }
    return out;
  }

 private:
  std::vector<ComplexMatrix> tuple_;
  std::size_t size_ = 0;
  std::map<MultiIndex, ComplexMatrix> cache_;
};

inline ComplexMatrix evaluate(const HereditaryPolynomial& p, std::span<const ComplexMatrix> tuple,
                              double tol = kDefaultTol) {
  TupleEvaluator ev(tuple, tol);
  return ev.evaluate(p);
}

/// p(z, conj(z)).
inline Complex scalar_eval(const HereditaryPolynomial& p, std::span<const Complex> z) {
  const std::size_t n = p.nvars();
  if (z.size() != n) throw Error(ErrorKind::ArityMismatch, "point length differs from arity");
  int maxdeg = 0;
  for (const auto& [k, c] : p.terms())
    for (int e : k) maxdeg = std::max(maxdeg, e);
  std::vector<std::vector<Complex>> zp(n), wp(n);
  for (std::size_t i = 0; i < n; ++i) {
    zp[i].resize(static_cast<std::size_t>(maxdeg) + 1);
    wp[i].resize(static_cast<std::size_t>(maxdeg) + 1);
    zp[i][0] = wp[i][0] = 1.0;
    for (int e = 1; e <= maxdeg; ++e) {
      zp[i][e] = zp[i][e - 1] * z[i];
      wp[i][e] = wp[i][e - 1] * std::conj(z[i]);
    }
  }
  Complex s{};
  for (const auto& [k, c] : p.terms()) {
    Complex t = c;
    for (std::size_t i = 0; i < n; ++i) {
      if (k[i]) t *= zp[i][static_cast<std::size_t>(k[i])];
      if (k[n + i]) t *= wp[i][static_cast<std::size_t>(k[n + i])];
    }
    s += t;
  }
  return s;
}

// ---------------------------------------------------------------------------
// Characteristic polynomial coefficients for odd antisymmetric matrices.

namespace detail {

using ExpMap = std::map<std::vector<int>, double>;

// Symbolic antisymmetric n x n matrix: entry (i, j) is sign * z_var, zero on the diagonal.
struct AntisymEntry {
  int sign;
  std::size_t var;
};

inline AntisymEntry antisym_entry(std::size_t n, std::size_t i, std::size_t j) {
  if (i < j) return {1, antisymmetric_index(n, i, j)};
  return {-1, antisymmetric_index(n, j, i)};
}

// det of Z[rows, cols] by Leibniz expansion; every entry is a signed variable so
// each permutation contributes a single monomial.
inline ExpMap antisym_minor(std::size_t n, const std::vector<std::size_t>& rows,
                           const std::vector<std::size_t>& cols) {
  const std::size_t k = rows.size();
  const std::size_t nv = n * (n - 1) / 2;
  ExpMap out;
  std::vector<int> exps(nv, 0);
  std::vector<bool> used(k, false);
  // parity counts inversions of the chosen column positions
  auto dfs = [&](auto&& self, std::size_t r, int sign, int inversions) -> void {
    if (r == k) {
      const double c = (inversions % 2 ? -1.0 : 1.0) * sign;
      auto [it, ins] = out.try_emplace(exps, c);
      if (!ins) {
        it->second += c;
        if (it->second == 0.0) out.erase(it);
      }
      return;
    }
    int greater_used = 0;
    for (std::size_t c = k; c-- > 0;) {
      if (used[c]) {
        ++greater_used;
        continue;
      }
      if (rows[r] == cols[c]) continue;
      const auto e = antisym_entry(n, rows[r], cols[c]);
      used[c] = true;
      ++exps[e.var];
      self(self, r + 1, sign * e.sign, inversions + greater_used);
      --exps[e.var];
      used[c] = false;
    }
  };
  dfs(dfs, 0, 1, 0);
  return out;
}

inline void for_each_subset(std::size_t n, std::size_t k,
                            const std::function<void(const std::vector<std::size_t>&)>& fn) {
  std::vector<std::size_t> idx(k);
  std::iota(idx.begin(), idx.end(), 0);
  if (k > n) return;
  while (true) {
    fn(idx);
    std::size_t i = k;
    while (i > 0 && idx[i - 1] == n - k + i - 1) --i;
    if (i == 0) return;
    ++idx[i - 1];
    for (std::size_t j = i; j < k; ++j) idx[j] = idx[j - 1] + 1;
  }
}

}  // namespace detail

inline constexpr int kCharpolyMaxP = 3;

/// Coefficients q_0..q_{2p+1} of det(lambda I - W^t Z) for antisymmetric
/// (2p+1) x (2p+1) matrices Z = (z_ij), W = (w_ij) in the strict-upper-triangle
/// variables. q_m = (-1)^(n-m) E_(n-m)(W^t Z) where E_k sums the k x k principal
/// minors; each principal minor is expanded by Cauchy-Binet as
/// sum_J det W[J, I] det Z[J, I] with the minors of Z and W expanded by Leibniz.
inline std::vector<HereditaryPolynomial> charpoly_coeffs(int p) {
  if (p < 1) throw Error(ErrorKind::InvalidArgument, "charpoly_coeffs needs p >= 1");
  if (p > kCharpolyMaxP) throw Error(ErrorKind::CapExceeded, "charpoly_coeffs supports p <= 3");

  static std::mutex mutex;
  static std::map<int, std::vector<HereditaryPolynomial>> cache;
  std::lock_guard lock(mutex);
  if (auto it = cache.find(p); it != cache.end()) return it->second;

  const std::size_t n = static_cast<std::size_t>(2 * p + 1);
  const std::size_t nv = n * (n - 1) / 2;
  std::vector<HereditaryPolynomial> elem(n + 1, HereditaryPolynomial(nv));
  elem[0] = HereditaryPolynomial::constant(nv, 1.0);

  for (std::size_t k = 1; k <= n; ++k) {
    std::map<std::vector<int>, double> acc;
    detail::for_each_subset(n, k, [&](const std::vector<std::size_t>& cols) {
      detail::for_each_subset(n, k, [&](const std::vector<std::size_t>& rows) {
        const auto minor = detail::antisym_minor(n, rows, cols);
        std::vector<int> key(2 * nv);
        for (const auto& [za, ca] : minor)
          for (const auto& [wb, cb] : minor) {
            std::copy(za.begin(), za.end(), key.begin());
            std::copy(wb.begin(), wb.end(), key.begin() + static_cast<std::ptrdiff_t>(nv));
            acc[key] += ca * cb;
          }
      });
    });
    HereditaryPolynomial e(nv);
    for (auto& [key, c] : acc) e.add_term(key, c);
    elem[k] = std::move(e);
  }

  std::vector<HereditaryPolynomial> q(n + 1, HereditaryPolynomial(nv));
  for (std::size_t m = 0; m <= n; ++m) {
    const std::size_t k = n - m;
    q[m] = elem[k] * Complex(k % 2 ? -1.0 : 1.0);
  }
  cache.emplace(p, q);
  return q;
}

inline double binomial(int n, int k) {
  if (k < 0 || k > n) return 0.0;
  double r = 1;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return std::round(r);
}

// ---------------------------------------------------------------------------
// Identity sets.

struct Constraint {
  std::string label;
  HereditaryPolynomial poly;
  Complex target;
};

struct IdentitySet {
  std::size_t nvars = 0;
  std::vector<Constraint> constraints;
};

/// Display names of the flat coordinates of one factor, e.g. "(1,2)" or "(3)".
inline std::vector<std::string> variable_names(const Factor& f) {
  std::vector<std::string> names;
  const int p = f.p;
  auto pair = [](int i, int j) { return "(" + std::to_string(i) + "," + std::to_string(j) + ")"; };
  switch (f.type) {
    case FactorType::I:
      for (int i = 1; i <= p; ++i)
        for (int j = 1; j <= f.q; ++j) names.push_back(pair(i, j));
      break;
    case FactorType::II:
      for (int i = 1; i <= p; ++i)
        for (int j = i; j <= p; ++j) names.push_back(pair(i, j));
      break;
    case FactorType::III:
      for (int i = 1; i <= p; ++i)
        for (int j = i + 1; j <= p; ++j) names.push_back(pair(i, j));
      break;
    case FactorType::IV:
      for (int i = 1; i <= p; ++i) names.push_back("(" + std::to_string(i) + ")");
      break;
  }
  return names;
}

namespace detail {

// Signed variable for matrix entry (i, j) of a matrix-shaped factor; sign 0 means
// the entry is identically zero.
struct EntryVar {
  int sign;
  std::size_t var;
};

inline EntryVar entry_var(const Factor& f, std::size_t i, std::size_t j) {
  const auto p = static_cast<std::size_t>(f.p);
  switch (f.type) {
    case FactorType::I: return {1, i * static_cast<std::size_t>(f.q) + j};
    case FactorType::II: return {1, symmetric_index(p, i, j)};
    case FactorType::III:
      if (i == j) return {0, 0};
      return i < j ? EntryVar{1, antisymmetric_index(p, i, j)} : EntryVar{-1, antisymmetric_index(p, j, i)};
    case FactorType::IV: break;
  }
  throw Error(ErrorKind::NotMatrixShaped, "type IV has no matrix entries");
}

// delta_ij - sum_k z_{i,k} w_{j,k}, i.e. the (i, j) entry of I - Z Z* written
// hereditarily; evaluates to delta_ij I - sum_k S_{j,k}* S_{i,k}.
inline HereditaryPolynomial row_gram_constraint(const Factor& f, std::size_t i, std::size_t j) {
  const std::size_t nv = f.dimension();
  HereditaryPolynomial poly = HereditaryPolynomial::constant(nv, i == j ? 1.0 : 0.0);
  for (std::size_t k = 0; k < f.matrix_cols(); ++k) {
    const auto a = entry_var(f, i, k);
    const auto b = entry_var(f, j, k);
    if (a.sign == 0 || b.sign == 0) continue;
    poly -= HereditaryPolynomial::z(nv, a.var) * HereditaryPolynomial::w(nv, b.var) *
            Complex(static_cast<double>(a.sign * b.sign));
  }
  return poly;
}

}  // namespace detail

/// Boundary identities of one factor in its local variables. Every constraint
/// reads poly(S, S*) = target * I.
inline IdentitySet factor_identity_set(const Factor& f) {
  IdentitySet set{f.dimension(), {}};
  const std::size_t nv = f.dimension();
  const std::string tag = f.to_string();
  if (f.type == FactorType::IV) {
    HereditaryPolynomial sph = HereditaryPolynomial::constant(nv, 1.0);
    for (std::size_t i = 0; i < nv; ++i) sph -= HereditaryPolynomial::z(nv, i) * HereditaryPolynomial::w(nv, i);
    set.constraints.push_back({tag + " spherical: 1 - sum_i S_i* S_i = 0", sph, 0.0});
    for (std::size_t i = 0; i < nv; ++i)
      for (std::size_t j = i + 1; j < nv; ++j) {
        auto poly = HereditaryPolynomial::z(nv, j) * HereditaryPolynomial::w(nv, i) -
                    HereditaryPolynomial::z(nv, i) * HereditaryPolynomial::w(nv, j);
        set.constraints.push_back({tag + " self-adjoint: S_" + std::to_string(i + 1) + "* S_" +
                                       std::to_string(j + 1) + " - S_" + std::to_string(j + 1) + "* S_" +
                                       std::to_string(i + 1) + " = 0",
                                   std::move(poly), 0.0});
      }
    return set;
  }
  if (f.type == FactorType::III && f.p % 2 == 1) {
    const int half = (f.p - 1) / 2;
    const auto q = charpoly_coeffs(half);
    for (std::size_t m = 0; m < q.size(); ++m) {
      const double target = m == 0 ? 0.0
                                   : ((m - 1) % 2 ? -1.0 : 1.0) * binomial(2 * half, static_cast<int>(m) - 1);
      set.constraints.push_back({tag + " characteristic coefficient q_" + std::to_string(m), q[m], target});
    }
    return set;
  }
  const std::size_t p = f.matrix_rows();
  for (std::size_t i = 0; i < p; ++i)
    for (std::size_t j = i; j < p; ++j)
      set.constraints.push_back({tag + " rows (" + std::to_string(i + 1) + "," + std::to_string(j + 1) +
                                     "): delta - sum_k S_{" + std::to_string(j + 1) + ",k}* S_{" +
                                     std::to_string(i + 1) + ",k} = 0",
                                 detail::row_gram_constraint(f, i, j), 0.0});
  return set;
}

/// Union of factor identity sets on disjoint variable blocks.
inline IdentitySet identity_set(const DomainDescriptor& d) {
  IdentitySet set{d.dimension(), {}};
  for (std::size_t k = 0; k < d.factor_count(); ++k) {
    auto local = factor_identity_set(d.factors()[k]);
    for (auto& c : local.constraints)
      set.constraints.push_back(
          {"[" + std::to_string(k) + "] " + c.label, c.poly.embedded(d.offset(k), d.dimension()), c.target});
  }
  return set;
}

/// Max over constraints of |p(z, conj z) - target| / max(1, |target|).
inline double scalar_identity_residual(const IdentitySet& set, std::span<const Complex> z) {
  double r = 0;
  for (const auto& c : set.constraints)
    r = std::max(r, std::abs(scalar_eval(c.poly, z) - c.target) / std::max(1.0, std::abs(c.target)));
  return r;
}

// ---------------------------------------------------------------------------
// Positivity certificates for subnormality of commuting contractions.

struct CertificateEntry {
  MultiIndex degrees;
  bool psd = false;
  double min_eigenvalue = 0.0;
};

struct PositivityReport {
  std::vector<CertificateEntry> entries;
  bool pass = true;
};

/// Evaluates prod_i (1 - z_i w_i)^{k_i}(S, S*) for every 0 <= k_i <= max_degree
/// and records whether it is positive semidefinite.
inline PositivityReport positivity_certificate(std::span<const ComplexMatrix> tuple, int max_degree,
                                               double tol = kDefaultTol) {
  if (max_degree < 0) throw Error(ErrorKind::InvalidArgument, "degree cap must be nonnegative");
  TupleEvaluator ev(tuple, tol);
  const std::size_t n = tuple.size();
  for (std::size_t i = 0; i < n; ++i)
    if (operator_norm(tuple[i]) > 1.0 + tol)
      throw Error(ErrorKind::NotContraction, "coordinate " + std::to_string(i + 1) + " has norm above 1");
  if (static_cast<int>(n) * max_degree * 2 > kMaxTotalDegree)
    throw Error(ErrorKind::CapExceeded, "certificate degree exceeds the total-degree cap");

  // powers[i][k] = (1 - z_i w_i)^k
  std::vector<std::vector<HereditaryPolynomial>> powers(n);
  for (std::size_t i = 0; i < n; ++i) {
    const auto base = HereditaryPolynomial::constant(n, 1.0) - HereditaryPolynomial::z(n, i) * HereditaryPolynomial::w(n, i);
    powers[i].push_back(HereditaryPolynomial::constant(n, 1.0));
    for (int k = 1; k <= max_degree; ++k) powers[i].push_back(powers[i].back() * base);
  }

  PositivityReport report;
  MultiIndex deg(n, 0);
  while (true) {
    HereditaryPolynomial poly = HereditaryPolynomial::constant(n, 1.0);
    for (std::size_t i = 0; i < n; ++i)
      if (deg[i]) poly = poly * powers[i][static_cast<std::size_t>(deg[i])];
    const auto value = hermitian_part(ev.evaluate(poly));
    const auto eig = hermitian_eig(value, 1.0);
    const double norm = std::max(std::abs(eig.values.front()), std::abs(eig.values.back()));
    CertificateEntry e{deg, eig.values.front() >= -tol * std::max(1.0, norm), eig.values.front()};
    report.pass = report.pass && e.psd;
    report.entries.push_back(std::move(e));

    std::size_t i = 0;
    while (i < n && deg[i] == max_degree) deg[i++] = 0;
    if (i == n) break;
    ++deg[i];
  }
  return report;
}

}  // namespace cartan
