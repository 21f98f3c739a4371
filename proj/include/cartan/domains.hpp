#pragma once

// Classical Cartan domains I(p,q), II(p), III(p), IV(n) and finite products.
//
// Flat coordinates follow one fixed convention shared by every module:
//   I(p,q)  row-major (z11..z1q; z21..z2q; ...; zp1..zpq)
//   II(p)   upper triangle with diagonal (z11..z1p; z22..z2p; ...; zpp)
//   III(p)  strict upper triangle (z12..z1p; z23..z2p; ...; z(p-1)p)
//   IV(n)   plain coordinates
// and factors of a product are concatenated in order.

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "cartan/error.hpp"
#include "cartan/linalg.hpp"
#include "cartan/matrix.hpp"
#include "cartan/random.hpp"

namespace cartan {

enum class FactorType { I, II, III, IV };

struct Factor {
  FactorType type;
  int p = 1;
  int q = 0;  // only used by type I

  static Factor type_i(int p, int q) { return validated({FactorType::I, p, q}); }
  static Factor type_ii(int p) { return validated({FactorType::II, p, 0}); }
  static Factor type_iii(int p) { return validated({FactorType::III, p, 0}); }
  static Factor type_iv(int n) { return validated({FactorType::IV, n, 0}); }

  static Factor validated(Factor f) {
    bool ok = false;
    switch (f.type) {
      case FactorType::I: ok = f.p >= 1 && f.p <= f.q; break;
      case FactorType::II: ok = f.p >= 1; break;
      case FactorType::III: ok = f.p >= 2; break;
      case FactorType::IV: ok = f.p >= 1; break;
    }
    if (!ok) throw Error(ErrorKind::InvalidArgument, "factor parameters out of range: " + f.to_string());
    return f;
  }

  std::size_t dimension() const {
    const auto up = static_cast<std::size_t>(p);
    switch (type) {
      case FactorType::I: return up * static_cast<std::size_t>(q);
      case FactorType::II: return up * (up + 1) / 2;
      case FactorType::III: return up * (up - 1) / 2;
      case FactorType::IV: return up;
    }
    return 0;
  }

  bool matrix_shaped() const { return type != FactorType::IV; }
  std::size_t matrix_rows() const { return static_cast<std::size_t>(p); }
  std::size_t matrix_cols() const {
    return static_cast<std::size_t>(type == FactorType::I ? q : p);
  }

  std::string to_string() const {
    switch (type) {
      case FactorType::I: return "I(" + std::to_string(p) + "," + std::to_string(q) + ")";
      case FactorType::II: return "II(" + std::to_string(p) + ")";
      case FactorType::III: return "III(" + std::to_string(p) + ")";
      case FactorType::IV: return "IV(" + std::to_string(p) + ")";
    }
    return {};
  }

  friend bool operator==(const Factor&, const Factor&) = default;
};

using FlatPoint = ComplexVector;

class DomainDescriptor {
 public:
  explicit DomainDescriptor(std::vector<Factor> factors) : factors_(std::move(factors)) {
    if (factors_.empty()) throw Error(ErrorKind::InvalidArgument, "descriptor needs a factor");
    for (const auto& f : factors_) {
      offsets_.push_back(dimension_);
      dimension_ += f.dimension();
    }
  }
  DomainDescriptor(Factor f) : DomainDescriptor(std::vector<Factor>{f}) {}

  /// Grammar: factor ('x' factor)*, factor := I(p,q) | II(p) | III(p) | IV(n).
  static DomainDescriptor parse(std::string_view text);

  const std::vector<Factor>& factors() const noexcept { return factors_; }
  std::size_t factor_count() const noexcept { return factors_.size(); }
  std::size_t dimension() const noexcept { return dimension_; }
  std::size_t offset(std::size_t factor) const { return offsets_.at(factor); }

  std::span<const Complex> block(std::span<const Complex> z, std::size_t factor) const {
    return z.subspan(offsets_.at(factor), factors_.at(factor).dimension());
  }

  std::string to_string() const {
    std::string s;
    for (std::size_t i = 0; i < factors_.size(); ++i) {
      if (i) s += "x";
      s += factors_[i].to_string();
    }
    return s;
  }

  friend bool operator==(const DomainDescriptor& a, const DomainDescriptor& b) {
    return a.factors_ == b.factors_;
  }

 private:
  std::vector<Factor> factors_;
  std::vector<std::size_t> offsets_;
  std::size_t dimension_ = 0;
};

inline DomainDescriptor DomainDescriptor::parse(std::string_view text) {
  std::size_t pos = 0;
  auto fail = [&](const std::string& why) -> Error {
    const std::size_t end = std::min(text.size(), pos + 8);
    const std::string token(text.substr(std::min(pos, text.size()), end - std::min(pos, text.size())));
    return Error(ErrorKind::ParseError,
                 why + " at offset " + std::to_string(pos) + " near '" + token + "' in '" +
                     std::string(text) + "'");
  };
  auto read_int = [&]() -> int {
    const std::size_t start = pos;
    long value = 0;
    while (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos]))) {
      value = value * 10 + (text[pos] - '0');
      if (value > 1'000'000) throw fail("parameter too large");
      ++pos;
    }
    if (pos == start) throw fail("expected integer");
    return static_cast<int>(value);
  };
  auto expect = [&](char c) {
    if (pos >= text.size() || text[pos] != c) throw fail(std::string("expected '") + c + "'");
    ++pos;
  };

  std::vector<Factor> factors;
  while (true) {
    const std::size_t start = pos;
    while (pos < text.size() && (text[pos] == 'I' || text[pos] == 'V')) ++pos;
    const std::string_view roman = text.substr(start, pos - start);
    FactorType type;
    if (roman == "I")
      type = FactorType::I;
    else if (roman == "II")
      type = FactorType::II;
    else if (roman == "III")
      type = FactorType::III;
    else if (roman == "IV")
      type = FactorType::IV;
    else {
      pos = start;
      throw fail("unknown factor type");
    }
    expect('(');
    const std::size_t param_pos = pos;
    const int a = read_int();
    int b = 0;
    if (type == FactorType::I) {
      expect(',');
      b = read_int();
    }
    expect(')');
    try {
      factors.push_back(Factor::validated({type, a, b}));
    } catch (const Error&) {
      pos = param_pos;
      throw fail("parameters out of range");
    }
    if (pos == text.size()) break;
    expect('x');
  }
  return DomainDescriptor(std::move(factors));
}

// ---------------------------------------------------------------------------
// Flattening.

inline std::size_t symmetric_index(std::size_t p, std::size_t i, std::size_t j) {
  if (i > j) std::swap(i, j);
  // rows 0..i-1 contribute p, p-1, ..., p-i+1 entries
  return i * p - i * (i - 1) / 2 + (j - i);
}

inline std::size_t antisymmetric_index(std::size_t p, std::size_t i, std::size_t j) {
  // requires i < j
  return i * (p - 1) - i * (i - 1) / 2 + (j - i - 1);
}

inline ComplexMatrix matrixize(const Factor& f, std::span<const Complex> z) {
  if (z.size() != f.dimension())
    throw Error(ErrorKind::WrongLength, f.to_string() + " expects " + std::to_string(f.dimension()) +
                                            " coordinates, got " + std::to_string(z.size()));
  const auto p = static_cast<std::size_t>(f.p);
  switch (f.type) {
    case FactorType::I: {
      const auto q = static_cast<std::size_t>(f.q);
      return ComplexMatrix(p, q, ComplexVector(z.begin(), z.end()));
    }
    case FactorType::II: {
      ComplexMatrix m(p, p);
      for (std::size_t i = 0; i < p; ++i)
        for (std::size_t j = 0; j < p; ++j) m(i, j) = z[symmetric_index(p, i, j)];
      return m;
    }
    case FactorType::III: {
      ComplexMatrix m(p, p);
      for (std::size_t i = 0; i < p; ++i)
        for (std::size_t j = i + 1; j < p; ++j) {
          m(i, j) = z[antisymmetric_index(p, i, j)];
          m(j, i) = -m(i, j);
        }
      return m;
    }
    case FactorType::IV:
      break;
  }
  throw Error(ErrorKind::NotMatrixShaped, "type IV points are not matrices");
}

/// Inverse of matrixize; reads the entries the flattening keeps.
inline FlatPoint flatten(const Factor& f, const ComplexMatrix& m) {
  const auto p = static_cast<std::size_t>(f.p);
  FlatPoint z;
  switch (f.type) {
    case FactorType::I:
      z.assign(m.data().begin(), m.data().end());
      break;
    case FactorType::II:
      for (std::size_t i = 0; i < p; ++i)
        for (std::size_t j = i; j < p; ++j) z.push_back(m(i, j));
      break;
    case FactorType::III:
      for (std::size_t i = 0; i < p; ++i)
        for (std::size_t j = i + 1; j < p; ++j) z.push_back(m(i, j));
      break;
    case FactorType::IV:
      throw Error(ErrorKind::NotMatrixShaped, "type IV points are not matrices");
  }
  return z;
}

inline void check_length(const DomainDescriptor& d, std::span<const Complex> z) {
  if (z.size() != d.dimension())
    throw Error(ErrorKind::WrongLength, d.to_string() + " expects " + std::to_string(d.dimension()) +
                                            " coordinates, got " + std::to_string(z.size()));
}

// ---------------------------------------------------------------------------
// Membership.

/// (||z||^2 + sqrt(||z||^4 - |sum z_i^2|^2))^{1/2}, with the inner difference
/// evaluated as sum_{i<j} |z_i conj(z_j) - conj(z_i) z_j|^2 to avoid cancellation.
inline double lie_norm(std::span<const Complex> z) {
  double n2 = 0;
  double gap = 0;
  for (std::size_t i = 0; i < z.size(); ++i) {
    n2 += abs2(z[i]);
    for (std::size_t j = i + 1; j < z.size(); ++j)
      gap += abs2(z[i] * std::conj(z[j]) - std::conj(z[i]) * z[j]);
  }
  return std::sqrt(n2 + std::sqrt(gap));
}

/// Closed domain: I - Z Z* >= -tol (largest singular value squared <= 1 + tol)
/// for matrix factors, Lie norm <= 1 + tol for type IV.
inline bool contains_closure(const DomainDescriptor& d, std::span<const Complex> z,
                             double tol = kDefaultTol) {
  check_length(d, z);
  for (std::size_t k = 0; k < d.factor_count(); ++k) {
    const auto& f = d.factors()[k];
    const auto zk = d.block(z, k);
    if (f.type == FactorType::IV) {
      if (lie_norm(zk) > 1.0 + tol) return false;
    } else {
      const double s = operator_norm(matrixize(f, zk));
      if (s * s > 1.0 + tol) return false;
    }
  }
  return true;
}

/// Distance-like defect of one factor from its Shilov boundary; zero exactly on it.
///   I, II, III(even): ||I - Z Z*||_op
///   III(odd):         max deviation of the singular values from (1,...,1,0)
///   IV:               max(|sum |z_i|^2 - 1|, max_{i<j} |conj(z_i) z_j - conj(z_j) z_i|)
inline double shilov_defect(const Factor& f, std::span<const Complex> z) {
  if (z.size() != f.dimension()) throw Error(ErrorKind::WrongLength, "coordinate count");
  if (f.type == FactorType::IV) {
    double n2 = 0;
    for (const auto& x : z) n2 += abs2(x);
    double defect = std::abs(n2 - 1.0);
    for (std::size_t i = 0; i < z.size(); ++i)
      for (std::size_t j = i + 1; j < z.size(); ++j)
        defect = std::max(defect, std::abs(std::conj(z[i]) * z[j] - std::conj(z[j]) * z[i]));
    return defect;
  }
  const auto m = matrixize(f, z);
  if (f.type == FactorType::III && f.p % 2 == 1) {
    const auto s = singular_values(m);
    double defect = std::abs(s.back());
    for (std::size_t i = 0; i + 1 < s.size(); ++i) defect = std::max(defect, std::abs(s[i] - 1.0));
    return defect;
  }
  return operator_norm(ComplexMatrix::identity(m.rows()) - m * m.adjoint());
}

inline double shilov_defect(const DomainDescriptor& d, std::span<const Complex> z) {
  check_length(d, z);
  double defect = 0;
  for (std::size_t k = 0; k < d.factor_count(); ++k)
    defect = std::max(defect, shilov_defect(d.factors()[k], d.block(z, k)));
  return defect;
}

/// Product Shilov boundary is the product of factor boundaries.
inline bool on_shilov(const DomainDescriptor& d, std::span<const Complex> z, double tol = kDefaultTol) {
  return shilov_defect(d, z) <= tol;
}

// ---------------------------------------------------------------------------
// Sampling.

/// J = [[0,1],[-1,0]] summed p times, plus a trailing zero when n is odd.
inline ComplexMatrix standard_antisymmetric(std::size_t n) {
  std::vector<double> ones(n / 2, 1.0);
  return youla_block_form(ones, n);
}

inline FlatPoint sample_shilov_factor(const Factor& f, Rng& rng) {
  const auto p = static_cast<std::size_t>(f.p);
  switch (f.type) {
    case FactorType::I: {
      const auto u = haar_unitary(static_cast<std::size_t>(f.q), rng);
      FlatPoint z;
      for (std::size_t i = 0; i < p; ++i)
        for (std::size_t j = 0; j < u.cols(); ++j) z.push_back(u(i, j));
      return z;
    }
    case FactorType::II: {
      const auto u = haar_unitary(p, rng);
      return flatten(f, u * u.transpose());
    }
    case FactorType::III: {
      const auto u = haar_unitary(p, rng);
      return flatten(f, u * standard_antisymmetric(p) * u.transpose());
    }
    case FactorType::IV: {
      FlatPoint z(p);
      std::normal_distribution<double> g;
      double n2 = 0;
      std::vector<double> x(p);
      do {
        n2 = 0;
        for (auto& xi : x) {
          xi = g(rng);
          n2 += xi * xi;
        }
      } while (n2 == 0.0);
      const Complex phase = unit_phase(rng);
      for (std::size_t i = 0; i < p; ++i) z[i] = phase * (x[i] / std::sqrt(n2));
      return z;
    }
  }
  return {};
}

inline FlatPoint sample_shilov_point(const DomainDescriptor& d, Rng& rng) {
  FlatPoint z;
  z.reserve(d.dimension());
  for (const auto& f : d.factors()) {
    const auto zf = sample_shilov_factor(f, rng);
    z.insert(z.end(), zf.begin(), zf.end());
  }
  return z;
}

inline std::vector<FlatPoint> sample_shilov(const DomainDescriptor& d, std::size_t count,
                                            std::uint64_t seed) {
  Rng rng(seed);
  std::vector<FlatPoint> out;
  out.reserve(count);
  for (std::size_t i = 0; i < count; ++i) out.push_back(sample_shilov_point(d, rng));
  return out;
}

/// scale * z. The domains are convex and circled, so the result stays in the
/// closure, and for scale <= 1 - 10 tol it is off the Shilov boundary.
inline FlatPoint perturb_off_shilov(const DomainDescriptor& d, std::span<const Complex> z, double scale,
                                    double tol = kDefaultTol) {
  if (!(scale > 0.0 && scale < 1.0)) throw Error(ErrorKind::InvalidArgument, "scale must lie in (0,1)");
  if (!on_shilov(d, z, tol)) throw Error(ErrorKind::NotOnShilov, "point is not on the Shilov boundary");
  FlatPoint out(z.begin(), z.end());
  for (auto& x : out) x *= scale;
  return out;
}

}  // namespace cartan
