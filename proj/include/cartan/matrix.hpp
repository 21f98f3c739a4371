#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <initializer_list>
#include <span>
#include <vector>

#include "cartan/error.hpp"

namespace cartan {

using Complex = std::complex<double>;

inline double abs2(Complex c) { return c.real() * c.real() + c.imag() * c.imag(); }

/// Dense row-major matrix. Zero extents are allowed so that empty subspaces
/// (e.g. a trivial intertwiner space) have a natural representation.
template <class T>
class Matrix {
 public:
  using value_type = T;

  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols, T fill = T{})
      : rows_(rows), cols_(cols), data_(rows * cols, fill) {}
  Matrix(std::size_t rows, std::size_t cols, std::vector<T> data)
      : rows_(rows), cols_(cols), data_(std::move(data)) {
    if (data_.size() != rows_ * cols_)
      throw Error(ErrorKind::SizeMismatch, "entry count does not match rows*cols");
  }
  Matrix(std::initializer_list<std::initializer_list<T>> rows) {
    rows_ = rows.size();
    cols_ = rows_ ? rows.begin()->size() : 0;
    data_.reserve(rows_ * cols_);
    for (const auto& r : rows) {
      if (r.size() != cols_) throw Error(ErrorKind::SizeMismatch, "ragged initializer");
      data_.insert(data_.end(), r.begin(), r.end());
    }
  }

  static Matrix identity(std::size_t n) {
    Matrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = T{1};
    return m;
  }
  static Matrix diagonal(std::span<const T> d) {
    Matrix m(d.size(), d.size());
    for (std::size_t i = 0; i < d.size(); ++i) m(i, i) = d[i];
    return m;
  }

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  bool square() const noexcept { return rows_ == cols_; }
  bool empty() const noexcept { return data_.empty(); }

  T& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  const T& operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

  std::span<T> data() noexcept { return data_; }
  std::span<const T> data() const noexcept { return data_; }

  Matrix adjoint() const {
    Matrix r(cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t j = 0; j < cols_; ++j) r(j, i) = conj_(operator()(i, j));
    return r;
  }
  Matrix transpose() const {
    Matrix r(cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t j = 0; j < cols_; ++j) r(j, i) = operator()(i, j);
    return r;
  }
  Matrix conjugate() const {
    Matrix r(*this);
    for (auto& x : r.data_) x = conj_(x);
    return r;
  }

  Matrix col(std::size_t j) const {
    Matrix r(rows_, 1);
    for (std::size_t i = 0; i < rows_; ++i) r(i, 0) = operator()(i, j);
    return r;
  }
  void set_col(std::size_t j, const Matrix& v) {
    for (std::size_t i = 0; i < rows_; ++i) operator()(i, j) = v(i, 0);
  }
  /// Columns [first, first+count).
  Matrix cols_range(std::size_t first, std::size_t count) const {
    Matrix r(rows_, count);
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t j = 0; j < count; ++j) r(i, j) = operator()(i, first + j);
    return r;
  }
  static Matrix hcat(std::span<const Matrix> columns, std::size_t rows) {
    std::size_t total = 0;
    for (const auto& c : columns) total += c.cols();
    Matrix r(rows, total);
    std::size_t at = 0;
    for (const auto& c : columns) {
      for (std::size_t i = 0; i < rows; ++i)
        for (std::size_t j = 0; j < c.cols(); ++j) r(i, at + j) = c(i, j);
      at += c.cols();
    }
    return r;
  }

  Matrix& operator+=(const Matrix& o) {
    check_same_(o);
    for (std::size_t k = 0; k < data_.size(); ++k) data_[k] += o.data_[k];
    return *this;
  }
  Matrix& operator-=(const Matrix& o) {
    check_same_(o);
    for (std::size_t k = 0; k < data_.size(); ++k) data_[k] -= o.data_[k];
    return *this;
  }
  Matrix& operator*=(T s) {
    for (auto& x : data_) x *= s;
    return *this;
  }
  /// this += s * o
  void axpy(T s, const Matrix& o) {
    check_same_(o);
    for (std::size_t k = 0; k < data_.size(); ++k) data_[k] += s * o.data_[k];
  }

  friend Matrix operator+(Matrix a, const Matrix& b) { return a += b; }
  friend Matrix operator-(Matrix a, const Matrix& b) { return a -= b; }
  friend Matrix operator*(Matrix a, T s) { return a *= s; }
  friend Matrix operator*(T s, Matrix a) { return a *= s; }
  friend Matrix operator-(Matrix a) { return a *= T{-1}; }

  friend Matrix operator*(const Matrix& a, const Matrix& b) {
    if (a.cols_ != b.rows_) throw Error(ErrorKind::SizeMismatch, "matrix product extents");
    Matrix r(a.rows_, b.cols_);
    for (std::size_t i = 0; i < a.rows_; ++i) {
      T* out = &r.data_[i * b.cols_];
      for (std::size_t k = 0; k < a.cols_; ++k) {
        const T aik = a(i, k);
        if (aik == T{}) continue;
        const T* brow = &b.data_[k * b.cols_];
        for (std::size_t j = 0; j < b.cols_; ++j) out[j] += aik * brow[j];
      }
    }
    return r;
  }

  friend bool operator==(const Matrix&, const Matrix&) = default;

  double frobenius_norm() const {
    double s = 0;
    for (const auto& x : data_) s += std::norm(x);
    return std::sqrt(s);
  }
  double max_abs() const {
    double m = 0;
    for (const auto& x : data_) m = std::max(m, static_cast<double>(std::abs(x)));
    return m;
  }
  bool all_finite() const {
    return std::all_of(data_.begin(), data_.end(), [](const T& x) {
      return std::isfinite(std::real(x)) && std::isfinite(std::imag(x));
    });
  }
  T trace() const {
    T t{};
    for (std::size_t i = 0; i < std::min(rows_, cols_); ++i) t += operator()(i, i);
    return t;
  }

 private:
  static T conj_(const T& x) {
    if constexpr (std::is_arithmetic_v<T>)
      return x;
    else
      return std::conj(x);
  }
  void check_same_(const Matrix& o) const {
    if (rows_ != o.rows_ || cols_ != o.cols_)
      throw Error(ErrorKind::SizeMismatch, "matrix extents differ");
  }

  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<T> data_;
};

using ComplexMatrix = Matrix<Complex>;
using ComplexVector = std::vector<Complex>;

inline ComplexMatrix column(std::span<const Complex> v) {
  return ComplexMatrix(v.size(), 1, ComplexVector(v.begin(), v.end()));
}

inline ComplexMatrix diag(std::span<const Complex> d) { return ComplexMatrix::diagonal(d); }

inline ComplexMatrix hermitian_part(const ComplexMatrix& a) { return (a + a.adjoint()) * Complex(0.5); }

/// ||A B - B A||_F
inline double commutator_norm(const ComplexMatrix& a, const ComplexMatrix& b) {
  return (a * b - b * a).frobenius_norm();
}

inline Complex inner(const ComplexMatrix& x, const ComplexMatrix& y) {
  Complex s{};
  for (std::size_t k = 0; k < x.data().size(); ++k) s += std::conj(x.data()[k]) * y.data()[k];
  return s;
}

}  // namespace cartan
