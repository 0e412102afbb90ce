#pragma once

// Dense real linear algebra for small problems: vectors, symmetric matrices,
// rank-one downdates and Cholesky-based solves. Everything is stored full and
// row-major; symmetric results are re-symmetrized explicitly so mirrored
// entries compare equal bit for bit.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <initializer_list>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "ellipsoid/errors.hpp"

namespace ellipsoid {

class Vector {
 public:
  Vector() = default;
  Vector(std::initializer_list<double> values) : data_(values) {}
  explicit Vector(std::vector<double> values) : data_(std::move(values)) {}

  static Vector zeros(std::size_t n) { return Vector(std::vector<double>(n, 0.0)); }

  std::size_t size() const noexcept { return data_.size(); }
  double operator[](std::size_t i) const { return data_[i]; }
  double& operator[](std::size_t i) { return data_[i]; }

  std::span<const double> values() const noexcept { return data_; }
  const std::vector<double>& std_vector() const noexcept { return data_; }
  auto begin() const noexcept { return data_.begin(); }
  auto end() const noexcept { return data_.end(); }

  bool all_finite() const {
    return std::all_of(data_.begin(), data_.end(), [](double v) { return std::isfinite(v); });
  }

  friend bool operator==(const Vector&, const Vector&) = default;

 private:
  std::vector<double> data_;
};

namespace detail {

inline void require_same_size(std::size_t a, std::size_t b, const char* what) {
  if (a != b) {
    throw usage_error(std::string(what) + ": dimension mismatch (" + std::to_string(a) + " vs " +
                      std::to_string(b) + ")");
  }
}

}  // namespace detail

inline double dot(const Vector& a, const Vector& b) {
  detail::require_same_size(a.size(), b.size(), "dot");
  double sum = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) sum += a[i] * b[i];
  return sum;
}

inline double norm(const Vector& v) {
  double sum = 0.0;
  for (double x : v) sum += x * x;
  return std::sqrt(sum);
}

inline Vector operator+(const Vector& a, const Vector& b) {
  detail::require_same_size(a.size(), b.size(), "vector add");
  Vector out = a;
  for (std::size_t i = 0; i < a.size(); ++i) out[i] += b[i];
  return out;
}

inline Vector operator-(const Vector& a, const Vector& b) {
  detail::require_same_size(a.size(), b.size(), "vector subtract");
  Vector out = a;
  for (std::size_t i = 0; i < a.size(); ++i) out[i] -= b[i];
  return out;
}

inline Vector operator*(double s, const Vector& v) {
  Vector out = v;
  for (std::size_t i = 0; i < v.size(); ++i) out[i] *= s;
  return out;
}

/// Dense symmetric matrix. Mirrored entries are always bitwise identical.
class SymmetricMatrix {
 public:
  SymmetricMatrix() = default;

  /// Builds from explicit rows; the input must already be exactly symmetric.
  SymmetricMatrix(std::initializer_list<std::initializer_list<double>> rows) : n_(rows.size()) {
    data_.reserve(n_ * n_);
    for (const auto& row : rows) {
      if (row.size() != n_) throw usage_error("SymmetricMatrix: rows must form a square matrix");
      data_.insert(data_.end(), row.begin(), row.end());
    }
    for (std::size_t i = 0; i < n_; ++i) {
      for (std::size_t j = i + 1; j < n_; ++j) {
        if ((*this)(i, j) != (*this)(j, i)) throw usage_error("SymmetricMatrix: input is not symmetric");
      }
    }
  }

  static SymmetricMatrix scaled_identity(std::size_t n, double s) {
    SymmetricMatrix m(n);
    for (std::size_t i = 0; i < n; ++i) m.at(i, i) = s;
    return m;
  }

  static SymmetricMatrix identity(std::size_t n) { return scaled_identity(n, 1.0); }

  static SymmetricMatrix diagonal(const Vector& d) {
    SymmetricMatrix m(d.size());
    for (std::size_t i = 0; i < d.size(); ++i) m.at(i, i) = d[i];
    return m;
  }

  /// Takes an n*n row-major array and averages each mirrored pair.
  static SymmetricMatrix symmetrized(std::size_t n, std::vector<double> row_major) {
    if (row_major.size() != n * n) throw usage_error("SymmetricMatrix: expected n*n entries");
    SymmetricMatrix m(n);
    m.data_ = std::move(row_major);
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = i + 1; j < n; ++j) {
        const double avg = 0.5 * (m.at(i, j) + m.at(j, i));
        m.at(i, j) = avg;
        m.at(j, i) = avg;
      }
    }
    return m;
  }

  std::size_t dim() const noexcept { return n_; }
  double operator()(std::size_t i, std::size_t j) const { return data_[i * n_ + j]; }
  std::span<const double> row_major() const noexcept { return data_; }

  SymmetricMatrix scaled(double s) const {
    SymmetricMatrix m = *this;
    for (double& x : m.data_) x *= s;
    return m;
  }

  bool all_finite() const {
    return std::all_of(data_.begin(), data_.end(), [](double v) { return std::isfinite(v); });
  }

  friend bool operator==(const SymmetricMatrix&, const SymmetricMatrix&) = default;

 private:
  explicit SymmetricMatrix(std::size_t n) : n_(n), data_(n * n, 0.0) {}
  double& at(std::size_t i, std::size_t j) { return data_[i * n_ + j]; }

  std::size_t n_ = 0;
  std::vector<double> data_;
};

/// Lower-triangular Cholesky factor L with L L' = M.
class CholeskyFactor {
 public:
  CholeskyFactor(std::size_t n, std::vector<double> lower) : n_(n), data_(std::move(lower)) {}

  std::size_t dim() const noexcept { return n_; }
  double operator()(std::size_t i, std::size_t j) const { return j <= i ? data_[i * n_ + j] : 0.0; }

  double log_det() const {
    double sum = 0.0;
    for (std::size_t i = 0; i < n_; ++i) sum += std::log((*this)(i, i));
    return 2.0 * sum;
  }

  /// Forward then back substitution.
  Vector solve(const Vector& rhs) const {
    detail::require_same_size(n_, rhs.size(), "cholesky solve");
    Vector y = rhs;
    for (std::size_t i = 0; i < n_; ++i) {
      double s = y[i];
      for (std::size_t k = 0; k < i; ++k) s -= (*this)(i, k) * y[k];
      y[i] = s / (*this)(i, i);
    }
    for (std::size_t ii = n_; ii-- > 0;) {
      double s = y[ii];
      for (std::size_t k = ii + 1; k < n_; ++k) s -= (*this)(k, ii) * y[k];
      y[ii] = s / (*this)(ii, ii);
    }
    return y;
  }

 private:
  std::size_t n_;
  std::vector<double> data_;
};

/// Relative pivot floor: each pivot must exceed this times its own diagonal entry.
inline constexpr double kPivotTolerance = 1e-12;

inline Vector mat_vec(const SymmetricMatrix& m, const Vector& v) {
  detail::require_same_size(m.dim(), v.size(), "mat_vec");
  const std::size_t n = m.dim();
  Vector out = Vector::zeros(n);
  for (std::size_t i = 0; i < n; ++i) {
    double s = 0.0;
    for (std::size_t j = 0; j < n; ++j) s += m(i, j) * v[j];
    out[i] = s;
  }
  return out;
}

inline double quadratic_form(const SymmetricMatrix& m, const Vector& v) {
  detail::require_same_size(m.dim(), v.size(), "quadratic_form");
  return dot(v, mat_vec(m, v));
}

/// M - beta * w w', symmetrized.
inline SymmetricMatrix rank1_downdate(const SymmetricMatrix& m, const Vector& w, double beta) {
  detail::require_same_size(m.dim(), w.size(), "rank1_downdate");
  if (!(beta >= 0.0)) throw usage_error("rank1_downdate: beta must be non-negative");
  const std::size_t n = m.dim();
  std::vector<double> out(m.row_major().begin(), m.row_major().end());
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) out[i * n + j] -= beta * w[i] * w[j];
  }
  return SymmetricMatrix::symmetrized(n, std::move(out));
}

/// Returns the factor, or nullopt when some pivot is not above kPivotTolerance * its diagonal entry.
/// The pivot over the diagonal entry is the squared sine of the angle between row j and the span
/// of the earlier rows, so the test is unaffected by diagonal scaling.
inline std::optional<CholeskyFactor> cholesky(const SymmetricMatrix& m) {
  const std::size_t n = m.dim();
  if (n == 0 || !m.all_finite()) return std::nullopt;

  std::vector<double> l(n * n, 0.0);
  for (std::size_t j = 0; j < n; ++j) {
    if (!(m(j, j) > 0.0)) return std::nullopt;
    double pivot = m(j, j);
    for (std::size_t k = 0; k < j; ++k) pivot -= l[j * n + k] * l[j * n + k];
    if (!(pivot > kPivotTolerance * m(j, j))) return std::nullopt;
    const double ljj = std::sqrt(pivot);
    l[j * n + j] = ljj;
    for (std::size_t i = j + 1; i < n; ++i) {
      double s = m(i, j);
      for (std::size_t k = 0; k < j; ++k) s -= l[i * n + k] * l[j * n + k];
      l[i * n + j] = s / ljj;
    }
  }
  return CholeskyFactor(n, std::move(l));
}

namespace detail {

inline CholeskyFactor require_pd(const SymmetricMatrix& m, const char* what) {
  auto factor = cholesky(m);
  if (!factor) throw not_pd_error(std::string(what) + ": matrix is not positive definite");
  return *std::move(factor);
}

}  // namespace detail

inline double log_det_pd(const SymmetricMatrix& m) { return detail::require_pd(m, "log_det_pd").log_det(); }

inline Vector solve_pd(const SymmetricMatrix& m, const Vector& rhs) {
  detail::require_same_size(m.dim(), rhs.size(), "solve_pd");
  return detail::require_pd(m, "solve_pd").solve(rhs);
}

}  // namespace ellipsoid
