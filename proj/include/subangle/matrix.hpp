#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <initializer_list>
#include <span>
#include <string>
#include <vector>

#include "error.hpp"

namespace subangle {

using Vector = std::vector<double>;

/// Dense real matrix, row-major. Vectors of the geometry are stored as rows.
///
/// Invariants: rows >= 1, cols >= 1, and every entry finite at construction.
class Matrix {
 public:
  Matrix(std::size_t rows, std::size_t cols) : Matrix(rows, cols, Vector(rows * cols, 0.0)) {}

  Matrix(std::size_t rows, std::size_t cols, Vector entries)
      : rows_(rows), cols_(cols), data_(std::move(entries)) {
    if (rows_ == 0 || cols_ == 0) throw MathError("matrix: empty shape");
    if (data_.size() != rows_ * cols_) throw MathError("matrix: entry count does not match shape");
    for (double v : data_)
      if (!std::isfinite(v)) throw MathError("matrix: non-finite entry");
  }

  Matrix(std::initializer_list<std::initializer_list<double>> rows)
      : Matrix(from_rows(std::vector<Vector>(rows.begin(), rows.end()))) {}

  static Matrix from_rows(const std::vector<Vector>& rows) {
    if (rows.empty() || rows.front().empty()) throw MathError("matrix: empty shape");
    const std::size_t cols = rows.front().size();
    Vector data;
    data.reserve(rows.size() * cols);
    for (const auto& r : rows) {
      if (r.size() != cols) throw MathError("matrix: ragged rows");
      data.insert(data.end(), r.begin(), r.end());
    }
    return Matrix(rows.size(), cols, std::move(data));
  }

  static Matrix row_vector(std::span<const double> v) {
    return Matrix(1, v.size(), Vector(v.begin(), v.end()));
  }

  static Matrix identity(std::size_t n) {
    Matrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
  }

  static Matrix diagonal(std::span<const double> d) {
    Matrix m(d.size(), d.size());
    for (std::size_t i = 0; i < d.size(); ++i) m(i, i) = d[i];
    return m;
  }

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  bool square() const noexcept { return rows_ == cols_; }

  double& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  double operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

  std::span<const double> row(std::size_t i) const { return {data_.data() + i * cols_, cols_}; }
  std::span<double> row(std::size_t i) { return {data_.data() + i * cols_, cols_}; }
  Vector row_copy(std::size_t i) const {
    auto r = row(i);
    return Vector(r.begin(), r.end());
  }
  Vector col_copy(std::size_t j) const {
    Vector c(rows_);
    for (std::size_t i = 0; i < rows_; ++i) c[i] = (*this)(i, j);
    return c;
  }

  const Vector& entries() const noexcept { return data_; }

  Matrix transpose() const {
    Matrix t(cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
    return t;
  }

  double max_abs() const {
    double m = 0.0;
    for (double v : data_) m = std::max(m, std::abs(v));
    return m;
  }

  double frobenius() const {
    double s = 0.0;
    for (double v : data_) s += v * v;
    return std::sqrt(s);
  }

  /// Rows [first, first + count) as a new matrix; count must be >= 1.
  Matrix row_block(std::size_t first, std::size_t count) const {
    if (count == 0 || first + count > rows_) throw MathError("matrix: row block out of range");
    return Matrix(count, cols_,
                  Vector(data_.begin() + static_cast<std::ptrdiff_t>(first * cols_),
                         data_.begin() + static_cast<std::ptrdiff_t>((first + count) * cols_)));
  }

  Matrix block(std::size_t r0, std::size_t c0, std::size_t nr, std::size_t nc) const {
    if (nr == 0 || nc == 0 || r0 + nr > rows_ || c0 + nc > cols_)
      throw MathError("matrix: block out of range");
    Matrix b(nr, nc);
    for (std::size_t i = 0; i < nr; ++i)
      for (std::size_t j = 0; j < nc; ++j) b(i, j) = (*this)(r0 + i, c0 + j);
    return b;
  }

  friend bool operator==(const Matrix&, const Matrix&) = default;

 private:
  std::size_t rows_;
  std::size_t cols_;
  Vector data_;
};

inline std::string shape_string(const Matrix& m) {
  return std::to_string(m.rows()) + "x" + std::to_string(m.cols());
}

inline double dot(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) throw MathError("dot: length mismatch");
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

inline double norm(std::span<const double> a) { return std::sqrt(dot(a, a)); }

inline Matrix operator+(const Matrix& a, const Matrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) throw MathError("add: dimension mismatch");
  Vector d = a.entries();
  for (std::size_t i = 0; i < d.size(); ++i) d[i] += b.entries()[i];
  return Matrix(a.rows(), a.cols(), std::move(d));
}

inline Matrix operator-(const Matrix& a, const Matrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) throw MathError("subtract: dimension mismatch");
  Vector d = a.entries();
  for (std::size_t i = 0; i < d.size(); ++i) d[i] -= b.entries()[i];
  return Matrix(a.rows(), a.cols(), std::move(d));
}

inline Matrix operator*(double s, const Matrix& a) {
  Vector d = a.entries();
  for (double& v : d) v *= s;
  return Matrix(a.rows(), a.cols(), std::move(d));
}

inline double max_abs_diff(const Matrix& a, const Matrix& b) { return (a - b).max_abs(); }

/// Stack the rows of `top` above the rows of `bottom`.
inline Matrix vstack(const Matrix& top, const Matrix& bottom) {
  if (top.cols() != bottom.cols()) throw MathError("vstack: column mismatch");
  Vector d = top.entries();
  d.insert(d.end(), bottom.entries().begin(), bottom.entries().end());
  return Matrix(top.rows() + bottom.rows(), top.cols(), std::move(d));
}

/// Rows of `m` selected by index, in the given order.
inline Matrix select_rows(const Matrix& m, std::span<const std::size_t> idx) {
  if (idx.empty()) throw MathError("select_rows: empty selection");
  Vector d;
  d.reserve(idx.size() * m.cols());
  for (std::size_t i : idx) {
    if (i >= m.rows()) throw MathError("select_rows: index out of range");
    auto r = m.row(i);
    d.insert(d.end(), r.begin(), r.end());
  }
  return Matrix(idx.size(), m.cols(), std::move(d));
}

}  // namespace subangle
