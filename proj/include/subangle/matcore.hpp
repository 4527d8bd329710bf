#pragma once

// Dense kernels every other module builds on: products, LU, Cholesky,
// pivoted orthonormalization and a cyclic Jacobi eigensolver.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <numeric>
#include <optional>
#include <vector>

#include "config.hpp"
#include "error.hpp"
#include "matrix.hpp"

namespace subangle {

inline Matrix multiply(const Matrix& a, const Matrix& b) {
  if (a.cols() != b.rows())
    throw MathError("multiply: dimension mismatch " + shape_string(a) + " * " + shape_string(b));
  Matrix c(a.rows(), b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t k = 0; k < a.cols(); ++k) {
      const double aik = a(i, k);
      if (aik == 0.0) continue;
      for (std::size_t j = 0; j < b.cols(); ++j) c(i, j) += aik * b(k, j);
    }
  return c;
}

inline Matrix operator*(const Matrix& a, const Matrix& b) { return multiply(a, b); }

/// a * b^T, the matrix of pairwise inner products between the rows of a and b.
inline Matrix multiply_transposed(const Matrix& a, const Matrix& b) {
  if (a.cols() != b.cols())
    throw MathError("multiply_transposed: dimension mismatch " + shape_string(a) + " * " +
                    shape_string(b) + "^T");
  Matrix c(a.rows(), b.rows());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < b.rows(); ++j) c(i, j) = dot(a.row(i), b.row(j));
  return c;
}

/// Row vector times matrix.
inline Vector apply_row(std::span<const double> x, const Matrix& m) {
  if (x.size() != m.rows()) throw MathError("apply_row: dimension mismatch");
  Vector y(m.cols(), 0.0);
  for (std::size_t k = 0; k < m.rows(); ++k)
    for (std::size_t j = 0; j < m.cols(); ++j) y[j] += x[k] * m(k, j);
  return y;
}

inline Matrix symmetrize(const Matrix& a) {
  if (!a.square()) throw MathError("symmetrize: matrix is not square");
  Matrix s(a.rows(), a.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) s(i, j) = 0.5 * (a(i, j) + a(j, i));
  return s;
}

inline bool is_symmetric(const Matrix& a, double rel_tol) {
  if (!a.square()) return false;
  const double bound = rel_tol * a.max_abs();
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = i + 1; j < a.cols(); ++j)
      if (std::abs(a(i, j) - a(j, i)) > bound) return false;
  return true;
}

namespace detail {

struct LU {
  Matrix lu;
  std::vector<std::size_t> perm;
  int sign = 1;
  bool singular = false;
};

// Doolittle elimination with partial pivoting; `singular` is set when a pivot
// column is exactly zero.
inline LU lu_decompose(const Matrix& a) {
  LU f{a, std::vector<std::size_t>(a.rows()), 1, false};
  std::iota(f.perm.begin(), f.perm.end(), std::size_t{0});
  const std::size_t n = a.rows();
  Matrix& m = f.lu;
  for (std::size_t k = 0; k < n; ++k) {
    std::size_t piv = k;
    for (std::size_t i = k + 1; i < n; ++i)
      if (std::abs(m(i, k)) > std::abs(m(piv, k))) piv = i;
    if (m(piv, k) == 0.0) {
      f.singular = true;
      continue;
    }
    if (piv != k) {
      for (std::size_t j = 0; j < n; ++j) std::swap(m(k, j), m(piv, j));
      std::swap(f.perm[k], f.perm[piv]);
      f.sign = -f.sign;
    }
    for (std::size_t i = k + 1; i < n; ++i) {
      const double l = m(i, k) / m(k, k);
      m(i, k) = l;
      for (std::size_t j = k + 1; j < n; ++j) m(i, j) -= l * m(k, j);
    }
  }
  return f;
}

}  // namespace detail

inline double determinant(const Matrix& a) {
  if (!a.square()) throw MathError("determinant: matrix is not square (" + shape_string(a) + ")");
  const auto f = detail::lu_decompose(a);
  if (f.singular) return 0.0;
  double d = f.sign;
  for (std::size_t i = 0; i < a.rows(); ++i) d *= f.lu(i, i);
  return d;
}

/// Solve a * x = rhs for general square a by LU with partial pivoting.
inline Matrix solve(const Matrix& a, const Matrix& rhs) {
  if (!a.square()) throw MathError("solve: matrix is not square");
  if (rhs.rows() != a.rows()) throw MathError("solve: right-hand side has wrong row count");
  const auto f = detail::lu_decompose(a);
  const std::size_t n = a.rows();
  const double tiny = static_cast<double>(n) * std::numeric_limits<double>::epsilon() * a.max_abs();
  for (std::size_t i = 0; i < n; ++i)
    if (f.singular || std::abs(f.lu(i, i)) <= tiny) throw MathError("solve: matrix is singular");
  Matrix x(n, rhs.cols());
  for (std::size_t c = 0; c < rhs.cols(); ++c) {
    Vector y(n);
    for (std::size_t i = 0; i < n; ++i) {
      double s = rhs(f.perm[i], c);
      for (std::size_t j = 0; j < i; ++j) s -= f.lu(i, j) * y[j];
      y[i] = s;
    }
    for (std::size_t i = n; i-- > 0;) {
      double s = y[i];
      for (std::size_t j = i + 1; j < n; ++j) s -= f.lu(i, j) * x(j, c);
      x(i, c) = s / f.lu(i, i);
    }
  }
  return x;
}

/// Inverse through n solves against the axis vectors.
inline Matrix inverse(const Matrix& a) { return solve(a, Matrix::identity(a.rows())); }

/// Lower Cholesky factor, or nullopt when a nonpositive pivot shows up.
inline std::optional<Matrix> cholesky(const Matrix& a) {
  if (!a.square()) throw MathError("cholesky: matrix is not square");
  const std::size_t n = a.rows();
  Matrix l(n, n);
  for (std::size_t j = 0; j < n; ++j) {
    double d = a(j, j);
    for (std::size_t k = 0; k < j; ++k) d -= l(j, k) * l(j, k);
    if (!(d > 0.0)) return std::nullopt;
    l(j, j) = std::sqrt(d);
    for (std::size_t i = j + 1; i < n; ++i) {
      double s = a(i, j);
      for (std::size_t k = 0; k < j; ++k) s -= l(i, k) * l(j, k);
      l(i, j) = s / l(j, j);
    }
  }
  return l;
}

inline Matrix solve_spd(const Matrix& a, const Matrix& rhs) {
  if (!a.square()) throw MathError("solve_spd: matrix is not square");
  if (rhs.rows() != a.rows()) throw MathError("solve_spd: right-hand side has wrong row count");
  const auto l = cholesky(a);
  if (!l) throw MathError("solve_spd: matrix is not positive definite (nonpositive pivot)");
  const std::size_t n = a.rows();
  Matrix x(n, rhs.cols());
  for (std::size_t c = 0; c < rhs.cols(); ++c) {
    Vector y(n);
    for (std::size_t i = 0; i < n; ++i) {
      double s = rhs(i, c);
      for (std::size_t k = 0; k < i; ++k) s -= (*l)(i, k) * y[k];
      y[i] = s / (*l)(i, i);
    }
    for (std::size_t i = n; i-- > 0;) {
      double s = y[i];
      for (std::size_t k = i + 1; k < n; ++k) s -= (*l)(k, i) * x(k, c);
      x(i, c) = s / (*l)(i, i);
    }
  }
  return x;
}

/// Orthonormal rows spanning the row space of the input, plus the rank.
/// `basis` is empty exactly when rank == 0.
struct Orthonormalized {
  std::optional<Matrix> basis;
  std::size_t rank = 0;
};

/// Modified Gram-Schmidt with row pivoting (column-pivoted QR of the
/// transpose) and one re-orthogonalization pass per accepted row.
///
/// At each step the remaining row with the largest residual norm is taken;
/// elimination stops when that norm falls to the rank threshold
/// (see Tolerances::rank).
inline Orthonormalized orthonormalize(const Matrix& rows, const Tolerances& tol = {}) {
  const std::size_t m = rows.rows();
  const std::size_t n = rows.cols();
  std::vector<Vector> work(m);
  double largest = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    work[i] = rows.row_copy(i);
    largest = std::max(largest, norm(work[i]));
  }
  const double threshold = tol.rank.value_or(static_cast<double>(std::max(m, n)) *
                                             std::numeric_limits<double>::epsilon() * largest);

  std::vector<Vector> basis;
  std::vector<bool> used(m, false);
  while (basis.size() < std::min(m, n)) {
    std::size_t pick = m;
    double best = -1.0;
    for (std::size_t i = 0; i < m; ++i) {
      if (used[i]) continue;
      const double r = norm(work[i]);
      if (r > best) {
        best = r;
        pick = i;
      }
    }
    if (pick == m || best <= threshold) break;
    used[pick] = true;

    Vector v = work[pick];
    for (const auto& b : basis) {
      const double c = dot(v, b);
      for (std::size_t k = 0; k < n; ++k) v[k] -= c * b[k];
    }
    const double len = norm(v);
    if (len <= threshold) continue;
    for (double& x : v) x /= len;

    for (std::size_t i = 0; i < m; ++i) {
      if (used[i]) continue;
      const double c = dot(work[i], v);
      for (std::size_t k = 0; k < n; ++k) work[i][k] -= c * v[k];
    }
    basis.push_back(std::move(v));
  }

  Orthonormalized out;
  out.rank = basis.size();
  if (!basis.empty()) out.basis = Matrix::from_rows(basis);
  return out;
}

/// Extend orthonormal rows to a full orthonormal frame of R^n. The first
/// rows of the result are the input rows unchanged; each added row is the
/// axis vector with the largest residual against the frame built so far.
inline Matrix complete_orthonormal(const Matrix& basis) {
  const std::size_t n = basis.cols();
  if (basis.rows() > n) throw MathError("complete_orthonormal: more rows than columns");
  std::vector<Vector> frame;
  for (std::size_t i = 0; i < basis.rows(); ++i) frame.push_back(basis.row_copy(i));

  auto residual = [&](Vector v) {
    for (int pass = 0; pass < 2; ++pass)
      for (const auto& f : frame) {
        const double c = dot(v, f);
        for (std::size_t k = 0; k < n; ++k) v[k] -= c * f[k];
      }
    return v;
  };

  while (frame.size() < n) {
    Vector best;
    double best_norm = -1.0;
    for (std::size_t i = 0; i < n; ++i) {
      Vector e(n, 0.0);
      e[i] = 1.0;
      Vector r = residual(std::move(e));
      const double len = norm(r);
      if (len > best_norm) {
        best_norm = len;
        best = std::move(r);
      }
    }
    if (best_norm <= 0.0) throw MathError("complete_orthonormal: input rows are not independent");
    for (double& x : best) x /= best_norm;
    frame.push_back(residual(best));
    const double len = norm(frame.back());
    for (double& x : frame.back()) x /= len;
  }
  return Matrix::from_rows(frame);
}

/// Eigen-decomposition of a symmetric matrix.
/// eigenvalues descending; column j of `eigenvectors` belongs to eigenvalue j.
struct EigenPair {
  Vector eigenvalues;
  Matrix eigenvectors;
};

/// Cyclic Jacobi rotations. The input is symmetrized by averaging first; an
/// input whose asymmetry exceeds Tolerances::symmetry * ||a||_max is rejected.
inline EigenPair sym_eigen(const Matrix& input, const Tolerances& tol = {}) {
  if (!input.square()) throw MathError("sym_eigen: matrix is not square (" + shape_string(input) + ")");
  if (!is_symmetric(input, tol.symmetry)) throw MathError("sym_eigen: matrix is not symmetric");
  const std::size_t n = input.rows();
  Matrix a = symmetrize(input);
  Matrix v = Matrix::identity(n);
  const double target = tol.jacobi_rel * a.frobenius();

  auto off_mass = [&] {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j)
        if (i != j) s += a(i, j) * a(i, j);
    return std::sqrt(s);
  };

  bool converged = off_mass() <= target;
  for (int sweep = 0; sweep < tol.jacobi_max_sweeps && !converged; ++sweep) {
    for (std::size_t p = 0; p + 1 < n; ++p)
      for (std::size_t q = p + 1; q < n; ++q) {
        const double apq = a(p, q);
        if (apq == 0.0) continue;
        const double theta = (a(q, q) - a(p, p)) / (2.0 * apq);
        double t;
        if (std::abs(theta) > 1e150) {
          t = 0.5 / theta;
        } else {
          t = (theta >= 0.0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        }
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;
        for (std::size_t k = 0; k < n; ++k) {
          const double akp = a(k, p), akq = a(k, q);
          a(k, p) = c * akp - s * akq;
          a(k, q) = s * akp + c * akq;
        }
        for (std::size_t k = 0; k < n; ++k) {
          const double apk = a(p, k), aqk = a(q, k);
          a(p, k) = c * apk - s * aqk;
          a(q, k) = s * apk + c * aqk;
        }
        a(p, q) = a(q, p) = 0.0;
        for (std::size_t k = 0; k < n; ++k) {
          const double vkp = v(k, p), vkq = v(k, q);
          v(k, p) = c * vkp - s * vkq;
          v(k, q) = s * vkp + c * vkq;
        }
      }
    converged = off_mass() <= target;
  }
  if (!converged) throw ConvergenceError(tol.jacobi_max_sweeps);

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t i, std::size_t j) { return a(i, i) > a(j, j); });
  EigenPair out{Vector(n), Matrix(n, n)};
  for (std::size_t j = 0; j < n; ++j) {
    out.eigenvalues[j] = a(order[j], order[j]);
    for (std::size_t k = 0; k < n; ++k) out.eigenvectors(k, j) = v(k, order[j]);
  }
  return out;
}

/// Nonnegative, descending; min(rows, cols) values taken as square roots of
/// the spectrum of the smaller Gram product.
inline Vector singular_values(const Matrix& a, const Tolerances& tol = {}) {
  const Matrix gram = a.rows() <= a.cols() ? multiply_transposed(a, a)
                                           : multiply_transposed(a.transpose(), a.transpose());
  auto eig = sym_eigen(gram, tol);
  for (double& x : eig.eigenvalues) x = std::sqrt(std::max(0.0, x));
  return eig.eigenvalues;
}

}  // namespace subangle
