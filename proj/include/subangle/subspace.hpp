#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "config.hpp"
#include "error.hpp"
#include "matcore.hpp"
#include "matrix.hpp"

namespace subangle {

/// A linear subspace of R^n given by spanning row vectors.
///
/// Keeps the rows as supplied (`raw_basis`) together with an orthonormal
/// basis of their span (`ortho_basis`, dim x n). Immutable once built.
class Subspace {
 public:
  std::size_t ambient_dim() const noexcept { return ortho_.cols(); }
  std::size_t dim() const noexcept { return ortho_.rows(); }
  const Matrix& raw_basis() const noexcept { return raw_; }
  const Matrix& ortho_basis() const noexcept { return ortho_; }

  /// Raw rows are linearly independent (rank equals row count).
  bool raw_independent() const noexcept { return raw_.rows() == ortho_.rows(); }

  /// Orthogonal projector onto the subspace, n x n.
  Matrix projector() const { return multiply(ortho_.transpose(), ortho_); }

 private:
  Subspace(Matrix raw, Matrix ortho) : raw_(std::move(raw)), ortho_(std::move(ortho)) {}

  friend Subspace make_subspace(std::size_t, const Matrix&, const Tolerances&);

  Matrix raw_;
  Matrix ortho_;
};

inline Subspace make_subspace(std::size_t ambient_dim, const Matrix& spanning_rows,
                              const Tolerances& tol = {}) {
  if (spanning_rows.cols() != ambient_dim)
    throw MathError("make_subspace: row length " + std::to_string(spanning_rows.cols()) +
                    " does not match ambient dimension " + std::to_string(ambient_dim));
  auto on = orthonormalize(spanning_rows, tol);
  if (on.rank == 0) throw MathError("make_subspace: degenerate subspace (rank 0)");
  const Matrix gram = multiply_transposed(*on.basis, *on.basis);
  if (max_abs_diff(gram, Matrix::identity(on.rank)) > tol.orth)
    throw std::logic_error("make_subspace: orthonormalized basis fails the orthonormality check");
  return Subspace(spanning_rows, std::move(*on.basis));
}

/// Subspace spanned by the rows of `rows`; ambient dimension is the row length.
inline Subspace make_subspace(const Matrix& rows, const Tolerances& tol = {}) {
  return make_subspace(rows.cols(), rows, tol);
}

/// Outcome of the Gram-determinant angle between two subspaces.
///
/// cos_phi^2 * gamma1 * gamma2 == det_mmt. `swapped` is set when the pair was
/// reordered so that the first subspace has the smaller dimension.
struct AngleResult {
  double cos_phi = 0.0;
  double phi = 0.0;
  double det_mmt = 0.0;
  double gamma1 = 1.0;
  double gamma2 = 1.0;
  bool swapped = false;
};

inline void require_same_ambient(const Subspace& s1, const Subspace& s2, const char* op) {
  if (s1.ambient_dim() != s2.ambient_dim())
    throw MathError(std::string(op) + ": ambient dimension mismatch (" +
                    std::to_string(s1.ambient_dim()) + " vs " + std::to_string(s2.ambient_dim()) +
                    ")");
}

namespace detail {
inline const Matrix& chosen_basis(const Subspace& s, bool use_raw, const char* op) {
  if (use_raw && !s.raw_independent())
    throw MathError(std::string(op) + ": raw basis rows are linearly dependent");
  return use_raw ? s.raw_basis() : s.ortho_basis();
}
}  // namespace detail

/// Determinant of the Gram matrix of the selected basis, clamped at 0.
inline double gram_determinant(const Subspace& s, bool use_raw) {
  const Matrix& b = detail::chosen_basis(s, use_raw, "gram_determinant");
  return std::max(0.0, determinant(multiply_transposed(b, b)));
}

/// p x q matrix of inner products between the chosen bases of s1 and s2.
inline Matrix cross_gram(const Subspace& s1, const Subspace& s2, bool use_raw) {
  require_same_ambient(s1, s2, "cross_gram");
  return multiply_transposed(detail::chosen_basis(s1, use_raw, "cross_gram"),
                             detail::chosen_basis(s2, use_raw, "cross_gram"));
}

/// Angle from Gram determinants: cos phi = sqrt(det[M M^T]) / sqrt(G1 G2).
///
/// The pair is reordered so the first subspace is not larger, and orthonormal
/// bases are used (the ratio does not depend on the bases). The acute
/// representative phi in [0, pi/2] is returned.
inline AngleResult angle_between(const Subspace& s1, const Subspace& s2) {
  require_same_ambient(s1, s2, "angle_between");
  const bool swap = s1.dim() > s2.dim();
  const Subspace& a = swap ? s2 : s1;
  const Subspace& b = swap ? s1 : s2;

  const Matrix m = cross_gram(a, b, false);
  AngleResult r;
  r.swapped = swap;
  r.det_mmt = std::max(0.0, determinant(multiply_transposed(m, m)));
  r.gamma1 = gram_determinant(a, false);
  r.gamma2 = gram_determinant(b, false);
  r.cos_phi = std::clamp(std::sqrt(r.det_mmt) / (std::sqrt(r.gamma1) * std::sqrt(r.gamma2)), 0.0, 1.0);
  r.phi = std::acos(r.cos_phi);
  return r;
}

/// n - p dimensional orthogonal complement, read off a completed frame.
inline Subspace orthogonal_complement(const Subspace& s) {
  const std::size_t n = s.ambient_dim();
  if (s.dim() >= n) throw MathError("orthogonal_complement: complement is zero space");
  const Matrix frame = complete_orthonormal(s.ortho_basis());
  return make_subspace(n, frame.row_block(s.dim(), n - s.dim()));
}

/// Residual of the rows of s1's orthonormal basis after projecting onto s2.
inline double projector_residual(const Subspace& s1, const Subspace& s2) {
  require_same_ambient(s1, s2, "projector_residual");
  const Matrix& b1 = s1.ortho_basis();
  return max_abs_diff(b1, multiply(b1, s2.projector()));
}

/// Containment test. The projector residual ||B1 - B1 P2||_max decides; the
/// Gram-determinant criterion det[MM^T] == 1 (orthonormal bases) is checked
/// alongside and must agree whenever the residual test succeeds.
inline bool is_subspace_of(const Subspace& s1, const Subspace& s2, const Tolerances& tol = {}) {
  require_same_ambient(s1, s2, "is_subspace_of");
  if (s1.dim() > s2.dim()) return false;
  const bool by_projector = projector_residual(s1, s2) <= tol.containment;
  if (by_projector) {
    const Matrix m = cross_gram(s1, s2, false);
    const double det_mmt = determinant(multiply_transposed(m, m));
    if (std::abs(det_mmt - 1.0) > tol.containment)
      throw std::logic_error("is_subspace_of: projector and determinant criteria disagree");
  }
  return by_projector;
}

/// Orthogonal projection of x onto s through the bordered Gram determinant
///
///            | 0    (x,a1)  ...  (x,ak)  |
///   x' = -1/G| a1   (a1,a1) ...  (a1,ak) |
///            | ...                       |
///            | ak   (ak,a1) ...  (ak,ak) |
///
/// expanded along its vector-valued first column. Uses the raw basis, which
/// must be linearly independent.
inline Vector project_gram(std::span<const double> x, const Subspace& s) {
  const std::size_t n = s.ambient_dim();
  if (x.size() != n) throw MathError("project_gram: vector length does not match ambient dimension");
  if (!s.raw_independent()) throw MathError("project_gram: raw basis rows are linearly dependent");
  const Matrix& a = s.raw_basis();
  const std::size_t k = a.rows();

  // Scalar part of the bordered matrix, rows 0..k, columns 1..k.
  Matrix border(k + 1, k);
  for (std::size_t j = 0; j < k; ++j) border(0, j) = dot(x, a.row(j));
  for (std::size_t i = 0; i < k; ++i)
    for (std::size_t j = 0; j < k; ++j) border(i + 1, j) = dot(a.row(i), a.row(j));

  const double gamma = determinant(border.block(1, 0, k, k));
  if (gamma <= 0.0) throw MathError("project_gram: Gram determinant is not positive");

  // The (0,0) entry is the zero vector, so only rows 1..k contribute.
  Vector xp(n, 0.0);
  for (std::size_t i = 1; i <= k; ++i) {
    std::vector<std::size_t> keep;
    for (std::size_t r = 0; r <= k; ++r)
      if (r != i) keep.push_back(r);
    const double minor = determinant(select_rows(border, keep));
    const double cofactor = (i % 2 == 0 ? 1.0 : -1.0) * minor;
    for (std::size_t c = 0; c < n; ++c) xp[c] += cofactor * a(i - 1, c);
  }
  for (double& v : xp) v *= -1.0 / gamma;
  return xp;
}

}  // namespace subangle
