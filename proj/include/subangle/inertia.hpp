#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <string>

#include "config.hpp"
#include "error.hpp"
#include "matcore.hpp"
#include "matrix.hpp"
#include "subspace.hpp"

namespace subangle {

/// Negative-eigenvalue counts of A on E_n, of A restricted to L, and of A^-1
/// restricted to the orthogonal complement of L.
struct InertiaReport {
  std::size_t ind_full = 0;
  std::size_t ind_restricted = 0;
  std::size_t ind_complement = 0;
  bool additivity_holds = false;
};

namespace detail {

inline void require_symmetric_on(const Matrix& a, const Subspace& l, const char* op, const Tolerances& tol) {
  if (!a.square()) throw MathError(std::string(op) + ": matrix is not square");
  if (a.rows() != l.ambient_dim())
    throw MathError(std::string(op) + ": matrix order does not match ambient dimension");
  if (!is_symmetric(a, tol.symmetry)) throw MathError(std::string(op) + ": matrix is not symmetric");
}

/// V A V^T for the orthonormal basis rows V of l.
inline Matrix restriction(const Matrix& a, const Subspace& l) {
  const Matrix& v = l.ortho_basis();
  return symmetrize(multiply(multiply(v, a), v.transpose()));
}

inline std::size_t count_negative(const Vector& eigenvalues, double zero, const char* what) {
  std::size_t neg = 0;
  for (double x : eigenvalues) {
    if (std::abs(x) <= zero) throw MathError(std::string(what));
    if (x < 0.0) ++neg;
  }
  return neg;
}

inline double zero_threshold(const Matrix& a, const Tolerances& tol) { return tol.zero * a.max_abs(); }

}  // namespace detail

/// ind(A|L): negative eigenvalues of the restriction of A to L. A restriction
/// with an eigenvalue within tau_zero = Tolerances::zero * ||A||_max of zero is
/// singular and rejected.
inline std::size_t restricted_index(const Matrix& a, const Subspace& l, const Tolerances& tol = {}) {
  detail::require_symmetric_on(a, l, "restricted_index", tol);
  const auto eig = sym_eigen(detail::restriction(a, l), tol);
  return detail::count_negative(eig.eigenvalues, detail::zero_threshold(a, tol),
                                "restricted_index: singular restriction");
}

/// Computes ind(A|E_n), ind(A|L) and ind(A^-1|L*) independently and records
/// whether ind(A|E_n) = ind(A|L) + ind(A^-1|L*).
inline InertiaReport inertia_split(const Matrix& a, const Subspace& l, const Tolerances& tol = {}) {
  detail::require_symmetric_on(a, l, "inertia_split", tol);
  InertiaReport r;
  const auto full = sym_eigen(a, tol);
  r.ind_full = detail::count_negative(full.eigenvalues, detail::zero_threshold(a, tol),
                                      "inertia_split: matrix is singular");
  const Matrix a_inv = symmetrize(inverse(a));
  if (l.dim() < l.ambient_dim())
    r.ind_complement = restricted_index(a_inv, orthogonal_complement(l), tol);
  r.ind_restricted = restricted_index(a, l, tol);
  r.additivity_holds = r.ind_full == r.ind_restricted + r.ind_complement;
  return r;
}

/// True iff A is positive definite on L and A^-1 is positive definite on L*
/// (both by Cholesky). A true answer is confirmed against the spectrum of A.
inline bool positive_definite_by_split(const Matrix& a, const Subspace& l, const Tolerances& tol = {}) {
  detail::require_symmetric_on(a, l, "positive_definite_by_split", tol);
  if (l.dim() >= l.ambient_dim())
    throw MathError("positive_definite_by_split: L must be a proper subspace");
  if (!cholesky(detail::restriction(a, l))) return false;

  const double zero = detail::zero_threshold(a, tol);
  const auto eig = sym_eigen(a, tol);
  if (std::any_of(eig.eigenvalues.begin(), eig.eigenvalues.end(),
                  [&](double x) { return std::abs(x) <= zero; }))
    throw MathError("positive_definite_by_split: matrix is singular");
  const Matrix a_inv = symmetrize(inverse(a));
  if (!cholesky(detail::restriction(a_inv, orthogonal_complement(l)))) return false;

  if (eig.eigenvalues.back() <= zero)
    throw std::logic_error("positive_definite_by_split: split criterion held but matrix is not positive definite");
  return true;
}

}  // namespace subangle
