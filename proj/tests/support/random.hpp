#pragma once

// Seeded generators for property tests. Every generator takes the engine
// explicitly; no global state.

#include <cstddef>
#include <random>
#include <vector>

#include <subangle/matcore.hpp>
#include <subangle/subspace.hpp>

namespace subangle::gen {

using Rng = std::mt19937_64;

inline Matrix gaussian_matrix(Rng& rng, std::size_t rows, std::size_t cols, double scale = 1.0) {
  std::normal_distribution<double> dist(0.0, scale);
  Vector d(rows * cols);
  for (double& x : d) x = dist(rng);
  return Matrix(rows, cols, std::move(d));
}

inline Matrix uniform_matrix(Rng& rng, std::size_t rows, std::size_t cols, double lo = -1.0, double hi = 1.0) {
  std::uniform_real_distribution<double> dist(lo, hi);
  Vector d(rows * cols);
  for (double& x : d) x = dist(rng);
  return Matrix(rows, cols, std::move(d));
}

inline Matrix random_symmetric(Rng& rng, std::size_t n) {
  const Matrix g = gaussian_matrix(rng, n, n);
  return symmetrize(g);
}

/// Haar-ish orthogonal matrix: orthonormalized Gaussian rows.
inline Matrix random_orthogonal(Rng& rng, std::size_t n) {
  while (true) {
    auto on = orthonormalize(gaussian_matrix(rng, n, n));
    if (on.rank == n) return *on.basis;
  }
}

/// Invertible k x k matrix with condition kept moderate.
inline Matrix random_invertible(Rng& rng, std::size_t k) {
  while (true) {
    Matrix m = gaussian_matrix(rng, k, k) + 2.0 * Matrix::identity(k);
    const auto sv = singular_values(m);
    if (sv.back() > 0.1) return m;
  }
}

inline std::size_t uniform_int(Rng& rng, std::size_t lo, std::size_t hi) {
  return std::uniform_int_distribution<std::size_t>(lo, hi)(rng);
}

inline double uniform_real(Rng& rng, double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(rng);
}

/// Subspace spanned by p Gaussian rows (full rank with probability one).
inline Subspace random_subspace(Rng& rng, std::size_t n, std::size_t p) {
  while (true) {
    Matrix rows = gaussian_matrix(rng, p, n);
    auto s = make_subspace(n, rows);
    if (s.dim() == p) return s;
  }
}

/// Random unit vector.
inline Vector random_unit(Rng& rng, std::size_t n) {
  std::normal_distribution<double> dist(0.0, 1.0);
  Vector v(n);
  double len = 0.0;
  do {
    for (double& x : v) x = dist(rng);
    len = norm(v);
  } while (len < 1e-3);
  for (double& x : v) x /= len;
  return v;
}

/// Pair (s1, s2) of dimensions p, q that share `common` random directions,
/// which makes value 1 appear with multiplicity >= common.
inline std::pair<Subspace, Subspace> pair_with_common(Rng& rng, std::size_t n, std::size_t p, std::size_t q,
                                                      std::size_t common) {
  if (common == 0) return {random_subspace(rng, n, p), random_subspace(rng, n, q)};
  const Matrix shared = gaussian_matrix(rng, common, n);
  Matrix a = shared, b = shared;
  if (p > common) a = vstack(shared, gaussian_matrix(rng, p - common, n));
  if (q > common) b = vstack(shared, gaussian_matrix(rng, q - common, n));
  return {make_subspace(n, a), make_subspace(n, b)};
}

}  // namespace subangle::gen
