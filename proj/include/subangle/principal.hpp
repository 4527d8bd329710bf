#pragma once

// Principal values (squared cosines of the principal angles), the paired
// orthogonal decomposition of two subspaces into principal subspaces, and the
// bookkeeping that relates a pair to the pair of its orthogonal complements.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <optional>
#include <vector>

#include "config.hpp"
#include "error.hpp"
#include "matcore.hpp"
#include "matrix.hpp"
#include "subspace.hpp"

namespace subangle {

/// Distinct principal values c^2 in [0,1], strictly descending, with
/// multiplicities. `total` is the sum of the multiplicities.
struct PrincipalSpectrum {
  std::vector<double> values;
  std::vector<std::size_t> multiplicities;
  std::size_t total = 0;

  /// Multiplicity of an exact value (0 when absent). Values snapped to 0 or 1
  /// are stored exactly, so this is the way to count them.
  std::size_t multiplicity_of(double v) const {
    for (std::size_t i = 0; i < values.size(); ++i)
      if (values[i] == v) return multiplicities[i];
    return 0;
  }

  /// Every value repeated by its multiplicity, descending.
  std::vector<double> expanded() const {
    std::vector<double> out;
    for (std::size_t i = 0; i < values.size(); ++i) out.insert(out.end(), multiplicities[i], values[i]);
    return out;
  }
};

namespace detail {

/// Groups of consecutive indices of a descending sequence; neighbours closer
/// than `tol` share a group.
inline std::vector<std::vector<std::size_t>> cluster_runs(const std::vector<double>& desc, double tol) {
  std::vector<std::vector<std::size_t>> groups;
  for (std::size_t i = 0; i < desc.size(); ++i) {
    if (groups.empty() || std::abs(desc[i - 1] - desc[i]) > tol) groups.emplace_back();
    groups.back().push_back(i);
  }
  return groups;
}

inline double snap_unit(double v, double tol) {
  v = std::clamp(v, 0.0, 1.0);
  if (v <= tol) return 0.0;
  if (v >= 1.0 - tol) return 1.0;
  return v;
}

inline PrincipalSpectrum spectrum_from_groups(const std::vector<double>& desc,
                                              const std::vector<std::vector<std::size_t>>& groups) {
  PrincipalSpectrum s;
  for (const auto& g : groups) {
    double sum = 0.0;
    bool has_one = false, has_zero = false;
    for (std::size_t i : g) {
      sum += desc[i];
      has_one |= desc[i] == 1.0;
      has_zero |= desc[i] == 0.0;
    }
    s.values.push_back(has_one ? 1.0 : has_zero ? 0.0 : sum / static_cast<double>(g.size()));
    s.multiplicities.push_back(g.size());
    s.total += g.size();
  }
  return s;
}

}  // namespace detail

/// Clamp to [0,1], snap values near 0 or 1, sort descending and merge values
/// closer than Tolerances::cluster into one principal value.
inline PrincipalSpectrum cluster_principal_values(std::vector<double> raw, const Tolerances& tol = {}) {
  for (double& v : raw) v = detail::snap_unit(v, tol.cluster);
  std::sort(raw.begin(), raw.end(), std::greater<>());
  return detail::spectrum_from_groups(raw, detail::cluster_runs(raw, tol.cluster));
}

/// f(A1, A2) = A1 A2^T (A2 A2^T)^-1 A2 A1^T (A1 A1^T)^-1, inverses applied by
/// Cholesky solves. Both inputs must have full row rank.
inline Matrix f_matrix(const Matrix& a1, const Matrix& a2, const Tolerances& tol = {}) {
  if (a1.cols() != a2.cols()) throw MathError("f_matrix: ambient dimension mismatch");
  if (orthonormalize(a1, tol).rank != a1.rows()) throw MathError("f_matrix: first basis is rank deficient");
  if (orthonormalize(a2, tol).rank != a2.rows()) throw MathError("f_matrix: second basis is rank deficient");
  const Matrix g1 = multiply_transposed(a1, a1);
  const Matrix g2 = multiply_transposed(a2, a2);
  const Matrix right = solve_spd(g2, multiply_transposed(a2, a1));  // (A2A2^T)^-1 A2 A1^T
  const Matrix t = multiply(multiply_transposed(a1, a2), right);
  // t (A1A1^T)^-1 == ((A1A1^T)^-1 t^T)^T since the Gram matrix is symmetric.
  return solve_spd(g1, t.transpose()).transpose();
}

namespace detail {

struct OrderedPair {
  const Subspace* small;
  const Subspace* large;
  bool swapped;
};

inline OrderedPair order_pair(const Subspace& s1, const Subspace& s2, const char* op) {
  require_same_ambient(s1, s2, op);
  const bool swap = s1.dim() > s2.dim();
  return {swap ? &s2 : &s1, swap ? &s1 : &s2, swap};
}

/// Eigen-decomposition of M M^T, M = B1 B2^T, for orthonormal bases.
inline EigenPair cross_eigen(const Subspace& a, const Subspace& b, const Tolerances& tol) {
  const Matrix m = multiply_transposed(a.ortho_basis(), b.ortho_basis());
  return sym_eigen(symmetrize(multiply_transposed(m, m)), tol);
}

}  // namespace detail

/// Principal values of a pair: the spectrum of f on orthonormal bases of the
/// pair ordered so that p <= q, clustered into distinct values.
inline PrincipalSpectrum principal_spectrum(const Subspace& s1, const Subspace& s2,
                                            const Tolerances& tol = {}) {
  const auto ord = detail::order_pair(s1, s2, "principal_spectrum");
  const Matrix f = f_matrix(ord.small->ortho_basis(), ord.large->ortho_basis(), tol);
  return cluster_principal_values(sym_eigen(symmetrize(f), tol).eigenvalues, tol);
}

/// One principal value and the matched principal subspaces of both inputs.
struct PrincipalPair {
  double value;
  Subspace first;
  Subspace second;
};

/// Orthogonal decomposition of both subspaces into principal subspaces.
///
/// `pairs` follow the spectrum order. When the dimensions differ, the
/// |p - q| directions of the larger subspace that are orthogonal to the
/// smaller one and not matched by a zero principal value are kept in
/// `unmatched`; `unmatched_owner` says which input (1 or 2) they belong to.
struct PrincipalDecomposition {
  PrincipalSpectrum spectrum;
  std::vector<PrincipalPair> pairs;
  std::optional<Subspace> unmatched;
  int unmatched_owner = 0;
  bool swapped = false;
};

inline PrincipalDecomposition principal_decomposition(const Subspace& s1, const Subspace& s2,
                                                      const Tolerances& tol = {}) {
  const auto ord = detail::order_pair(s1, s2, "principal_decomposition");
  const Subspace& a = *ord.small;
  const Subspace& b = *ord.large;
  const std::size_t n = a.ambient_dim();
  const std::size_t q = b.dim();
  const Matrix& b2 = b.ortho_basis();

  const EigenPair eig = detail::cross_eigen(a, b, tol);
  std::vector<double> vals = eig.eigenvalues;
  for (double& v : vals) v = detail::snap_unit(v, tol.cluster);
  const auto groups = detail::cluster_runs(vals, tol.cluster);

  PrincipalDecomposition out;
  out.spectrum = detail::spectrum_from_groups(vals, groups);
  out.swapped = ord.swapped;

  // Rows of `principal` are the eigenvectors of f mapped into the small subspace.
  const Matrix principal = multiply(eig.eigenvectors.transpose(), a.ortho_basis());

  std::vector<Vector> matched_coords;  // images in the coordinates of b2
  std::optional<std::vector<std::size_t>> zero_group;
  for (std::size_t g = 0; g < groups.size(); ++g) {
    const double value = out.spectrum.values[g];
    if (value == 0.0) {
      zero_group = groups[g];
      continue;
    }
    std::vector<Vector> images;
    for (std::size_t i : groups[g]) {
      Vector coords = apply_row(principal.row(i), b2.transpose());
      const double len = norm(coords);
      for (double& c : coords) c /= len;
      images.push_back(apply_row(coords, b2));
      matched_coords.push_back(std::move(coords));
    }
    out.pairs.push_back({value, make_subspace(n, select_rows(principal, groups[g]), tol),
                         make_subspace(n, Matrix::from_rows(images), tol)});
  }

  // Directions of b orthogonal to every matched image.
  std::optional<Matrix> rest;
  if (matched_coords.size() < q) {
    const Matrix frame = matched_coords.empty()
                             ? Matrix::identity(q)
                             : complete_orthonormal(Matrix::from_rows(matched_coords));
    rest = multiply(frame.row_block(matched_coords.size(), q - matched_coords.size()), b2);
  }

  std::size_t used = 0;
  if (zero_group) {
    const std::size_t r = zero_group->size();
    out.pairs.push_back({0.0, make_subspace(n, select_rows(principal, *zero_group), tol),
                         make_subspace(n, rest->row_block(0, r), tol)});
    used = r;
  }
  if (rest && used < rest->rows()) {
    out.unmatched = make_subspace(n, rest->row_block(used, rest->rows() - used), tol);
    out.unmatched_owner = ord.swapped ? 1 : 2;
  }

  if (ord.swapped)
    for (auto& pair : out.pairs) std::swap(pair.first, pair.second);
  return out;
}

/// A unit vector of s1 with maximal squared cosine to s2, and that maximum.
struct MaxDirection {
  Vector direction;
  double value = 0.0;
};

inline MaxDirection max_angle_direction(const Subspace& s1, const Subspace& s2, const Tolerances& tol = {}) {
  require_same_ambient(s1, s2, "max_angle_direction");
  const EigenPair eig = detail::cross_eigen(s1, s2, tol);
  MaxDirection out;
  out.direction = apply_row(eig.eigenvectors.col_copy(0), s1.ortho_basis());
  const double len = norm(out.direction);
  for (double& x : out.direction) x /= len;
  out.value = detail::snap_unit(eig.eigenvalues[0], tol.cluster);
  return out;
}

/// Squared cosine of the angle between a nonzero vector and a subspace.
inline double cos2_to_subspace(std::span<const double> x, const Subspace& s) {
  const Vector coords = apply_row(x, s.ortho_basis().transpose());
  return dot(coords, coords) / dot(x, x);
}

/// Spectra of (s1, s2) and of their complements.
///
/// Values strictly inside (0,1) coincide with multiplicities, and the
/// multiplicity of 1 for the complements exceeds that for the pair by
/// n - p - q (negative when p + q > n). `consistent` records whether the
/// computed spectra obey both rules.
struct DualSpectra {
  PrincipalSpectrum pair;
  PrincipalSpectrum dual;
  long unit_mult_shift = 0;
  bool consistent = false;
};

inline DualSpectra dual_principal_values(const Subspace& s1, const Subspace& s2, const Tolerances& tol = {}) {
  require_same_ambient(s1, s2, "dual_principal_values");
  const std::size_t n = s1.ambient_dim();
  if (s1.dim() >= n || s2.dim() >= n)
    throw MathError("dual_principal_values: complement is zero space (p and q must be < n)");

  DualSpectra out;
  out.pair = principal_spectrum(s1, s2, tol);
  out.dual = principal_spectrum(orthogonal_complement(s1), orthogonal_complement(s2), tol);
  out.unit_mult_shift = static_cast<long>(n) - static_cast<long>(s1.dim()) - static_cast<long>(s2.dim());

  auto interior = [](const PrincipalSpectrum& s) {
    std::vector<std::pair<double, std::size_t>> v;
    for (std::size_t i = 0; i < s.values.size(); ++i)
      if (s.values[i] > 0.0 && s.values[i] < 1.0) v.emplace_back(s.values[i], s.multiplicities[i]);
    return v;
  };
  const auto ip = interior(out.pair);
  const auto id = interior(out.dual);
  bool ok = ip.size() == id.size();
  for (std::size_t i = 0; ok && i < ip.size(); ++i)
    ok = std::abs(ip[i].first - id[i].first) <= 1e-8 && ip[i].second == id[i].second;
  const long shift = static_cast<long>(out.dual.multiplicity_of(1.0)) -
                     static_cast<long>(out.pair.multiplicity_of(1.0));
  out.consistent = ok && shift == out.unit_mult_shift;
  return out;
}

}  // namespace subangle
