#pragma once

// Canonical form of a pair of subspaces (Sigma, Pi) of R^n together with
// their orthogonal complements. With p = dim Sigma <= q = dim Pi and
// p + q <= n, ordered orthonormal bases of Sigma, Sigma*, Pi and Pi* make the
// matrix of all n x n inner products equal to one fixed orthogonal block
// matrix determined only by the principal values.
//
// Block order of rows and columns:
//   r0, r1 .. rs, r_last, q - p, r_last, rs .. r1, r0'      (r0' = r0 + n - p - q)
// Rows run over Sigma then Sigma* reversed; columns over Pi then Pi* reversed.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "config.hpp"
#include "error.hpp"
#include "matcore.hpp"
#include "matrix.hpp"
#include "principal.hpp"
#include "subspace.hpp"

namespace subangle {

/// Principal-value data that fixes the canonical matrix.
///
/// `cosines` are the distinct c_i strictly inside (0,1), descending, with
/// `multiplicities`; r0 counts c = 1 and r_last counts c = 0.
struct CanonicalSpec {
  std::size_t n = 0;
  std::size_t p = 0;
  std::size_t q = 0;
  std::size_t r0 = 0;
  std::vector<double> cosines;
  std::vector<std::size_t> multiplicities;
  std::size_t r_last = 0;

  std::size_t gap() const { return q - p; }
  std::size_t r0_dual() const { return r0 + n - p - q; }
  std::size_t groups() const { return cosines.size(); }
  double sine(std::size_t i) const { return std::sqrt(1.0 - cosines[i] * cosines[i]); }

  /// Squared principal values with multiplicity, descending.
  std::vector<double> squared_values() const {
    std::vector<double> v(r0, 1.0);
    for (std::size_t i = 0; i < cosines.size(); ++i)
      v.insert(v.end(), multiplicities[i], cosines[i] * cosines[i]);
    v.insert(v.end(), r_last, 0.0);
    return v;
  }

  /// Block sizes in row (and column) order of the canonical matrix.
  std::vector<std::size_t> block_sizes() const {
    std::vector<std::size_t> b{r0};
    b.insert(b.end(), multiplicities.begin(), multiplicities.end());
    b.push_back(r_last);
    b.push_back(gap());
    b.push_back(r_last);
    b.insert(b.end(), multiplicities.rbegin(), multiplicities.rend());
    b.push_back(r0_dual());
    return b;
  }
};

/// Every violated rule of the block layout, empty when the spec is usable.
inline std::vector<std::string> spec_violations(const CanonicalSpec& s) {
  std::vector<std::string> v;
  if (s.p < 1) v.emplace_back("p >= 1");
  if (s.p > s.q) v.emplace_back("p <= q");
  if (s.q > s.n) v.emplace_back("q <= n");
  if (s.p + s.q > s.n) v.emplace_back("p + q <= n (dualize the pair first)");
  if (s.cosines.size() != s.multiplicities.size()) v.emplace_back("one multiplicity per cosine");
  std::size_t sum = s.r0 + s.r_last;
  for (std::size_t m : s.multiplicities) {
    if (m == 0) v.emplace_back("multiplicities >= 1");
    sum += m;
  }
  if (sum != s.p) v.emplace_back("r0 + sum(r_i) + r_last == p");
  for (std::size_t i = 0; i < s.cosines.size(); ++i) {
    if (!(s.cosines[i] > 0.0 && s.cosines[i] < 1.0)) v.emplace_back("cosines inside (0,1)");
    if (i > 0 && !(s.cosines[i] < s.cosines[i - 1])) v.emplace_back("cosines strictly descending");
  }
  return v;
}

inline void validate_spec(const CanonicalSpec& s) {
  const auto v = spec_violations(s);
  if (v.empty()) return;
  std::string msg = "canonical spec violates:";
  for (const auto& e : v) msg += " [" + e + "]";
  throw MathError(msg);
}

/// Spec from p squared principal values, clustered like principal_spectrum.
inline CanonicalSpec make_canonical_spec(std::size_t n, std::size_t p, std::size_t q,
                                         const std::vector<double>& squared_values,
                                         const Tolerances& tol = {}) {
  if (squared_values.size() != p)
    throw MathError("canonical spec: expected " + std::to_string(p) + " values, got " +
                    std::to_string(squared_values.size()));
  for (double v : squared_values)
    if (!(v >= 0.0 && v <= 1.0)) throw MathError("canonical spec: squared value outside [0,1]");
  const PrincipalSpectrum ps = cluster_principal_values(squared_values, tol);
  CanonicalSpec s{n, p, q, 0, {}, {}, 0};
  for (std::size_t i = 0; i < ps.values.size(); ++i) {
    if (ps.values[i] == 1.0) {
      s.r0 = ps.multiplicities[i];
    } else if (ps.values[i] == 0.0) {
      s.r_last = ps.multiplicities[i];
    } else {
      s.cosines.push_back(std::sqrt(ps.values[i]));
      s.multiplicities.push_back(ps.multiplicities[i]);
    }
  }
  return s;
}

namespace detail {

inline void put_identity(Matrix& m, std::size_t r, std::size_t c, std::size_t k, double scale) {
  for (std::size_t i = 0; i < k; ++i) m(r + i, c + i) = scale;
}

inline void put_anti_identity(Matrix& m, std::size_t r, std::size_t c, std::size_t k, double scale) {
  for (std::size_t i = 0; i < k; ++i) m(r + i, c + k - 1 - i) = scale;
}

}  // namespace detail

/// The orthogonal canonical matrix P for a spec.
inline Matrix build_canonical_matrix(const CanonicalSpec& spec) {
  validate_spec(spec);
  const auto sizes = spec.block_sizes();
  std::vector<std::size_t> off(sizes.size() + 1, 0);
  for (std::size_t i = 0; i < sizes.size(); ++i) off[i + 1] = off[i] + sizes[i];

  const std::size_t s = spec.groups();
  const std::size_t zero = s + 1, gap = s + 2, zero_star = s + 3, unit_star = 2 * s + 4;
  auto star = [&](std::size_t i) { return 2 * s + 4 - i; };  // block of group i (1-based) in the starred half

  Matrix m(spec.n, spec.n);
  detail::put_identity(m, off[0], off[0], sizes[0], 1.0);
  for (std::size_t i = 1; i <= s; ++i) {
    const double c = spec.cosines[i - 1];
    const double d = spec.sine(i - 1);
    const std::size_t k = sizes[i];
    detail::put_identity(m, off[i], off[i], k, c);
    detail::put_anti_identity(m, off[i], off[star(i)], k, d);
    detail::put_anti_identity(m, off[star(i)], off[i], k, -d);
    detail::put_identity(m, off[star(i)], off[star(i)], k, c);
  }
  detail::put_anti_identity(m, off[zero], off[zero_star], sizes[zero], 1.0);
  detail::put_identity(m, off[gap], off[gap], sizes[gap], 1.0);
  detail::put_anti_identity(m, off[zero_star], off[zero], sizes[zero_star], 1.0);
  detail::put_identity(m, off[unit_star], off[unit_star], sizes[unit_star], 1.0);
  return m;
}

/// Canonical bases of a pair. All four bases are stored in the order used to
/// build the canonical matrix (not reversed); `frame_rows` / `frame_cols`
/// produce the reversed stacking.
///
/// `dualized` is set when the complements were used because p + q > n,
/// `swapped` when the (possibly dualized) pair was reordered to p <= q.
/// `sigma` then spans the pair member of smaller dimension after those steps.
struct CanonicalForm {
  CanonicalSpec spec;
  Matrix matrix;
  Matrix sigma;
  Matrix sigma_star;
  Matrix pi;
  Matrix pi_star;
  bool dualized = false;
  bool swapped = false;
};

namespace detail {

inline Matrix reversed_rows(const Matrix& m) {
  std::vector<std::size_t> idx(m.rows());
  for (std::size_t i = 0; i < m.rows(); ++i) idx[i] = m.rows() - 1 - i;
  return select_rows(m, idx);
}

inline void append_rows(std::vector<Vector>& dst, const Matrix& src, std::size_t first, std::size_t count) {
  for (std::size_t i = 0; i < count; ++i) dst.push_back(src.row_copy(first + i));
}

inline void append_reversed(std::vector<Vector>& dst, const std::vector<Vector>& src) {
  dst.insert(dst.end(), src.rbegin(), src.rend());
}

}  // namespace detail

/// Orthonormal frame of R^n: Sigma rows, then Sigma* rows reversed.
inline Matrix frame_rows(const CanonicalForm& cf) {
  return vstack(cf.sigma, detail::reversed_rows(cf.sigma_star));
}

/// Orthonormal frame of R^n: Pi rows, then Pi* rows reversed.
inline Matrix frame_cols(const CanonicalForm& cf) {
  return vstack(cf.pi, detail::reversed_rows(cf.pi_star));
}

/// Inner products of the two frames; equals cf.matrix for a valid form.
inline Matrix inner_product_matrix(const CanonicalForm& cf) {
  return multiply_transposed(frame_rows(cf), frame_cols(cf));
}

/// Canonical bases and canonical matrix of a pair of subspaces.
///
/// The pair is normalized first: complements replace both members when
/// p + q > n, then the members are ordered so that p <= q. Basis vectors are
/// fixed in the order Sigma, Pi, Sigma*, Pi*.
inline CanonicalForm canonical_bases(const Subspace& s1, const Subspace& s2, const Tolerances& tol = {}) {
  require_same_ambient(s1, s2, "canonical_bases");
  const std::size_t n = s1.ambient_dim();

  std::optional<Subspace> c1, c2;
  const Subspace* a = &s1;
  const Subspace* b = &s2;
  const bool dualized = s1.dim() + s2.dim() > n;
  if (dualized) {
    if (s1.dim() == n || s2.dim() == n)
      throw MathError("canonical_bases: p + q > n and one member is the whole space");
    c1 = orthogonal_complement(s1);
    c2 = orthogonal_complement(s2);
    a = &*c1;
    b = &*c2;
  }
  const bool swapped = a->dim() > b->dim();
  if (swapped) std::swap(a, b);

  const std::size_t p = a->dim();
  const std::size_t q = b->dim();
  const Matrix& b2 = b->ortho_basis();

  const EigenPair eig = detail::cross_eigen(*a, *b, tol);
  std::vector<double> vals = eig.eigenvalues;
  for (double& v : vals) v = detail::snap_unit(v, tol.cluster);
  const auto runs = detail::cluster_runs(vals, tol.cluster);
  const PrincipalSpectrum ps = detail::spectrum_from_groups(vals, runs);
  const Matrix principal = multiply(eig.eigenvectors.transpose(), a->ortho_basis());

  CanonicalSpec spec{n, p, q, 0, {}, {}, 0};
  std::vector<Vector> sigma, pi_unit, pi_mid, sigma_star_mid, pi_star_mid, sigma_zero;
  std::vector<Vector> matched_coords;
  for (std::size_t g = 0; g < runs.size(); ++g) {
    const double value = ps.values[g];
    if (value == 1.0) spec.r0 = runs[g].size();
    if (value == 0.0) spec.r_last = runs[g].size();
    if (value > 0.0 && value < 1.0) {
      spec.cosines.push_back(std::sqrt(value));
      spec.multiplicities.push_back(runs[g].size());
    }
    for (std::size_t i : runs[g]) {
      Vector x = principal.row_copy(i);
      sigma.push_back(x);
      if (value == 0.0) {
        sigma_zero.push_back(x);
        continue;
      }
      Vector coords = apply_row(x, b2.transpose());
      const double c = norm(coords);
      for (double& v : coords) v /= c;
      Vector y = apply_row(coords, b2);
      matched_coords.push_back(std::move(coords));
      if (value == 1.0) {
        pi_unit.push_back(std::move(y));
        continue;
      }
      const double d = std::sqrt(std::max(0.0, 1.0 - c * c));
      Vector xs(n), ys(n);
      for (std::size_t k = 0; k < n; ++k) xs[k] = -(y[k] - c * x[k]) / d;
      for (std::size_t k = 0; k < n; ++k) ys[k] = d * x[k] + c * xs[k];
      pi_mid.push_back(std::move(y));
      sigma_star_mid.push_back(std::move(xs));
      pi_star_mid.push_back(std::move(ys));
    }
  }

  // Directions of Pi orthogonal to Sigma: r_last of them pair with the zero
  // block, the remaining q - p form the gap block.
  const std::size_t rest_dim = q - matched_coords.size();
  std::vector<Vector> sigma_star_zero, sigma_star_gap;
  if (rest_dim > 0) {
    const Matrix frame = matched_coords.empty() ? Matrix::identity(q)
                                                : complete_orthonormal(Matrix::from_rows(matched_coords));
    const Matrix rest = multiply(frame.row_block(matched_coords.size(), rest_dim), b2);
    detail::append_rows(sigma_star_zero, rest, 0, spec.r_last);
    detail::append_rows(sigma_star_gap, rest, spec.r_last, rest_dim - spec.r_last);
  }

  // Sigma* directions orthogonal to Pi as well: the leading r0' block.
  std::vector<Vector> known = sigma;
  known.insert(known.end(), sigma_star_mid.begin(), sigma_star_mid.end());
  known.insert(known.end(), sigma_star_zero.begin(), sigma_star_zero.end());
  known.insert(known.end(), sigma_star_gap.begin(), sigma_star_gap.end());
  std::vector<Vector> sigma_star_unit;
  if (spec.r0_dual() > 0) {
    const Matrix full = complete_orthonormal(Matrix::from_rows(known));
    detail::append_rows(sigma_star_unit, full, known.size(), spec.r0_dual());
  }

  std::vector<Vector> sigma_star = sigma_star_unit;
  sigma_star.insert(sigma_star.end(), sigma_star_mid.begin(), sigma_star_mid.end());
  sigma_star.insert(sigma_star.end(), sigma_star_zero.begin(), sigma_star_zero.end());
  sigma_star.insert(sigma_star.end(), sigma_star_gap.begin(), sigma_star_gap.end());

  std::vector<Vector> pi = pi_unit;
  pi.insert(pi.end(), pi_mid.begin(), pi_mid.end());
  pi.insert(pi.end(), sigma_star_zero.begin(), sigma_star_zero.end());
  detail::append_reversed(pi, sigma_star_gap);

  std::vector<Vector> pi_star = sigma_star_unit;
  pi_star.insert(pi_star.end(), pi_star_mid.begin(), pi_star_mid.end());
  pi_star.insert(pi_star.end(), sigma_zero.begin(), sigma_zero.end());

  Matrix matrix = build_canonical_matrix(spec);
  return CanonicalForm{std::move(spec),
                       std::move(matrix),
                       Matrix::from_rows(sigma),
                       Matrix::from_rows(sigma_star),
                       Matrix::from_rows(pi),
                       Matrix::from_rows(pi_star),
                       dualized,
                       swapped};
}

/// Canonical form of the pair (Sigma, Pi*) read off an existing form.
///
/// Principal values become 1 - c_i^2 with the same multiplicities, the blocks
/// of value 1 and value 0 trade places, and the gap q - p becomes n - p - q.
/// The bases are the old basis vectors regrouped; the Sigma* vectors of the
/// interior blocks change sign, so the new matrix is a signed permutation of
/// the old one.
inline CanonicalForm dual_permutation(const CanonicalForm& cf) {
  const CanonicalSpec& o = cf.spec;
  const std::size_t s = o.groups();

  CanonicalSpec d{o.n, o.p, o.n - o.q, o.r_last, {}, {}, o.r0};
  for (std::size_t i = s; i-- > 0;) {
    d.cosines.push_back(o.sine(i));
    d.multiplicities.push_back(o.multiplicities[i]);
  }

  // Offsets of the groups inside each stored basis.
  std::vector<std::size_t> mid_off(s + 1, 0);
  for (std::size_t i = 0; i < s; ++i) mid_off[i + 1] = mid_off[i] + o.multiplicities[i];
  const std::size_t mids = mid_off[s];
  const std::size_t r0d = o.r0_dual();

  auto rows = [](const Matrix& m, std::size_t first, std::size_t count) {
    std::vector<Vector> out;
    detail::append_rows(out, m, first, count);
    return out;
  };
  auto negated = [](std::vector<Vector> v) {
    for (auto& r : v)
      for (double& x : r) x = -x;
    return v;
  };
  auto join = [](std::vector<Vector>& dst, const std::vector<Vector>& src) {
    dst.insert(dst.end(), src.begin(), src.end());
  };

  // Old pieces. sigma: [unit r0 | mid | zero r_last]; sigma*: [unit r0' | mid | zero | gap];
  // pi: [unit | mid | zero | gap reversed]; pi*: [unit r0' | mid | zero].
  const auto a_unit = rows(cf.sigma, 0, o.r0);
  const auto a_zero = rows(cf.sigma, o.r0 + mids, o.r_last);
  const auto as_unit = rows(cf.sigma_star, 0, r0d);
  const auto as_zero = rows(cf.sigma_star, r0d + mids, o.r_last);
  const auto as_gap = rows(cf.sigma_star, r0d + mids + o.r_last, o.gap());

  std::vector<Vector> sigma = a_zero, pi = a_zero, sigma_star = as_zero, pi_star;
  join(sigma_star, as_gap);
  pi_star = sigma_star;  // new unit block of the complements: old Sigma* inside Pi
  std::vector<Vector> new_zero_star(as_unit.begin(), as_unit.begin() + static_cast<std::ptrdiff_t>(o.r0));
  std::vector<Vector> new_gap(as_unit.begin() + static_cast<std::ptrdiff_t>(o.r0), as_unit.end());

  for (std::size_t i = s; i-- > 0;) {
    const std::size_t k = o.multiplicities[i];
    join(sigma, rows(cf.sigma, o.r0 + mid_off[i], k));
    join(pi, rows(cf.pi_star, r0d + mid_off[i], k));
    join(sigma_star, negated(rows(cf.sigma_star, r0d + mid_off[i], k)));
    join(pi_star, rows(cf.pi, o.r0 + mid_off[i], k));
  }
  join(sigma, a_unit);
  join(pi, new_zero_star);
  detail::append_reversed(pi, new_gap);
  join(sigma_star, new_zero_star);
  join(sigma_star, new_gap);
  join(pi_star, a_unit);

  Matrix matrix = build_canonical_matrix(d);
  return CanonicalForm{std::move(d),
                       std::move(matrix),
                       Matrix::from_rows(sigma),
                       Matrix::from_rows(sigma_star),
                       Matrix::from_rows(pi),
                       Matrix::from_rows(pi_star),
                       cf.dualized,
                       cf.swapped};
}

/// Orthogonal map x -> x U carrying the row frame of `from` onto that of `to`.
/// For two forms with the same canonical matrix it also carries Pi onto Pi.
inline Matrix motion_between(const CanonicalForm& from, const CanonicalForm& to) {
  if (from.spec.n != to.spec.n) throw MathError("motion_between: ambient dimension mismatch");
  return multiply(frame_rows(from).transpose(), frame_rows(to));
}

/// A pair of subspaces realizing prescribed principal values.
struct SynthesizedPair {
  Subspace first;
  Subspace second;
  CanonicalSpec spec;  // spec of the normalized pair used for the construction
  bool dualized = false;
};

/// Build Sigma1 (dim p) and Sigma2 (dim q) in R^n whose principal values are
/// `squared_values`, using the axis frame as reference frame.
///
/// For p + q <= n, Sigma1 is spanned by the first p axes and Sigma2 by the
/// first q columns of the canonical matrix. For p + q > n the complementary
/// pair is built instead and complemented back; this needs value 1 with
/// multiplicity at least p + q - n, since such subspaces always intersect.
inline SynthesizedPair synthesize_pair(std::size_t n, std::size_t p, std::size_t q,
                                       const std::vector<double>& squared_values,
                                       const Tolerances& tol = {}) {
  if (p < 1 || p > q || q > n)
    throw MathError("synthesize_pair: requires 1 <= p <= q <= n");
  CanonicalSpec spec = make_canonical_spec(n, p, q, squared_values, tol);

  if (p + q <= n) {
    const Matrix m = build_canonical_matrix(spec);
    const Matrix axes = Matrix::identity(n);
    Subspace first = make_subspace(n, axes.row_block(0, p), tol);
    Subspace second = make_subspace(n, m.transpose().row_block(0, q), tol);
    return SynthesizedPair{std::move(first), std::move(second), std::move(spec), false};
  }

  const std::size_t overlap = p + q - n;
  if (spec.r0 < overlap)
    throw MathError("synthesize_pair: p + q > n forces value 1 with multiplicity >= " +
                    std::to_string(overlap));
  if (q == n) {
    // Sigma2 is the whole space, so every principal value is 1.
    const Matrix axes = Matrix::identity(n);
    return SynthesizedPair{make_subspace(n, axes.row_block(0, p), tol), make_subspace(n, axes, tol),
                           std::move(spec), true};
  }
  CanonicalSpec dual{n, n - q, n - p, spec.r0 - overlap, spec.cosines, spec.multiplicities, spec.r_last};
  const Matrix m = build_canonical_matrix(dual);
  const Matrix cols = m.transpose();
  const Matrix axes = Matrix::identity(n);
  Subspace first = make_subspace(n, cols.row_block(n - p, p), tol);       // complement of the dual Pi
  Subspace second = make_subspace(n, axes.row_block(n - q, q), tol);      // complement of the dual Sigma
  return SynthesizedPair{std::move(first), std::move(second), std::move(dual), true};
}

}  // namespace subangle
