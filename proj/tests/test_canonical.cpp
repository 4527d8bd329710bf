#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include <subangle/canonical.hpp>

#include "support/oracles.hpp"
#include "support/random.hpp"

using namespace subangle;
using subangle::gen::Rng;

namespace {

std::pair<Subspace, Subspace> example_pair(double phi) {
  const double c = std::cos(phi), s = std::sin(phi);
  return {make_subspace(Matrix{{1, 0, 0, 0}, {0, 1, 0, 0}}), make_subspace(Matrix{{c, 0, s, 0}, {0, c, 0, s}})};
}

double orthogonality_error(const Matrix& p) {
  return max_abs_diff(multiply_transposed(p, p), Matrix::identity(p.rows()));
}

void expect_valid_form(const CanonicalForm& cf) {
  EXPECT_LE(orthogonality_error(cf.matrix), 1e-9);
  EXPECT_LE(max_abs_diff(inner_product_matrix(cf), cf.matrix), 1e-8);
  EXPECT_LE(orthogonality_error(frame_rows(cf)), 1e-9);
  EXPECT_LE(orthogonality_error(frame_cols(cf)), 1e-9);
}

// p squared values drawn with repeats, 1s and 0s sprinkled in.
std::vector<double> random_values(Rng& rng, std::size_t p) {
  std::vector<double> pool;
  const std::size_t distinct = gen::uniform_int(rng, 1, p);
  for (std::size_t i = 0; i < distinct; ++i) {
    const double u = gen::uniform_real(rng, 0.0, 1.0);
    pool.push_back(u < 0.15 ? 1.0 : u < 0.3 ? 0.0 : gen::uniform_real(rng, 0.02, 0.98));
  }
  std::vector<double> v(p);
  for (double& x : v) x = pool[gen::uniform_int(rng, 0, pool.size() - 1)];
  return v;
}

}  // namespace

TEST(CanonicalMatrix, TwoByTwoRotation) {
  const CanonicalSpec spec{2, 1, 1, 0, {0.5}, {1}, 0};
  const Matrix p = build_canonical_matrix(spec);
  const double d = std::sqrt(3.0) / 2;
  EXPECT_LE(max_abs_diff(p, Matrix{{0.5, d}, {-d, 0.5}}), 1e-15);
}

TEST(CanonicalMatrix, FourByFourBlock) {
  const double c = 0.3, d = std::sqrt(1 - c * c);
  const Matrix p = build_canonical_matrix(CanonicalSpec{4, 2, 2, 0, {c}, {2}, 0});
  const Matrix want{{c, 0, 0, d}, {0, c, d, 0}, {0, -d, c, 0}, {-d, 0, 0, c}};
  EXPECT_LE(max_abs_diff(p, want), 1e-15);
  EXPECT_LE(max_abs_diff(oracle::triple_loop_product(p, p.transpose()), Matrix::identity(4)), 1e-15);
}

TEST(CanonicalMatrix, CoincidentIsIdentity) {
  EXPECT_EQ(build_canonical_matrix(CanonicalSpec{6, 3, 3, 3, {}, {}, 0}), Matrix::identity(6));
}

TEST(CanonicalMatrix, BlockSizes) {
  const CanonicalSpec s{10, 3, 4, 1, {0.8}, {1}, 1};
  EXPECT_EQ(s.block_sizes(), (std::vector<std::size_t>{1, 1, 1, 1, 1, 1, 4}));
  EXPECT_EQ(s.r0_dual(), 4u);
}

TEST(CanonicalMatrix, RejectsBadSpecs) {
  EXPECT_THROW(build_canonical_matrix(CanonicalSpec{3, 2, 2, 2, {}, {}, 0}), MathError);      // p + q > n
  EXPECT_THROW(build_canonical_matrix(CanonicalSpec{4, 2, 2, 1, {}, {}, 0}), MathError);      // count
  EXPECT_THROW(build_canonical_matrix(CanonicalSpec{4, 2, 2, 0, {1.0}, {2}, 0}), MathError);  // c not interior
}

TEST(CanonicalMatrix, RandomSpecsAreOrthogonal) {
  Rng rng(71);
  for (int t = 0; t < 200; ++t) {
    const std::size_t n = gen::uniform_int(rng, 2, 9);
    const std::size_t p = gen::uniform_int(rng, 1, n / 2);
    const std::size_t q = gen::uniform_int(rng, p, n - p);
    const auto spec = make_canonical_spec(n, p, q, random_values(rng, p));
    EXPECT_LE(orthogonality_error(build_canonical_matrix(spec)), 1e-12);
  }
}

TEST(CanonicalBases, Example) {
  const double phi = std::numbers::pi / 3, c = 0.5, d = std::sqrt(3.0) / 2;
  const auto [s1, s2] = example_pair(phi);
  const auto cf = canonical_bases(s1, s2);
  EXPECT_FALSE(cf.dualized);
  ASSERT_EQ(cf.spec.cosines.size(), 1u);
  EXPECT_NEAR(cf.spec.cosines[0], c, 1e-12);
  const Matrix want{{c, 0, 0, d}, {0, c, d, 0}, {0, -d, c, 0}, {-d, 0, 0, c}};
  EXPECT_LE(max_abs_diff(cf.matrix, want), 1e-12);
  expect_valid_form(cf);
  EXPECT_LE(oracle::subspace_distance(cf.sigma, s1.ortho_basis()), 1e-12);
  EXPECT_LE(oracle::subspace_distance(cf.pi, s2.ortho_basis()), 1e-12);
}

TEST(CanonicalBases, CoincidentLines) {
  const auto e1 = make_subspace(Matrix{{1, 0, 0}});
  const auto cf = canonical_bases(e1, e1);
  EXPECT_EQ(cf.spec.r0, 1u);
  EXPECT_EQ(cf.spec.r0_dual(), 2u);
  EXPECT_LE(max_abs_diff(cf.matrix, Matrix::identity(3)), 1e-15);
  expect_valid_form(cf);
}

TEST(CanonicalBases, RandomSevenTwoThree) {
  Rng rng(72);
  for (int t = 0; t < 20; ++t) {
    const auto s1 = gen::random_subspace(rng, 7, 2), s2 = gen::random_subspace(rng, 7, 3);
    const auto cf = canonical_bases(s1, s2);
    expect_valid_form(cf);
    EXPECT_LE(oracle::subspace_distance(cf.sigma, s1.ortho_basis()), 1e-9);
    EXPECT_LE(oracle::subspace_distance(cf.pi, s2.ortho_basis()), 1e-9);
  }
}

TEST(CanonicalBases, RandomWithStructure) {
  Rng rng(73);
  for (int t = 0; t < 100; ++t) {
    const std::size_t n = gen::uniform_int(rng, 2, 8);
    const std::size_t p = gen::uniform_int(rng, 1, n - 1), q = gen::uniform_int(rng, 1, n - 1);
    const std::size_t common = gen::uniform_int(rng, 0, std::min(p, q));
    auto [s1, s2] = gen::pair_with_common(rng, n, p, q, common);
    const auto cf = canonical_bases(s1, s2);
    expect_valid_form(cf);
    EXPECT_EQ(cf.dualized, p + q > n);
  }
}

TEST(CanonicalBases, WholeSpaceWithOverlapIsRejected) {
  EXPECT_THROW(canonical_bases(make_subspace(Matrix::identity(3)), make_subspace(Matrix{{1, 0, 0}})), MathError);
}

TEST(DualPermutation, TwoByTwo) {
  const auto s1 = make_subspace(Matrix{{1, 0}});
  const auto s2 = make_subspace(Matrix{{0.5, std::sqrt(3.0) / 2}});
  const auto d = dual_permutation(canonical_bases(s1, s2));
  ASSERT_EQ(d.spec.cosines.size(), 1u);
  EXPECT_NEAR(d.spec.cosines[0] * d.spec.cosines[0], 0.75, 1e-12);
  EXPECT_LE(max_abs_diff(inner_product_matrix(d), d.matrix), 1e-12);
}

TEST(DualPermutation, CoincidentBecomesOrthogonal) {
  const auto s = make_subspace(Matrix{{1, 0, 0, 0}, {0, 1, 0, 0}});
  const auto d = dual_permutation(canonical_bases(s, s));
  EXPECT_EQ(d.spec.r0, 0u);
  EXPECT_EQ(d.spec.r_last, 2u);
  EXPECT_TRUE(d.spec.cosines.empty());
}

TEST(DualPermutation, MatchesComplementSpectrum) {
  Rng rng(74);
  for (int t = 0; t < 100; ++t) {
    const std::size_t n = gen::uniform_int(rng, 2, 8);
    const std::size_t p = gen::uniform_int(rng, 1, n / 2), q = gen::uniform_int(rng, p, n - p);
    auto [s1, s2] = gen::pair_with_common(rng, n, p, q, gen::uniform_int(rng, 0, p));
    const auto cf = canonical_bases(s1, s2);
    const auto d = dual_permutation(cf);
    // Interior values are 1 - c^2.
    ASSERT_EQ(d.spec.cosines.size(), cf.spec.cosines.size());
    for (std::size_t i = 0; i < cf.spec.cosines.size(); ++i) {
      const double c = cf.spec.cosines[cf.spec.cosines.size() - 1 - i];
      EXPECT_NEAR(d.spec.cosines[i] * d.spec.cosines[i], 1 - c * c, 1e-10);
    }
    EXPECT_LE(orthogonality_error(d.matrix), 1e-9);
    EXPECT_LE(max_abs_diff(inner_product_matrix(d), d.matrix), 1e-8);
    if (q < n) {
      const auto comp = principal_spectrum(s1, orthogonal_complement(s2));
      EXPECT_TRUE(oracle::same_multiset(comp.expanded(), d.spec.squared_values(), 1e-8));
    }
    const auto dd = dual_permutation(d);
    EXPECT_TRUE(oracle::same_multiset(dd.spec.squared_values(), cf.spec.squared_values(), 1e-10));
    EXPECT_EQ(dd.spec.q, cf.spec.q);
  }
}

TEST(Synthesize, ExampleRoundtrip) {
  const auto sp = synthesize_pair(4, 2, 2, {0.25, 0.25});
  const auto spec = principal_spectrum(sp.first, sp.second);
  ASSERT_EQ(spec.values.size(), 1u);
  EXPECT_NEAR(spec.values[0], 0.25, 1e-12);
  EXPECT_EQ(spec.multiplicities[0], 2u);
  EXPECT_NEAR(angle_between(sp.first, sp.second).cos_phi, 0.25, 1e-12);
}

TEST(Synthesize, AllOnesIsContainment) {
  const auto sp = synthesize_pair(5, 2, 3, {1.0, 1.0});
  EXPECT_TRUE(is_subspace_of(sp.first, sp.second));
}

TEST(Synthesize, LineAndPlane) {
  const auto sp = synthesize_pair(3, 1, 2, {0.49});
  EXPECT_EQ(sp.first.dim(), 1u);
  EXPECT_EQ(sp.second.dim(), 2u);
  const auto spec = principal_spectrum(sp.first, sp.second);
  EXPECT_NEAR(spec.values[0], 0.49, 1e-12);
}

TEST(Synthesize, Errors) {
  EXPECT_THROW(synthesize_pair(3, 2, 1, {0.5, 0.5}), MathError);
  EXPECT_THROW(synthesize_pair(3, 1, 1, {0.5, 0.5}), MathError);
  EXPECT_THROW(synthesize_pair(3, 1, 1, {1.5}), MathError);
  // Two planes in R^3 always meet in a line.
  EXPECT_THROW(synthesize_pair(3, 2, 2, {0.5, 0.5}), MathError);
  EXPECT_NO_THROW(synthesize_pair(3, 2, 2, {1.0, 0.5}));
}

TEST(Synthesize, RoundtripAndUniqueness) {
  Rng rng(75);
  for (int t = 0; t < 100; ++t) {
    const std::size_t n = gen::uniform_int(rng, 2, 8);
    const std::size_t p = gen::uniform_int(rng, 1, n), q = gen::uniform_int(rng, p, n);
    auto values = random_values(rng, p);
    const std::size_t overlap = p + q > n ? p + q - n : 0;
    for (std::size_t i = 0; i < overlap; ++i) values[i] = 1.0;
    const auto sp = synthesize_pair(n, p, q, values);
    ASSERT_EQ(sp.first.dim(), p);
    ASSERT_EQ(sp.second.dim(), q);
    EXPECT_TRUE(oracle::same_multiset(principal_spectrum(sp.first, sp.second).expanded(),
                                      cluster_principal_values(values).expanded(), 1e-8));
    if (q == n) continue;

    // A rotated copy has the same values; the map built from canonical bases
    // must carry both subspaces onto the copies.
    const Matrix r = gen::random_orthogonal(rng, n);
    const auto t1 = make_subspace(multiply(sp.first.ortho_basis(), r));
    const auto t2 = make_subspace(multiply(sp.second.ortho_basis(), r));
    const Matrix u = motion_between(canonical_bases(sp.first, sp.second), canonical_bases(t1, t2));
    EXPECT_LE(orthogonality_error(u), 1e-9);
    EXPECT_LE(oracle::subspace_distance(multiply(sp.first.ortho_basis(), u), t1.ortho_basis()), 1e-8);
    EXPECT_LE(oracle::subspace_distance(multiply(sp.second.ortho_basis(), u), t2.ortho_basis()), 1e-8);
  }
}
