#include <gtest/gtest.h>

#include <cmath>

#include <subangle/inertia.hpp>

#include "support/oracles.hpp"
#include "support/random.hpp"

using namespace subangle;
using subangle::gen::Rng;

namespace {

std::size_t negatives(const Matrix& symmetric) {
  std::size_t k = 0;
  for (double x : sym_eigen(symmetric).eigenvalues)
    if (x < 0.0) ++k;
  return k;
}

double min_abs_eigenvalue(const Matrix& symmetric) {
  double m = INFINITY;
  for (double x : sym_eigen(symmetric).eigenvalues) m = std::min(m, std::abs(x));
  return m;
}

// Restriction V^T A V with V the columns of `basis_rows`^T, via the triple loop.
Matrix restrict_oracle(const Matrix& a, const Matrix& basis_rows) {
  return symmetrize(oracle::triple_loop_product(oracle::triple_loop_product(basis_rows, a), basis_rows.transpose()));
}

// Symmetric nonsingular matrix with eigenvalues bounded away from zero.
Matrix random_indefinite(Rng& rng, std::size_t n) {
  const Matrix q = gen::random_orthogonal(rng, n);
  Vector d(n);
  for (double& x : d) x = (gen::uniform_real(rng, 0, 1) < 0.5 ? -1.0 : 1.0) * gen::uniform_real(rng, 0.2, 3.0);
  return symmetrize(multiply(multiply(q.transpose(), Matrix::diagonal(d)), q));
}

}  // namespace

TEST(RestrictedIndex, Examples) {
  Rng rng(81);
  EXPECT_EQ(restricted_index(Matrix::identity(4), gen::random_subspace(rng, 4, 2)), 0u);
  EXPECT_EQ(restricted_index(Matrix::diagonal(Vector{1, -1}), make_subspace(Matrix{{0, 1}})), 1u);
  const double h = 1 / std::sqrt(2.0);
  // (h,h) diag(-2,-3) (h,h)^T = -2.5
  EXPECT_EQ(restricted_index(Matrix::diagonal(Vector{-2, -3}), make_subspace(Matrix{{h, h}})), 1u);
}

TEST(RestrictedIndex, Errors) {
  EXPECT_THROW(restricted_index(Matrix{{1, 2}, {0, 1}}, make_subspace(Matrix{{1, 0}})), MathError);
  EXPECT_THROW(restricted_index(Matrix::identity(3), make_subspace(Matrix{{1, 0}})), MathError);
  const double h = 1 / std::sqrt(2.0);
  // Restriction of diag(1,-1) to the diagonal line is 0.
  EXPECT_THROW(restricted_index(Matrix::diagonal(Vector{1, -1}), make_subspace(Matrix{{h, h}})), MathError);
}

TEST(InertiaSplit, Examples) {
  const auto r = inertia_split(Matrix::diagonal(Vector{1, -1}), make_subspace(Matrix{{1, 0}}));
  EXPECT_EQ(r.ind_full, 1u);
  EXPECT_EQ(r.ind_restricted, 0u);
  EXPECT_EQ(r.ind_complement, 1u);
  EXPECT_TRUE(r.additivity_holds);

  const auto i = inertia_split(Matrix::identity(3), make_subspace(Matrix{{1, 2, 3}}));
  EXPECT_EQ(i.ind_full + i.ind_restricted + i.ind_complement, 0u);
  EXPECT_TRUE(i.additivity_holds);

  EXPECT_THROW(inertia_split(Matrix::diagonal(Vector{1, 0}), make_subspace(Matrix{{1, 0}})), MathError);
}

TEST(InertiaSplit, AdditivityOnRandomInputs) {
  Rng rng(82);
  int admissible = 0;
  for (int t = 0; t < 300 && admissible < 100; ++t) {
    const std::size_t n = gen::uniform_int(rng, 2, 7);
    const Matrix a = random_indefinite(rng, n);
    const auto l = gen::random_subspace(rng, n, gen::uniform_int(rng, 1, n - 1));
    const auto lc = orthogonal_complement(l);
    const Matrix ra = restrict_oracle(a, l.ortho_basis());
    const Matrix rc = restrict_oracle(oracle::gauss_jordan_inverse(a), lc.ortho_basis());
    const double tz = 1e-9 * a.max_abs();
    if (min_abs_eigenvalue(ra) <= 1e-6 || min_abs_eigenvalue(rc) <= 1e-6) continue;
    ++admissible;
    const auto r = inertia_split(a, l);
    EXPECT_EQ(r.ind_full, negatives(a));
    EXPECT_EQ(r.ind_restricted, negatives(ra));
    EXPECT_EQ(r.ind_complement, negatives(rc));
    EXPECT_TRUE(r.additivity_holds);

    // The matrix [A V | W] from the additivity argument is nonsingular.
    const Matrix av = oracle::triple_loop_product(a, l.ortho_basis().transpose());
    const Matrix w = lc.ortho_basis().transpose();
    Matrix b(n, n);
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < av.cols(); ++j) b(i, j) = av(i, j);
      for (std::size_t j = 0; j < w.cols(); ++j) b(i, av.cols() + j) = w(i, j);
    }
    EXPECT_GT(std::abs(determinant(b)), tz);
  }
  EXPECT_GE(admissible, 100);
}

TEST(PositiveDefiniteBySplit, Examples) {
  EXPECT_TRUE(positive_definite_by_split(Matrix::diagonal(Vector{2, 3}), make_subspace(Matrix{{1, 0}})));
  EXPECT_FALSE(positive_definite_by_split(Matrix::diagonal(Vector{1, -1}), make_subspace(Matrix{{1, 0}})));
  EXPECT_THROW(positive_definite_by_split(Matrix::identity(2), make_subspace(Matrix::identity(2))), MathError);
}

TEST(PositiveDefiniteBySplit, RandomSpd) {
  Rng rng(83);
  for (int t = 0; t < 50; ++t) {
    const Matrix g = gen::gaussian_matrix(rng, 5, 5);
    const Matrix a = symmetrize(multiply(g.transpose(), g) + 0.1 * Matrix::identity(5));
    const auto l = gen::random_subspace(rng, 5, gen::uniform_int(rng, 1, 4));
    EXPECT_TRUE(positive_definite_by_split(a, l));
  }
}

TEST(PositiveDefiniteBySplit, NeverTrueForIndefinite) {
  Rng rng(84);
  for (int t = 0; t < 100; ++t) {
    const std::size_t n = gen::uniform_int(rng, 2, 6);
    const Matrix a = random_indefinite(rng, n);
    const auto l = gen::random_subspace(rng, n, gen::uniform_int(rng, 1, n - 1));
    const double lo = sym_eigen(a).eigenvalues.back();
    if (positive_definite_by_split(a, l)) {
      EXPECT_GT(lo, 1e-9 * a.max_abs());
    }
  }
}
