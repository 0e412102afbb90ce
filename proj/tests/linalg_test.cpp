#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "ellipsoid/linalg.hpp"
#include "test_support.hpp"

namespace ellipsoid {
namespace {

using testing::Rng;
using testing::random_normal;
using testing::random_pd;

void expect_vector_near(const Vector& actual, const Vector& expected, double tol) {
  ASSERT_EQ(actual.size(), expected.size());
  for (std::size_t i = 0; i < actual.size(); ++i) EXPECT_NEAR(actual[i], expected[i], tol) << "entry " << i;
}

TEST(MatVec, IdentityDiagonalAndDense) {
  expect_vector_near(mat_vec(SymmetricMatrix::identity(3), Vector{1, 2, 3}), Vector{1, 2, 3}, 0.0);
  expect_vector_near(mat_vec(SymmetricMatrix::diagonal(Vector{4, 1}), Vector{1, 1}), Vector{4, 1}, 0.0);
  expect_vector_near(mat_vec(SymmetricMatrix{{2, 1}, {1, 2}}, Vector{1, -1}), Vector{1, -1}, 0.0);
}

TEST(MatVec, DimensionMismatchIsUsageError) {
  EXPECT_THROW(mat_vec(SymmetricMatrix::identity(2), Vector{1, 2, 3}), usage_error);
}

TEST(QuadraticForm, Examples) {
  EXPECT_DOUBLE_EQ(quadratic_form(SymmetricMatrix::identity(2), Vector{3, 4}), 25.0);
  EXPECT_DOUBLE_EQ(quadratic_form(SymmetricMatrix::diagonal(Vector{4, 1}), Vector{1, 1}), 5.0);
  EXPECT_EQ(quadratic_form(SymmetricMatrix{{2, 1}, {1, 2}}, Vector{0, 0}), 0.0);
  EXPECT_THROW(quadratic_form(SymmetricMatrix::identity(2), Vector{1}), usage_error);
}

TEST(QuadraticForm, BoundedBelowForPlantedPd) {
  Rng rng(11);
  const double delta = 0.25;
  for (int trial = 0; trial < 500; ++trial) {
    const std::size_t n = 1 + trial % 6;
    const SymmetricMatrix m = random_pd(n, rng, delta);
    const Vector v = random_normal(n, rng);
    EXPECT_GE(quadratic_form(m, v), delta * dot(v, v) - 1e-9);
  }
}

TEST(Rank1Downdate, Examples) {
  const SymmetricMatrix a = rank1_downdate(SymmetricMatrix::identity(2), Vector{1, 0}, 2.0 / 3.0);
  EXPECT_NEAR(a(0, 0), 1.0 / 3.0, 1e-15);
  EXPECT_EQ(a(0, 1), 0.0);
  EXPECT_EQ(a(1, 1), 1.0);

  const SymmetricMatrix m{{2, 1}, {1, 2}};
  EXPECT_EQ(rank1_downdate(m, Vector{5, 7}, 0.0), m);

  const SymmetricMatrix b = rank1_downdate(SymmetricMatrix::diagonal(Vector{4, 4}), Vector{2, 0}, 0.5);
  EXPECT_EQ(b, SymmetricMatrix::diagonal(Vector{2, 4}));
}

TEST(Rank1Downdate, RejectsNegativeBetaAndMismatch) {
  EXPECT_THROW(rank1_downdate(SymmetricMatrix::identity(2), Vector{1, 0}, -0.1), usage_error);
  EXPECT_THROW(rank1_downdate(SymmetricMatrix::identity(2), Vector{1, 0, 0}, 0.1), usage_error);
}

TEST(Rank1Downdate, OutputIsBitwiseSymmetric) {
  Rng rng(12);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t n = 2 + trial % 7;
    const SymmetricMatrix m = random_pd(n, rng);
    const SymmetricMatrix out = rank1_downdate(m, random_normal(n, rng), 0.01);
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) ASSERT_EQ(out(i, j), out(j, i));
    }
  }
}

TEST(Cholesky, Examples) {
  const auto l = cholesky(SymmetricMatrix::diagonal(Vector{4, 1}));
  ASSERT_TRUE(l);
  EXPECT_EQ((*l)(0, 0), 2.0);
  EXPECT_EQ((*l)(1, 0), 0.0);
  EXPECT_EQ((*l)(1, 1), 1.0);

  const auto id = cholesky(SymmetricMatrix::identity(4));
  ASSERT_TRUE(id);
  for (std::size_t i = 0; i < 4; ++i) {
    for (std::size_t j = 0; j < 4; ++j) EXPECT_EQ((*id)(i, j), i == j ? 1.0 : 0.0);
  }

  // Eigenvalues 3 and -1.
  EXPECT_FALSE(cholesky(SymmetricMatrix{{1, 2}, {2, 1}}));
}

TEST(Cholesky, PivotToleranceIsRelativeToOwnDiagonal) {
  // Badly scaled but exactly diagonal: fine.
  EXPECT_TRUE(cholesky(SymmetricMatrix::diagonal(Vector{1.0, 1e-30})));
  EXPECT_TRUE(cholesky(SymmetricMatrix::diagonal(Vector{1e-20, 1e-20})));
  // Rows nearly parallel: pivot / diagonal = 1 - c^2.
  EXPECT_FALSE(cholesky(SymmetricMatrix{{1.0, 1.0 - 1e-14}, {1.0 - 1e-14, 1.0}}));
  EXPECT_TRUE(cholesky(SymmetricMatrix{{1.0, 1.0 - 1e-9}, {1.0 - 1e-9, 1.0}}));
  EXPECT_FALSE(cholesky(SymmetricMatrix::diagonal(Vector{0.0, 0.0})));
  EXPECT_FALSE(cholesky(SymmetricMatrix::diagonal(Vector{1.0, std::nan("")})));
}

TEST(Cholesky, ReconstructsRandomPd) {
  Rng rng(13);
  for (int trial = 0; trial < 300; ++trial) {
    const std::size_t n = 1 + trial % 8;
    const SymmetricMatrix m = random_pd(n, rng);
    const auto l = cholesky(m);
    ASSERT_TRUE(l);
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) {
        double s = 0.0;
        for (std::size_t k = 0; k < n; ++k) s += (*l)(i, k) * (*l)(j, k);
        EXPECT_NEAR(s, m(i, j), 1e-10 * (1.0 + std::abs(m(i, j))));
      }
    }
  }
}

TEST(LogDetPd, Examples) {
  EXPECT_EQ(log_det_pd(SymmetricMatrix::identity(5)), 0.0);
  EXPECT_NEAR(log_det_pd(SymmetricMatrix::diagonal(Vector{4, 1})), std::log(4.0), 1e-15);
  const double e = std::exp(1.0);
  EXPECT_NEAR(log_det_pd(SymmetricMatrix::diagonal(Vector{e, e, e})), 3.0, 1e-15);
  EXPECT_THROW(log_det_pd(SymmetricMatrix{{1, 2}, {2, 1}}), not_pd_error);
}

TEST(SolvePd, Examples) {
  expect_vector_near(solve_pd(SymmetricMatrix::identity(2), Vector{5, 7}), Vector{5, 7}, 0.0);
  expect_vector_near(solve_pd(SymmetricMatrix::diagonal(Vector{4, 1}), Vector{8, 3}), Vector{2, 3}, 0.0);
  // [[2,1],[1,2]] (1,1) = (3,3).
  expect_vector_near(solve_pd(SymmetricMatrix{{2, 1}, {1, 2}}, Vector{3, 3}), Vector{1, 1}, 1e-15);
  EXPECT_THROW(solve_pd(SymmetricMatrix{{1, 2}, {2, 1}}, Vector{1, 1}), not_pd_error);
  EXPECT_THROW(solve_pd(SymmetricMatrix::identity(2), Vector{1}), usage_error);
}

TEST(SolvePd, ResidualIsSmall) {
  Rng rng(14);
  for (int trial = 0; trial < 300; ++trial) {
    const std::size_t n = 1 + trial % 8;
    const SymmetricMatrix m = random_pd(n, rng);
    const Vector rhs = random_normal(n, rng);
    const Vector y = solve_pd(m, rhs);
    const Vector r = mat_vec(m, y) - rhs;
    double rinf = 0.0;
    double binf = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      rinf = std::max(rinf, std::abs(r[i]));
      binf = std::max(binf, std::abs(rhs[i]));
    }
    EXPECT_LE(rinf, 1e-8 * (1.0 + binf));
  }
}

// det(M - b w w') = det(M) (1 - b w'M^{-1}w).
TEST(Rank1Downdate, MatrixDeterminantLemma) {
  Rng rng(15);
  for (int trial = 0; trial < 300; ++trial) {
    const std::size_t n = 2 + trial % 5;
    const SymmetricMatrix m = random_pd(n, rng, 0.5);
    const Vector w = random_normal(n, rng);
    const double wmw = dot(w, solve_pd(m, w));
    const double beta = 0.9 / wmw * std::uniform_real_distribution<double>(0.0, 1.0)(rng);
    const double lhs = log_det_pd(rank1_downdate(m, w, beta));
    const double rhs = log_det_pd(m) + std::log(1.0 - beta * wmw);
    EXPECT_NEAR(lhs, rhs, 1e-8);
  }
}

TEST(SymmetricMatrix, ConstructionRejectsAsymmetryAndRaggedRows) {
  EXPECT_THROW((SymmetricMatrix{{1, 2}, {3, 1}}), usage_error);
  EXPECT_THROW((SymmetricMatrix{{1, 2}, {2}}), usage_error);
  const SymmetricMatrix s = SymmetricMatrix::symmetrized(2, {1, 2, 4, 1});
  EXPECT_EQ(s(0, 1), 3.0);
  EXPECT_EQ(s(1, 0), 3.0);
}

}  // namespace
}  // namespace ellipsoid
