#include <cmath>

#include <gtest/gtest.h>

#include "optrig/decomposition.hpp"
#include "optrig/fixtures.hpp"

using namespace optrig;

namespace
{

CMatrix mat2(Complex a, Complex b, Complex c, Complex d)
{
  CMatrix m(2, 2);
  m << a, b, c, d;
  return m;
}

OperatorOnSpace op2(const CMatrix &m) { return OperatorOnSpace(SpaceSpec(2, 2.0), m); }

}  // namespace

TEST(Oracle, DiagonalProjection)
{
  const auto d = complementarity_oracle(op2(mat2(1, 0, 0, 0)));
  ASSERT_TRUE(d.complementary);
  EXPECT_LE(max_abs(CMatrix(d.projection_P->entries() - mat2(1, 0, 0, 0))), 1e-12);
  EXPECT_LE(max_abs(CMatrix(d.factor_S->entries() - CMatrix::Identity(2, 2))), 1e-12);
  EXPECT_EQ(d.sum_dimension, 2);
  EXPECT_EQ(d.intersection_dimension, 0);
}

TEST(Oracle, Nilpotent)
{
  const auto d = complementarity_oracle(op2(mat2(0, 1, 0, 0)));
  EXPECT_FALSE(d.complementary);
  EXPECT_EQ(d.intersection_dimension, 1);
  EXPECT_EQ(d.rank, 1);
  EXPECT_EQ(d.rank_squared, 0);
  EXPECT_FALSE(d.projection_P.has_value());
  EXPECT_FALSE(d.factor_S.has_value());
}

TEST(Oracle, ObliqueProjection)
{
  const auto d = complementarity_oracle(op2(mat2(1, 1, 0, 0)));
  ASSERT_TRUE(d.complementary);
  EXPECT_LE(max_abs(CMatrix(d.projection_P->entries() - mat2(1, 1, 0, 0))), 1e-12);
  EXPECT_LE(max_abs(CMatrix(d.factor_S->entries() - CMatrix::Identity(2, 2))), 1e-12);
  ASSERT_EQ(d.kernel_basis.size(), 1);
  const CVector k = d.kernel_basis.vectors.col(0);
  EXPECT_NEAR(std::abs(k(0) + k(1)), 0.0, 1e-12);
}

TEST(Oracle, ZeroAndIdentity)
{
  const auto z = complementarity_oracle(OperatorOnSpace::zero(SpaceSpec(3, 2.0)));
  ASSERT_TRUE(z.complementary);
  EXPECT_LE(max_abs(z.projection_P->entries()), 1e-15);
  const auto i = complementarity_oracle(OperatorOnSpace::identity(SpaceSpec(3, 3.0)));
  ASSERT_TRUE(i.complementary);
  EXPECT_LE(max_abs(CMatrix(i.projection_P->entries() - CMatrix::Identity(3, 3))), 1e-12);
}

TEST(Oracle, MatchesConstructionLabelsAndFactorizes)
{
  // Labels come from the Jordan structure used to build each matrix, not
  // from any rank computation.
  std::mt19937_64 rng(21);
  int complementary = 0;
  for (int k = 0; k < 500; k++)
  {
    const auto f = fixtures::random_mixed(rng);
    const auto a = f.op();
    const auto d = complementarity_oracle(a);
    ASSERT_EQ(d.complementary, f.expected_complementary) << f.name << " #" << k;
    EXPECT_EQ(d.complementary, d.intersection_dimension == 0 && d.sum_dimension == a.dim());
    EXPECT_EQ(d.complementary, d.rank_squared == d.rank);
    if (!d.complementary)
    {
      continue;
    }
    complementary++;
    const CMatrix &p = d.projection_P->entries();
    const CMatrix &s = d.factor_S->entries();
    EXPECT_LE(max_abs(CMatrix(s * p - a.entries())), 1e-8);
    EXPECT_LE(max_abs(CMatrix(p * p - p)), 1e-8);
    EXPECT_LE(max_abs(CMatrix(p * s - s * p)), 1e-8);
    EXPECT_EQ(rank_profile(s).rank, a.dim());
    const CMatrix &kb = d.kernel_basis.vectors;
    EXPECT_LE(max_abs(CMatrix(s * kb - kb)), 1e-8);
  }
  EXPECT_GT(complementary, 100);
}

TEST(Oracle, CuratedLabels)
{
  for (const auto &f : fixtures::curated_suite())
  {
    EXPECT_EQ(complementarity_oracle(f.op()).complementary, f.expected_complementary) << f.name;
  }
}

TEST(Oracle, TolerancePathologyIsReported)
{
  // sigma = 1e-7 survives the rank tolerance but its square does not, so the
  // two tests disagree instead of silently picking a verdict.
  EXPECT_THROW(complementarity_oracle(op2(mat2(1, 0, 0, 1e-7))), InternalInconsistency);
  EXPECT_TRUE(complementarity_oracle(op2(mat2(1, 0, 0, 1e-7)), 1e-3).complementary);
}

TEST(SumClosedness, Examples)
{
  const auto full = OperatorOnSpace::identity(SpaceSpec(2, 2.0));
  EXPECT_TRUE(std::isinf(sum_closedness_constant(full, full, 100)));

  const auto diag = op2(mat2(1, 0, 0, 0));
  const double c = sum_closedness_constant(diag, full, 2000);
  EXPECT_GE(c, 1.0 - 1e-12);
  EXPECT_LE(c, 1.0 + 1e-3);

  const auto obl = op2(mat2(1, 1, 0, 0));
  const double delta = 1.0 + angle(obl, full).cosine;
  EXPECT_GE(sum_closedness_constant(obl, full, 5000), delta / 2.0 - 1e-9);
}
