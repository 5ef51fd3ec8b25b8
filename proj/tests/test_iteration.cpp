#include <cmath>

#include <gtest/gtest.h>

#include "optrig/fixtures.hpp"
#include "optrig/iteration.hpp"

using namespace optrig;

namespace
{

const SpaceSpec kPlane(2, 2.0);

CMatrix mat2(Complex a, Complex b, Complex c, Complex d)
{
  CMatrix m(2, 2);
  m << a, b, c, d;
  return m;
}

OperatorOnSpace op2(const CMatrix &m) { return OperatorOnSpace(kPlane, m); }

SubspaceBasis line(Complex a, Complex b)
{
  CMatrix v(2, 1);
  v << a, b;
  return SubspaceBasis{kPlane, v, false};
}

}  // namespace

TEST(AsymptoticRegularity, Examples)
{
  const auto proj = check_asymptotic_regularity(op2(mat2(1, 0, 0, 0)));
  EXPECT_TRUE(proj.regular);
  EXPECT_EQ(proj.residuals.front(), 0.0);

  const auto nil = check_asymptotic_regularity(op2(mat2(0, 1, 0, 0)));
  EXPECT_TRUE(nil.regular);
  ASSERT_GE(nil.residuals.size(), 2u);
  EXPECT_EQ(nil.residuals[1], 0.0);

  const auto flip = check_asymptotic_regularity(op2(-CMatrix::Identity(2, 2)), 1000);
  EXPECT_FALSE(flip.regular);
  EXPECT_EQ(flip.verdict, RegularityVerdict::NotRegular);
  for (double r : flip.residuals)
  {
    EXPECT_NEAR(r, 2.0, 1e-12);
  }
}

TEST(AsymptoticRegularity, SlowDecayIsInconclusive)
{
  const auto slow = check_asymptotic_regularity(op2(mat2(0.999, 0, 0, 0)), 50);
  EXPECT_EQ(slow.verdict, RegularityVerdict::Inconclusive);
}

TEST(IterateToLimit, DiagonalPrimitive)
{
  const auto rep = iterate_to_limit(op2(mat2(1, 0, 0, 0.5)));
  ASSERT_TRUE(rep.converged);
  EXPECT_FALSE(rep.divergence_detected);
  EXPECT_LE(max_abs(CMatrix(rep.limit_matrix->entries() - mat2(1, 0, 0, 0))), 1e-9);
  EXPECT_TRUE(rep.limit_is_projection);
  EXPECT_TRUE(rep.limit_matches_decomposition);
  EXPECT_EQ(rep.trace.size(), static_cast<std::size_t>(rep.n_iterations));
}

TEST(IterateToLimit, IdentityMinusNilpotentDiverges)
{
  const auto rep = iterate_to_limit(op2(mat2(1, -1, 0, 1)));
  EXPECT_TRUE(rep.divergence_detected);
  EXPECT_FALSE(rep.converged);
  EXPECT_FALSE(rep.limit_matrix.has_value());
  // T^n = I - nQ: the iterate norm grows by one per step.
  for (std::size_t i = 0; i < 5; i++)
  {
    EXPECT_NEAR(rep.trace[i].iterate_max_norm, static_cast<double>(i + 1), 1e-12);
  }
}

TEST(IterateToLimit, ProductOfTwoProjections)
{
  const double h = 1.0 / std::sqrt(2.0);
  const auto t = projection_product({line(1, 0), line(h, h)}, ProjectionMode::Product);
  const auto rep = iterate_to_limit(t);
  ASSERT_TRUE(rep.converged);
  EXPECT_TRUE(rep.limit_matches_decomposition);
  EXPECT_LE(max_abs(rep.limit_matrix->entries()), 1e-9);
}

TEST(IterateToLimit, InconclusiveWhenBudgetRunsOut)
{
  IterationOptions opt;
  opt.n_max = 20;
  const auto rep = iterate_to_limit(op2(mat2(1, 0, 0, 0.9)), opt);
  EXPECT_EQ(rep.status, IterationStatus::Inconclusive);
  EXPECT_FALSE(rep.converged);
  EXPECT_FALSE(rep.divergence_detected);
  opt.blowup = 1.0;
  EXPECT_THROW(iterate_to_limit(op2(mat2(1, 0, 0, 0.9)), opt), InvalidInput);
}

TEST(IterateToLimit, LimitIsProjectionOntoFixedSpaceAlongRange)
{
  // T = diag(1, 0.5) conjugated by a non-unitary W: the limit W diag(1,0) W^-1
  // is oblique, projecting onto N(I - T) along R(I - T).
  CMatrix w = mat2(1, 2, 0, 1), w_inv = mat2(1, -2, 0, 1);
  const auto rep = iterate_to_limit(op2(CMatrix(w * mat2(1, 0, 0, 0.5) * w_inv)));
  ASSERT_TRUE(rep.converged);
  const CMatrix expected = w * mat2(1, 0, 0, 0) * w_inv;
  EXPECT_LE(max_abs(CMatrix(rep.limit_matrix->entries() - expected)), 1e-8);
  EXPECT_TRUE(rep.limit_matches_decomposition);
}

TEST(PrimitiveContraction, Examples)
{
  EXPECT_TRUE(is_primitive_contraction(op2(mat2(1, 0, 0, 0.5))).primitive);
  const auto flip = is_primitive_contraction(op2(mat2(1, 0, 0, -1)));
  EXPECT_FALSE(flip.primitive);
  EXPECT_TRUE(flip.contraction);
  EXPECT_FALSE(flip.spectral_condition);
  const double h = 1.0 / std::sqrt(2.0);
  const auto avg = projection_product({line(1, 0), line(h, h)}, ProjectionMode::ConvexCombination);
  EXPECT_TRUE(is_primitive_contraction(avg).primitive);
  EXPECT_FALSE(is_primitive_contraction(op2(mat2(1, 1, 0, 0.5))).contraction);
}

TEST(PrimitiveContraction, NormSearchOnLp)
{
  // diag(1, 0.5) has l_p operator norm 1 for every p.
  const OperatorOnSpace t(SpaceSpec(2, 3.0), mat2(1, 0, 0, 0.5));
  const auto r = is_primitive_contraction(t);
  EXPECT_NEAR(r.norm_estimate, 1.0, 1e-6);
  EXPECT_TRUE(r.primitive);
}

TEST(ProjectionProduct, Examples)
{
  const auto single = projection_product({line(1, 0)}, ProjectionMode::Product);
  EXPECT_LE(max_abs(CMatrix(single.entries() - mat2(1, 0, 0, 0))), 1e-15);
  const auto twice = projection_product({line(1, 0), line(1, 0)}, ProjectionMode::Product);
  EXPECT_LE(max_abs(CMatrix(twice.entries() - mat2(1, 0, 0, 0))), 1e-15);
  const auto prod = projection_product({line(1, 0), line(1, 1)}, ProjectionMode::Product);
  EXPECT_LE(max_abs(CMatrix(prod.entries() - mat2(0.5, 0.5, 0, 0))), 1e-15);
}

TEST(ProjectionProduct, Errors)
{
  const SubspaceBasis on_l3{SpaceSpec(2, 3.0), CMatrix::Identity(2, 1), true};
  EXPECT_THROW(projection_product({on_l3}, ProjectionMode::Product), NonHilbert);
  EXPECT_THROW(projection_product({line(1, 0), line(0, 1)}, ProjectionMode::ConvexCombination, {0.5, 0.6}),
               InvalidInput);
  EXPECT_THROW(projection_product({line(1, 0), line(0, 1)}, ProjectionMode::ConvexCombination, {1.0}),
               InvalidInput);
  EXPECT_THROW(projection_product({line(1, 0), line(0, 1)}, ProjectionMode::ConvexCombination, {1.5, -0.5}),
               InvalidInput);
  EXPECT_THROW(projection_product({}, ProjectionMode::Product), InvalidInput);
}

TEST(IterationSuite, PrimitiveFixturesConverge)
{
  for (const auto &f : fixtures::iteration_suite())
  {
    if (f.family != "primitive-contraction")
    {
      continue;
    }
    EXPECT_TRUE(is_primitive_contraction(f.op()).primitive) << f.name;
    EXPECT_TRUE(iterate_to_limit(f.op()).converged) << f.name;
  }
}

TEST(IterationSuite, NilpotentIsRegularButIMinusNilpotentIsNot)
{
  for (const auto &f : fixtures::iteration_suite())
  {
    const auto reg = check_asymptotic_regularity(f.op(), 20000);
    EXPECT_EQ(reg.regular, f.asymptotically_regular) << f.name;
  }
}
