#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "optrig/iteration.hpp"
#include "optrig/linalg.hpp"
#include "optrig/space.hpp"

namespace optrig::fixtures
{

/// e_j -> e_{j+1 mod n}.
inline CMatrix cyclic_shift(Index n)
{
  CMatrix c = CMatrix::Zero(n, n);
  for (Index j = 0; j < n; j++)
  {
    c((j + 1) % n, j) = 1.0;
  }
  return c;
}

/// Jordan block of size n with eigenvalue lambda (ones on the superdiagonal).
inline CMatrix jordan_block(Index n, Complex lambda = 0.0)
{
  CMatrix j = CMatrix::Zero(n, n);
  j.diagonal().setConstant(lambda);
  for (Index i = 0; i + 1 < n; i++)
  {
    j(i, i + 1) = 1.0;
  }
  return j;
}

/// [[1, gamma], [0, 0]]: projection onto span{e1} along span{(gamma, -1)}.
inline CMatrix oblique_projection(double gamma)
{
  CMatrix p(2, 2);
  p << 1.0, gamma, 0.0, 0.0;
  return p;
}

inline CMatrix block_diag(const CMatrix &a, const CMatrix &b)
{
  CMatrix m = CMatrix::Zero(a.rows() + b.rows(), a.cols() + b.cols());
  m.topLeftCorner(a.rows(), a.cols()) = a;
  m.bottomRightCorner(b.rows(), b.cols()) = b;
  return m;
}

/// Entries drawn from {0, +-1, +-i}, zero with probability 1/2.
inline Complex small_gaussian_integer(std::mt19937_64 &rng)
{
  static const Complex units[] = {1.0, -1.0, Complex(0.0, 1.0), Complex(0.0, -1.0)};
  std::uniform_int_distribution<int> pick(0, 7);
  const int v = pick(rng);
  return v < 4 ? units[v] : Complex(0.0);
}

/// Integer matrix with integer inverse: W = L U with unit triangular factors.
/// Conjugating by W keeps every entry an exactly representable integer, so
/// rank deficiencies survive floating point exactly.
struct Unimodular
{
  CMatrix w;
  CMatrix w_inv;
};

inline Unimodular unimodular(Index n, std::mt19937_64 &rng)
{
  CMatrix l = CMatrix::Identity(n, n);
  CMatrix u = CMatrix::Identity(n, n);
  for (Index i = 0; i < n; i++)
  {
    for (Index j = 0; j < i; j++)
    {
      l(i, j) = small_gaussian_integer(rng);
      u(j, i) = small_gaussian_integer(rng);
    }
  }
  const CMatrix id = CMatrix::Identity(n, n);
  const CMatrix l_inv = l.triangularView<Eigen::UnitLower>().solve(id);
  const CMatrix u_inv = u.triangularView<Eigen::UnitUpper>().solve(id);
  return {l * u, u_inv * l_inv};
}

/// Invertible upper-triangular block with Gaussian-integer diagonal drawn
/// away from zero.
inline CMatrix random_invertible_block(Index n, std::mt19937_64 &rng)
{
  static const Complex diag[] = {1.0, 2.0, -1.0, -2.0, Complex(0, 1), Complex(0, -1), Complex(1, 1), Complex(2, -1),
                                 Complex(-1, 1), 3.0};
  std::uniform_int_distribution<int> pick(0, 9);
  CMatrix d = CMatrix::Zero(n, n);
  for (Index i = 0; i < n; i++)
  {
    d(i, i) = diag[pick(rng)];
    for (Index j = i + 1; j < n; j++)
    {
      d(i, j) = small_gaussian_integer(rng);
    }
  }
  return d;
}

struct NamedOperator
{
  std::string name;
  std::string family;
  CMatrix entries;
  double p = 2.0;
  bool expected_complementary = false;

  OperatorOnSpace op() const { return OperatorOnSpace(SpaceSpec(entries.rows(), p), entries); }
};

/// W (D (+) 0_z (+) J_{k1} (+) ... ) W^{-1}. Complementary exactly when no
/// nilpotent Jordan block of size >= 2 is present.
inline CMatrix structured(const CMatrix &invertible, Index zeros, const std::vector<Index> &jordan_sizes,
                          std::mt19937_64 &rng)
{
  CMatrix b = invertible;
  if (zeros > 0)
  {
    b = block_diag(b, CMatrix::Zero(zeros, zeros));
  }
  for (Index s : jordan_sizes)
  {
    b = block_diag(b, jordan_block(s));
  }
  const auto w = unimodular(b.rows(), rng);
  return w.w * b * w.w_inv;
}

/// Seed-controlled random operator of size 2..max_dim on l_2 or l_3 with mixed
/// rank; roughly half of the draws carry a nilpotent Jordan block.
inline NamedOperator random_mixed(std::mt19937_64 &rng, Index max_dim = 6)
{
  std::uniform_int_distribution<Index> dim_pick(2, max_dim);
  std::bernoulli_distribution coin(0.5);
  const Index n = dim_pick(rng);
  const double p = coin(rng) ? 2.0 : 3.0;
  const bool with_jordan = coin(rng);

  std::vector<Index> jordan;
  Index remaining = n;
  if (with_jordan)
  {
    std::uniform_int_distribution<Index> js(2, n);
    jordan.push_back(js(rng));
    remaining -= jordan.back();
  }
  std::uniform_int_distribution<Index> inv_pick(0, remaining);
  const Index inv = inv_pick(rng);
  const Index zeros = remaining - inv;
  const CMatrix d = random_invertible_block(inv, rng);
  NamedOperator out;
  out.entries = structured(d, zeros, jordan, rng);
  out.p = p;
  out.expected_complementary = !with_jordan;
  out.family = with_jordan ? "random-jordan" : "random-split";
  out.name = out.family + "-n" + std::to_string(n) + "-p" + std::to_string(static_cast<int>(p));
  return out;
}

/// The curated suite: closed-form and structured operators with known
/// range-kernel complementarity.
inline std::vector<NamedOperator> curated_suite()
{
  std::vector<NamedOperator> s;
  auto add = [&](std::string name, std::string family, CMatrix m, bool comp, double p = 2.0) {
    s.push_back({std::move(name), std::move(family), std::move(m), p, comp});
  };

  add("identity-2", "identity", CMatrix::Identity(2, 2), true);
  add("identity-4", "identity", CMatrix::Identity(4, 4), true);
  add("identity-3-p3", "identity", CMatrix::Identity(3, 3), true, 3.0);
  add("zero-3", "zero", CMatrix::Zero(3, 3), true);

  {
    CMatrix d = CMatrix::Zero(2, 2);
    d(0, 0) = 1.0;
    add("diag-projection-2", "diagonal-projection", d, true);
    CMatrix d3 = CMatrix::Zero(3, 3);
    d3(0, 0) = 1.0;
    d3(2, 2) = 1.0;
    add("diag-projection-3", "diagonal-projection", d3, true);
    add("diag-projection-3-p3", "diagonal-projection", d3, true, 3.0);
    CMatrix d4 = CMatrix::Zero(4, 4);
    d4(1, 1) = 1.0;
    add("diag-projection-4", "diagonal-projection", d4, true);
  }

  for (double gamma : {0.5, 1.0, 4.0})
  {
    const std::string g = gamma == 0.5 ? "0.5" : gamma == 1.0 ? "1" : "4";
    add("oblique-projection-g" + g, "oblique-projection", oblique_projection(gamma), true);
    add("oblique-projection-g" + g + "-p3", "oblique-projection", oblique_projection(gamma), true, 3.0);
  }

  for (Index n = 2; n <= 4; n++)
  {
    add("jordan-nilpotent-" + std::to_string(n), "nilpotent", jordan_block(n), false);
    add("jordan-nilpotent-" + std::to_string(n) + "-p3", "nilpotent", jordan_block(n), false, 3.0);
  }
  add("jordan-nilpotent-2-plus-1", "jordan", block_diag(jordan_block(2), CMatrix::Identity(1, 1)), false);
  add("jordan-eig1-2", "invertible", jordan_block(2, 1.0), true);

  {
    std::mt19937_64 rng(7001);
    for (int i = 0; i < 6; i++)
    {
      const Index n = 2 + i % 4;
      const auto w = unimodular(n, rng);
      const CMatrix m = w.w * random_invertible_block(n, rng) * w.w_inv;
      add("random-invertible-" + std::to_string(i), "invertible", m, true, i % 2 == 0 ? 2.0 : 3.0);
    }
  }

  {
    // S P with S commuting with P (complementary) and with S mixing the range
    // of P into its kernel (not complementary).
    std::mt19937_64 rng(7002);
    for (int i = 0; i < 4; i++)
    {
      const Index n = 3 + i % 2;
      const Index r = 1 + i % 2;
      const auto w = unimodular(n, rng);
      CMatrix keep = CMatrix::Zero(n, n);
      keep.topLeftCorner(r, r).setIdentity();
      const CMatrix proj = w.w * keep * w.w_inv;
      const CMatrix s_comm =
          w.w * block_diag(random_invertible_block(r, rng), CMatrix::Identity(n - r, n - r)) * w.w_inv;
      add("sp-commuting-" + std::to_string(i), "sp-product", CMatrix(s_comm * proj), true,
          i % 2 == 0 ? 2.0 : 3.0);

      // M sends e_1 (in the range of P) to e_n (in its kernel) and e_n back.
      CMatrix mix = CMatrix::Identity(n, n);
      mix(0, 0) = 0.0;
      mix(n - 1, n - 1) = 0.0;
      mix(n - 1, 0) = 1.0;
      mix(0, n - 1) = 1.0;
      const CMatrix s_mix = w.w * mix * w.w_inv;
      add("sp-mixing-" + std::to_string(i), "sp-product", CMatrix(s_mix * proj), false, i % 2 == 0 ? 2.0 : 3.0);
    }
  }

  add("cyclic-shift-4", "cyclic-shift", cyclic_shift(4), true);
  add("cyclic-shift-4-plus-0", "cyclic-shift", block_diag(cyclic_shift(4), CMatrix::Zero(1, 1)), true);
  add("cyclic-shift-3-plus-0", "cyclic-shift", block_diag(cyclic_shift(3), CMatrix::Zero(1, 1)), true);
  add("cyclic-shift-3-plus-0-p3", "cyclic-shift", block_diag(cyclic_shift(3), CMatrix::Zero(1, 1)), true, 3.0);
  add("cyclic-shift-2-plus-0-0", "cyclic-shift", block_diag(cyclic_shift(2), CMatrix::Zero(2, 2)), true);
  add("cyclic-shift-3-plus-jordan-2", "cyclic-shift", block_diag(cyclic_shift(3), jordan_block(2)), false);

  return s;
}

/// Fixture for the power-iteration suite. `converges` is the expected
/// behavior of T^n, equivalently the complementarity of I - T.
struct IterationFixture
{
  std::string name;
  std::string family;
  CMatrix entries;
  bool converges = false;
  bool asymptotically_regular = false;

  OperatorOnSpace op() const { return OperatorOnSpace(SpaceSpec(entries.rows(), 2.0), entries); }
};

/// Random k-dimensional subspace of C^n.
inline SubspaceBasis random_subspace(Index n, Index k, std::mt19937_64 &rng)
{
  std::normal_distribution<double> g;
  CMatrix m(n, k);
  for (Index j = 0; j < k; j++)
  {
    for (Index i = 0; i < n; i++)
    {
      const double re = g(rng);
      const double im = g(rng);
      m(i, j) = Complex(re, im);
    }
  }
  return SubspaceBasis{SpaceSpec(n, 2.0), orthonormalize(m), true};
}

/// Products and convex combinations of orthogonal projections, primitive
/// contractions, nilpotents, and I - nilpotent (whose powers grow linearly).
inline std::vector<IterationFixture> iteration_suite()
{
  std::vector<IterationFixture> s;
  auto add = [&](std::string name, std::string family, CMatrix m, bool conv, bool regular = true) {
    s.push_back({std::move(name), std::move(family), std::move(m), conv, regular});
  };
  const SpaceSpec plane(2, 2.0);
  CMatrix e1(2, 1), diag11(2, 1);
  e1 << 1.0, 0.0;
  diag11 << 1.0 / std::sqrt(2.0), 1.0 / std::sqrt(2.0);
  const SubspaceBasis line1{plane, e1, true};
  const SubspaceBasis line2{plane, diag11, true};

  add("product-e1-diagonal", "projection-product",
      projection_product({line1, line2}, ProjectionMode::Product).entries(), true);
  add("product-e1-e1", "projection-product", projection_product({line1, line1}, ProjectionMode::Product).entries(),
      true);
  add("average-e1-diagonal", "convex-combination",
      projection_product({line1, line2}, ProjectionMode::ConvexCombination).entries(), true);

  std::mt19937_64 rng(7003);
  for (int i = 0; i < 6; i++)
  {
    const Index n = 3 + i % 3;
    std::vector<SubspaceBasis> subs;
    const int m = 2 + i % 2;
    for (int j = 0; j < m; j++)
    {
      subs.push_back(random_subspace(n, n - 1, rng));
    }
    add("product-random-" + std::to_string(i), "projection-product",
        projection_product(subs, ProjectionMode::Product).entries(), true);
    std::uniform_real_distribution<double> u(0.2, 1.0);
    std::vector<double> w;
    double total = 0.0;
    for (int j = 0; j < m; j++)
    {
      w.push_back(u(rng));
      total += w.back();
    }
    for (double &x : w)
    {
      x /= total;
    }
    add("combination-random-" + std::to_string(i), "convex-combination",
        projection_product(subs, ProjectionMode::ConvexCombination, w).entries(), true);
  }

  {
    CMatrix d = CMatrix::Zero(2, 2);
    d(0, 0) = 1.0;
    d(1, 1) = 0.5;
    add("primitive-diag-1-0.5", "primitive-contraction", d, true);
    CMatrix d3 = CMatrix::Zero(3, 3);
    d3(0, 0) = 1.0;
    d3(1, 1) = Complex(0.0, 0.5);
    d3(2, 2) = -0.3;
    add("primitive-diag-1-0.5i-neg0.3", "primitive-contraction", d3, true);
    CMatrix b = CMatrix::Zero(3, 3);
    b(0, 0) = 1.0;
    b(1, 1) = 0.5;
    b(1, 2) = 0.4;
    b(2, 2) = 0.5;
    add("primitive-block-1-jordan-0.5", "primitive-contraction", b, true);
    const auto q = random_subspace(4, 4, rng).vectors;  // a random unitary
    CMatrix d4 = CMatrix::Zero(4, 4);
    d4(0, 0) = 1.0;
    d4(1, 1) = 1.0;
    d4(2, 2) = 0.6;
    d4(3, 3) = Complex(0.0, -0.2);
    add("primitive-unitary-conjugate", "primitive-contraction", CMatrix(q * d4 * q.adjoint()), true);
  }

  add("nilpotent-2", "nilpotent", jordan_block(2), true);
  add("nilpotent-3", "nilpotent", jordan_block(3), true);

  // T^n - T^(n+1) = T^n Q = Q for T = I - Q with Q^2 = 0: not asymptotically regular.
  const auto i_minus = [](const CMatrix &q) { return CMatrix(CMatrix::Identity(q.rows(), q.cols()) - q); };
  add("identity-minus-nilpotent-2", "identity-minus-nilpotent", i_minus(jordan_block(2)), false, false);
  add("identity-minus-nilpotent-3", "identity-minus-nilpotent", i_minus(jordan_block(3)), false, false);
  add("identity-minus-nilpotent-2-plus-0", "identity-minus-nilpotent",
      i_minus(block_diag(jordan_block(2), CMatrix::Zero(1, 1))), false, false);
  return s;
}

}  // namespace optrig::fixtures
