#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <random>

#include "optrig/angle.hpp"
#include "optrig/linalg.hpp"

namespace optrig
{

/// Range-kernel structure of A and, when X = R(A) (+) N(A), the factorization
/// A = S P with P the projection onto R(A) along N(A) and
/// S = A|_{R(A)} (+) I_{N(A)} invertible.
///
/// In finite dimensions R(A), R(A^2) and R(A) + N(A) are always closed; the
/// closedness hypotheses of the infinite-dimensional theory reduce to the rank
/// tolerance used here.
struct DecompositionResult
{
  bool complementary = false;
  SubspaceBasis range_basis;
  SubspaceBasis kernel_basis;
  std::optional<OperatorOnSpace> projection_P;
  std::optional<OperatorOnSpace> factor_S;
  Index sum_dimension = 0;
  Index intersection_dimension = 0;
  Index rank = 0;
  Index rank_squared = 0;  // rank(A^2)
};

/// Exact complementarity test. Two equivalent criteria are evaluated:
///   (a) dim(R(A) + N(A)) = n and R(A) n N(A) = {0}, from the stacked bases;
///   (b) rank(A^2) = rank(A).
/// Disagreement raises InternalInconsistency instead of picking one.
inline DecompositionResult complementarity_oracle(const OperatorOnSpace &a, double tol_factor = 1.0)
{
  const Index n = a.dim();
  const auto rk = detail::range_kernel(a.entries(), tol_factor);
  const Index r = rk.profile.rank;

  DecompositionResult out{false,
                          SubspaceBasis{a.space(), rk.range, true},
                          SubspaceBasis{a.space(), rk.kernel, true},
                          std::nullopt,
                          std::nullopt,
                          0,
                          0,
                          r,
                          0};

  CMatrix frame(n, n);
  frame << rk.range, rk.kernel;
  // Computed range and kernel bases carry errors of order eps * sigma_1 / sigma_r,
  // so the frame rank is judged at that scale rather than at plain eps.
  const auto &sv = rk.profile.singular_values;
  const double basis_scale = r > 0 ? 100.0 * sv.front() / sv[static_cast<std::size_t>(r - 1)] : 1.0;
  out.sum_dimension = rank_profile(frame, tol_factor * basis_scale).rank;
  out.intersection_dimension = r + rk.kernel.cols() - out.sum_dimension;
  out.rank_squared = rank_profile(CMatrix(a.entries() * a.entries()), tol_factor).rank;

  const bool by_subspaces = out.sum_dimension == n && out.intersection_dimension == 0;
  const bool by_descent = out.rank_squared == r;
  if (by_subspaces != by_descent)
  {
    throw InternalInconsistency("complementarity_oracle: subspace test (sum " + std::to_string(out.sum_dimension) +
                                ", intersection " + std::to_string(out.intersection_dimension) +
                                ") disagrees with rank(A^2) = " + std::to_string(out.rank_squared) +
                                " vs rank(A) = " + std::to_string(r));
  }
  out.complementary = by_subspaces;
  if (!out.complementary)
  {
    return out;
  }

  // Coordinates in the (range | kernel) frame: P keeps the range block,
  // S applies A on the range block and the identity on the kernel block.
  Eigen::FullPivLU<CMatrix> lu(frame);
  const CMatrix frame_inv = lu.inverse();
  CMatrix keep = CMatrix::Zero(n, n);
  keep.topLeftCorner(r, r).setIdentity();
  CMatrix image(n, n);
  image << a.entries() * rk.range, rk.kernel;
  out.projection_P.emplace(a.space(), frame * keep * frame_inv);
  out.factor_S.emplace(a.space(), image * frame_inv);
  return out;
}

/// Empirical estimate of the constant c in |Ax + Ty| >= c |Ax| for y in N(A):
/// the minimum ratio over random pairs. Returns +inf when N(A) = {0}, where the
/// constraint is vacuous.
inline double sum_closedness_constant(const OperatorOnSpace &a, const OperatorOnSpace &t, int n_samples,
                                      std::uint64_t seed = OptimizerConfig{}.seed)
{
  detail::require_same_space(a.space(), t.space(), "sum_closedness_constant");
  const auto rk = detail::range_kernel(a.entries(), 1.0);
  if (rk.kernel.cols() == 0)
  {
    return std::numeric_limits<double>::infinity();
  }
  const double p = a.p();
  const Index n = a.dim();
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> log_scale(-4.0, 4.0);
  double best = std::numeric_limits<double>::infinity();
  for (int s = 0; s < n_samples; s++)
  {
    const CVector x = detail::random_unit(n, rng);
    const CVector ax = a.entries() * x;
    const double nax = lp_norm(ax, p);
    if (!(nax > OptimizerConfig{}.kernel_exclusion_radius))
    {
      continue;
    }
    const CVector y =
        rk.kernel * detail::random_unit(rk.kernel.cols(), rng) * (nax * std::pow(10.0, log_scale(rng)));
    best = std::min(best, lp_norm(CVector(ax + t.entries() * y), p) / nax);
  }
  return best;
}

}  // namespace optrig
