#pragma once

#include <limits>
#include <vector>

#include <Eigen/Eigenvalues>
#include <Eigen/LU>
#include <Eigen/SVD>

#include "optrig/space.hpp"

namespace optrig
{

/// Singular values with the numerical rank they imply.
struct RankProfile
{
  std::vector<double> singular_values;  // nonincreasing
  Index rank = 0;
  double tolerance_used = 0.0;
};

/// Basis of a subspace of a SpaceSpec, stored column-wise.
///
/// Bases produced by the library are l_2-orthonormal regardless of p; the l_p
/// geometry enters only through norms and semi-inner products.
struct SubspaceBasis
{
  SpaceSpec space;
  CMatrix vectors;  // dim x k
  bool orthonormal = false;

  Index size() const { return vectors.cols(); }
  bool empty() const { return vectors.cols() == 0; }
  Vector vector(Index j) const { return Vector(space, vectors.col(j)); }
};

/// Slack over the bare sigma_max * max(rows, cols) * eps threshold. Matrices
/// assembled from a few products carry roundoff of a few eps per entry, which
/// the bare threshold would count as rank.
inline constexpr double rank_slack = 1e3;

/// Numerical rank of a (possibly rectangular) matrix.
///
/// Singular values above tol_factor * rank_slack * sigma_max * max(rows, cols)
/// * eps count.
inline RankProfile rank_profile(const CMatrix &m, double tol_factor = 1.0)
{
  if (!(tol_factor > 0.0))
  {
    throw InvalidInput("rank_profile: tol_factor must be positive");
  }
  RankProfile out;
  if (m.size() == 0)
  {
    return out;
  }
  Eigen::JacobiSVD<CMatrix> svd(m);
  const auto &sv = svd.singularValues();
  out.singular_values.assign(sv.data(), sv.data() + sv.size());
  const double smax = sv.size() > 0 ? sv(0) : 0.0;
  out.tolerance_used = tol_factor * rank_slack * smax * static_cast<double>(std::max(m.rows(), m.cols())) *
                       std::numeric_limits<double>::epsilon();
  for (double s : out.singular_values)
  {
    if (s > out.tolerance_used)
    {
      out.rank++;
    }
  }
  return out;
}

inline RankProfile rank_profile(const OperatorOnSpace &a, double tol_factor = 1.0)
{
  return rank_profile(a.entries(), tol_factor);
}

namespace detail
{

struct RangeKernel
{
  CMatrix range;   // n x r, orthonormal
  CMatrix kernel;  // n x (n - r), orthonormal
  RankProfile profile;
};

inline RangeKernel range_kernel(const CMatrix &a, double tol_factor)
{
  RangeKernel out;
  out.profile = rank_profile(a, tol_factor);
  const Index n = a.cols();
  const Index r = out.profile.rank;
  Eigen::JacobiSVD<CMatrix> svd(a, Eigen::ComputeFullU | Eigen::ComputeFullV);
  out.range = svd.matrixU().leftCols(r);
  out.kernel = svd.matrixV().rightCols(n - r);
  return out;
}

}  // namespace detail

inline SubspaceBasis kernel_basis(const OperatorOnSpace &a, double tol_factor = 1.0)
{
  auto rk = detail::range_kernel(a.entries(), tol_factor);
  return SubspaceBasis{a.space(), std::move(rk.kernel), true};
}

inline SubspaceBasis range_basis(const OperatorOnSpace &a, double tol_factor = 1.0)
{
  auto rk = detail::range_kernel(a.entries(), tol_factor);
  return SubspaceBasis{a.space(), std::move(rk.range), true};
}

/// All eigenvalues with multiplicity, in the order the dense solver returns them.
inline std::vector<Complex> spectrum(const OperatorOnSpace &a)
{
  Eigen::ComplexEigenSolver<CMatrix> es(a.entries(), false);
  if (es.info() != Eigen::Success)
  {
    throw InternalInconsistency("spectrum: eigenvalue iteration did not converge");
  }
  const auto &ev = es.eigenvalues();
  return std::vector<Complex>(ev.data(), ev.data() + ev.size());
}

inline Vector solve(const OperatorOnSpace &a, const Vector &y)
{
  detail::require_same_space(a.space(), y.space(), "solve");
  if (rank_profile(a).rank < a.dim())
  {
    throw SingularOperator("solve: operator is numerically singular");
  }
  Eigen::FullPivLU<CMatrix> lu(a.entries());
  return Vector(a.space(), lu.solve(y.coords()));
}

/// l_2 operator norm (largest singular value).
inline double spectral_norm(const CMatrix &m)
{
  if (m.size() == 0)
  {
    return 0.0;
  }
  Eigen::JacobiSVD<CMatrix> svd(m);
  return svd.singularValues()(0);
}

/// Orthonormalize the columns of m, dropping numerically dependent ones.
inline CMatrix orthonormalize(const CMatrix &m, double tol_factor = 1.0)
{
  if (m.cols() == 0)
  {
    return CMatrix(m.rows(), 0);
  }
  auto rk = detail::range_kernel(m, tol_factor);
  return rk.range;
}

}  // namespace optrig
