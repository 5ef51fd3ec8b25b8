#pragma once

#include <cmath>
#include <limits>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/LU>

#include "optrig/angle.hpp"
#include "optrig/linalg.hpp"

namespace optrig
{

/// Constants and trace of an invertibility certificate obtained by stepping the
/// pencil A + tT from t0 down to 0.
///
/// With cos_T(A) >= -1 + delta one has |Ax + tTx| >= (delta/2)|Ax| for t >= 0,
/// and with |Ax| >= k_A |x| every A + tT is bounded below by mu = (delta/2) k_A.
/// Each step of length < mu is then solved by the contraction
///   F h = (A + t_cur T)^{-1} (y + (t_cur - t_next) T h).
struct ContinuationCertificate
{
  double delta = 0.0;
  double c = 0.0;
  double k_A = 0.0;
  double mu = 0.0;
  double cosine = 0.0;  // reported cos_T(A) the margin was taken from
  std::vector<double> t_path;
  std::vector<double> contraction_factors;  // |t_next - t_cur| / mu, one per step
  std::vector<int> inner_iterations;
  double final_residual = 0.0;
};

struct InjectivityModulus
{
  double value = 0.0;
  bool from_singular_values = false;
  int n_converged = 0;
};

namespace detail
{

/// |Ax|_p / |x|_p on the real parameterization, optionally negated.
class GainEvaluator
{
public:
  GainEvaluator(const CMatrix &a, double p, bool negate) : a_(a), p_(p), sign_(negate ? -1.0 : 1.0), x_(a.cols()), ax_(a.rows())
  {
  }

  double operator()(const Eigen::VectorXd &z)
  {
    RatioEvaluator::unpack(z, x_);
    const double nx = lp_norm(x_, p_);
    if (!(nx > 0.0))
    {
      return std::numeric_limits<double>::infinity();
    }
    ax_.noalias() = a_ * x_;
    return sign_ * lp_norm(ax_, p_) / nx;
  }

private:
  const CMatrix &a_;
  double p_;
  double sign_;
  CVector x_, ax_;
};

}  // namespace detail

/// min over the unit l_p sphere of |Ax|_p by multi-start search, for any p.
inline InjectivityModulus injectivity_modulus_search(const OperatorOnSpace &a, const OptimizerConfig &cfg = {})
{
  cfg.validate();
  detail::GainEvaluator eval(a.entries(), a.p(), false);
  const auto found = detail::multistart_minimize(eval, a.dim(), {}, cfg);
  return {found.best_value, false, found.n_converged};
}

/// Largest k with |Ax| >= k |x|. On l_2 this is the smallest singular value;
/// otherwise it is estimated by sphere search (an upper bound of the true
/// modulus). Throws NontrivialKernel when A is singular.
inline InjectivityModulus injectivity_modulus(const OperatorOnSpace &a, const OptimizerConfig &cfg = {})
{
  const auto prof = rank_profile(a);
  if (prof.rank < a.dim())
  {
    throw NontrivialKernel("injectivity_modulus: operator has a nontrivial kernel");
  }
  if (a.space().is_hilbert())
  {
    return {prof.singular_values.back(), true, 0};
  }
  return injectivity_modulus_search(a, cfg);
}

/// Outcome of sampling the lower bound |Ax + tTx| >= (delta/2)|Ax|.
struct LowerBoundCheck
{
  bool passed = true;
  int samples = 0;
  int violations = 0;
  double worst_ratio = std::numeric_limits<double>::infinity();  // min |Ax+tTx| / |Ax|
};

/// t values for the lower-bound sampling: 0 and 10^k, k = -6..3.
inline std::vector<double> lower_bound_t_grid()
{
  std::vector<double> g{0.0};
  for (int k = -6; k <= 3; k++)
  {
    g.push_back(std::pow(10.0, k));
  }
  return g;
}

/// Samples x (uniform on the sphere, and near N(T) when it is nontrivial) and
/// t on a log grid in [0, 1e3]; fails on any violation beyond 1e-9.
inline LowerBoundCheck pencil_lower_bound_check(const OperatorOnSpace &a, const OperatorOnSpace &t, double delta,
                                                int n_samples, std::uint64_t seed = OptimizerConfig{}.seed)
{
  detail::require_same_space(a.space(), t.space(), "pencil_lower_bound_check");
  if (!(delta > 0.0) || delta > 2.0)
  {
    throw InvalidInput("pencil_lower_bound_check: delta must lie in (0, 2]");
  }
  const double p = a.p();
  const Index n = a.dim();
  const double c = delta / 2.0;
  const auto grid = lower_bound_t_grid();
  const auto rk_t = detail::range_kernel(t.entries(), 1.0);
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> log_offset(-4.0, 0.0);

  LowerBoundCheck out;
  CVector ax(n), tx(n);
  for (int s = 0; s < n_samples; s++)
  {
    CVector x = detail::random_unit(n, rng);
    if (rk_t.kernel.cols() > 0 && s % 2 == 1)
    {
      x = rk_t.kernel * detail::random_unit(rk_t.kernel.cols(), rng) + std::pow(10.0, log_offset(rng)) * x;
    }
    ax.noalias() = a.entries() * x;
    const double nax = lp_norm(ax, p);
    if (!(nax > OptimizerConfig{}.kernel_exclusion_radius * lp_norm(x, p)))
    {
      continue;  // x in N(A): nothing to check
    }
    tx.noalias() = t.entries() * x;
    out.samples++;
    for (double tv : grid)
    {
      const double lhs = lp_norm(CVector(ax + tv * tx), p);
      out.worst_ratio = std::min(out.worst_ratio, lhs / nax);
      if (lhs < c * nax - 1e-9)
      {
        out.violations++;
      }
    }
  }
  out.passed = out.violations == 0;
  return out;
}

/// Solves Ax = y by continuation along A + tT from t0 to 0 and returns the
/// solution with its certificate.
///
/// Requires N(A) = {0}, A + t0 T invertible and a reported angle below pi.
/// Throws PreconditionFailure when a requirement fails and StepStall when a
/// contraction iteration needs more than 10^4 sweeps.
inline std::pair<Vector, ContinuationCertificate>
certify_invertible_by_continuation(const OperatorOnSpace &a, const OperatorOnSpace &t, double t0, const Vector &y,
                                   double safety = 0.9, const OptimizerConfig &cfg = {})
{
  detail::require_same_space(a.space(), t.space(), "certify_invertible_by_continuation");
  detail::require_same_space(a.space(), y.space(), "certify_invertible_by_continuation");
  if (!(safety > 0.0 && safety < 1.0))
  {
    throw InvalidInput("continuation: safety must lie in (0, 1)");
  }
  if (!(t0 > 0.0) || !std::isfinite(t0))
  {
    throw InvalidInput("continuation: t0 must be positive");
  }
  const Index n = a.dim();
  const double p = a.p();
  constexpr int max_sweeps = 10000;

  if (rank_profile(a).rank < n)
  {
    throw NontrivialKernel("continuation: A has a nontrivial kernel");
  }
  if (rank_profile(CMatrix(a.entries() + t0 * t.entries())).rank < n)
  {
    throw PreconditionFailure("continuation: A + t0 T is numerically singular");
  }

  ContinuationCertificate cert;
  const auto ang = angle(a, t, cfg);
  cert.cosine = ang.cosine;
  cert.delta = 1.0 + ang.cosine;
  if (ang.degenerate || !(cert.delta > 0.0))
  {
    throw PreconditionFailure("continuation: reported angle of A with respect to T is pi");
  }
  cert.c = cert.delta / 2.0;
  cert.k_A = injectivity_modulus(a, cfg).value;
  cert.mu = cert.c * cert.k_A;

  const double step = safety * cert.mu;
  const auto n_steps = static_cast<long>(std::ceil(t0 / step));
  cert.t_path.reserve(static_cast<std::size_t>(n_steps) + 1);
  for (long k = 0; k <= n_steps; k++)
  {
    cert.t_path.push_back(std::max(t0 - static_cast<double>(k) * step, 0.0));
  }
  cert.t_path.back() = 0.0;

  const double ny = lp_norm(y.coords(), p);
  CVector x = Eigen::FullPivLU<CMatrix>(a.entries() + t0 * t.entries()).solve(y.coords());
  CVector next(n);
  for (std::size_t k = 0; k + 1 < cert.t_path.size(); k++)
  {
    const double t_cur = cert.t_path[k];
    const double t_next = cert.t_path[k + 1];
    cert.contraction_factors.push_back(std::abs(t_next - t_cur) / cert.mu);
    const Eigen::PartialPivLU<CMatrix> lu(a.entries() + t_cur * t.entries());
    int sweeps = 0;
    for (;;)
    {
      next = lu.solve(y.coords() + (t_cur - t_next) * (t.entries() * x));
      const double diff = lp_norm(CVector(next - x), p);
      x.swap(next);
      sweeps++;
      if (diff <= 1e-12 * ny)
      {
        break;
      }
      if (sweeps >= max_sweeps)
      {
        throw StepStall("continuation: contraction at t = " + std::to_string(t_cur) + " did not converge");
      }
    }
    cert.inner_iterations.push_back(sweeps);
  }

  cert.final_residual = ny > 0.0 ? lp_norm(CVector(a.entries() * x - y.coords()), p) / ny : 0.0;
  return {Vector(a.space(), std::move(x)), std::move(cert)};
}

}  // namespace optrig
