#pragma once

#include <cmath>
#include <optional>
#include <string_view>
#include <vector>

#include "optrig/continuation.hpp"
#include "optrig/decomposition.hpp"
#include "optrig/linalg.hpp"

namespace optrig
{

enum class IterationStatus
{
  Converged,
  Diverged,
  Inconclusive
};

inline std::string_view to_string(IterationStatus s)
{
  switch (s)
  {
    case IterationStatus::Converged:
      return "converged";
    case IterationStatus::Diverged:
      return "diverged";
    case IterationStatus::Inconclusive:
      return "inconclusive";
  }
  return "?";
}

/// One row of the power-iteration trace.
struct IterationTraceRow
{
  long n;
  double residual;          // max-entry norm of T^n - T^(n+1)
  double iterate_max_norm;  // max-entry norm of T^n
};

struct IterationReport
{
  IterationStatus status = IterationStatus::Inconclusive;
  bool converged = false;
  bool divergence_detected = false;
  long n_iterations = 0;
  std::optional<OperatorOnSpace> limit_matrix;
  std::vector<double> asymptotic_regularity_residuals;  // |T^n e_j - T^(n+1) e_j|_p at the last n
  bool limit_is_projection = false;
  bool limit_matches_decomposition = false;
  std::optional<OperatorOnSpace> expected_limit;  // projection onto N(I-T) along R(I-T)
  std::vector<IterationTraceRow> trace;
};

struct IterationOptions
{
  long n_max = 100000;
  double tol = 1e-10;
  double blowup = 1e4;
  double projection_tol = 1e-6;
};

namespace detail
{

/// l_p norms of the columns, i.e. |M e_j|_p for the coordinate probes.
inline std::vector<double> column_norms(const CMatrix &m, double p)
{
  std::vector<double> out;
  out.reserve(static_cast<std::size_t>(m.cols()));
  for (Index j = 0; j < m.cols(); j++)
  {
    out.push_back(lp_norm(CVector(m.col(j)), p));
  }
  return out;
}

}  // namespace detail

/// Powers T^n by repeated multiplication until |T^n - T^(n+1)|_max < tol
/// (converged), |T^n|_max > blowup (diverged) or n_max (inconclusive).
///
/// A converged limit is compared with the projection onto N(I-T) along
/// R(I-T) built by the complementarity oracle. Finite dimensions make strong
/// and uniform convergence of T^n the same thing, so the matrix norm is used.
inline IterationReport iterate_to_limit(const OperatorOnSpace &t, const IterationOptions &opt = {})
{
  if (!(opt.blowup > 1.0) || opt.n_max < 1 || !(opt.tol > 0.0))
  {
    throw InvalidInput("iterate_to_limit: need blowup > 1, n_max >= 1, tol > 0");
  }
  const Index n = t.dim();
  IterationReport rep;
  CMatrix power = t.entries();
  CMatrix next(n, n);
  for (long k = 1; k <= opt.n_max; k++)
  {
    next.noalias() = power * t.entries();
    const double residual = max_abs(power - next);
    rep.trace.push_back({k, residual, max_abs(power)});
    rep.n_iterations = k;
    if (residual < opt.tol)
    {
      rep.status = IterationStatus::Converged;
      power = next;
      break;
    }
    if (max_abs(next) > opt.blowup)
    {
      rep.status = IterationStatus::Diverged;
      power = next;
      break;
    }
    power.swap(next);
  }
  rep.converged = rep.status == IterationStatus::Converged;
  rep.divergence_detected = rep.status == IterationStatus::Diverged;
  rep.asymptotic_regularity_residuals = detail::column_norms(power - power * t.entries(), t.p());

  const CMatrix id = CMatrix::Identity(n, n);
  const auto dec = complementarity_oracle(OperatorOnSpace(t.space(), id - t.entries()));
  if (dec.projection_P)
  {
    rep.expected_limit.emplace(t.space(), id - dec.projection_P->entries());
  }
  if (rep.converged)
  {
    rep.limit_matrix.emplace(t.space(), power);
    rep.limit_is_projection = max_abs(power * power - power) <= opt.projection_tol;
    rep.limit_matches_decomposition =
        rep.expected_limit && max_abs(power - rep.expected_limit->entries()) <= opt.projection_tol;
  }
  return rep;
}

enum class RegularityVerdict
{
  Regular,
  NotRegular,
  Inconclusive
};

inline std::string_view to_string(RegularityVerdict v)
{
  switch (v)
  {
    case RegularityVerdict::Regular:
      return "regular";
    case RegularityVerdict::NotRegular:
      return "not-regular";
    case RegularityVerdict::Inconclusive:
      return "inconclusive";
  }
  return "?";
}

struct RegularityCheck
{
  RegularityVerdict verdict = RegularityVerdict::Inconclusive;
  bool regular = false;
  std::vector<double> residuals;  // max over coordinate probes of |T^n x - T^(n+1) x|_p, n = 1, 2, ...
};

/// Asymptotic regularity on the coordinate probes: regular once the residual
/// drops below tol with a nonincreasing trailing window of 10 iterations;
/// not regular when, at n_max or on overflow, the residual has not decreased
/// over that window; inconclusive when it is still decreasing at n_max.
inline RegularityCheck check_asymptotic_regularity(const OperatorOnSpace &t, long n_max = 100000, double tol = 1e-10)
{
  constexpr std::size_t window = 10;
  constexpr double overflow = 1e12;
  RegularityCheck out;
  const double p = t.p();
  CMatrix power = t.entries();
  CMatrix next(t.dim(), t.dim());

  auto trailing_nonincreasing = [&]() {
    const std::size_t m = out.residuals.size();
    const std::size_t first = m > window ? m - window : 0;
    for (std::size_t i = first + 1; i < m; i++)
    {
      if (out.residuals[i] > out.residuals[i - 1])
      {
        return false;
      }
    }
    return true;
  };

  for (long k = 1; k <= n_max; k++)
  {
    next.noalias() = power * t.entries();
    const auto probes = detail::column_norms(power - next, p);
    const double r = *std::max_element(probes.begin(), probes.end());
    out.residuals.push_back(r);
    if (r < tol && trailing_nonincreasing())
    {
      out.verdict = RegularityVerdict::Regular;
      out.regular = true;
      return out;
    }
    if (max_abs(next) > overflow)
    {
      out.verdict = RegularityVerdict::NotRegular;
      return out;
    }
    power.swap(next);
  }
  const std::size_t m = out.residuals.size();
  const double then = out.residuals[m > window ? m - 1 - window : 0];
  const double now = out.residuals.back();
  out.verdict = now >= then * (1.0 - 1e-9) ? RegularityVerdict::NotRegular : RegularityVerdict::Inconclusive;
  return out;
}

struct PrimitiveCheck
{
  bool primitive = false;
  bool contraction = false;
  bool spectral_condition = false;
  double norm_estimate = 0.0;  // l_p operator norm (exact on l_2, a lower estimate otherwise)
};

/// A contraction whose spectrum lies in {1} union the open unit disk.
inline PrimitiveCheck is_primitive_contraction(const OperatorOnSpace &t, const OptimizerConfig &cfg = {})
{
  constexpr double slack = 1e-9;
  PrimitiveCheck out;
  if (t.space().is_hilbert())
  {
    out.norm_estimate = spectral_norm(t.entries());
  }
  else
  {
    detail::GainEvaluator eval(t.entries(), t.p(), true);
    out.norm_estimate = -detail::multistart_minimize(eval, t.dim(), {}, cfg).best_value;
  }
  out.contraction = out.norm_estimate <= 1.0 + slack;
  out.spectral_condition = true;
  for (const Complex &lambda : spectrum(t))
  {
    if (!(std::abs(lambda) < 1.0 - slack || std::abs(lambda - 1.0) < slack))
    {
      out.spectral_condition = false;
    }
  }
  out.primitive = out.contraction && out.spectral_condition;
  return out;
}

enum class ProjectionMode
{
  Product,
  ConvexCombination
};

/// Product P_1 P_2 ... P_m (list order) or convex combination sum w_i P_i of
/// the l_2-orthogonal projections onto the given subspaces. Only defined on
/// l_2; throws NonHilbert otherwise.
inline OperatorOnSpace projection_product(const std::vector<SubspaceBasis> &subspaces, ProjectionMode mode,
                                          const std::vector<double> &weights = {})
{
  if (subspaces.empty())
  {
    throw InvalidInput("projection_product: no subspaces given");
  }
  const SpaceSpec space = subspaces.front().space;
  if (!space.is_hilbert())
  {
    throw NonHilbert("projection_product: orthogonal projections need p = 2");
  }
  const Index n = space.dim();
  std::vector<CMatrix> projections;
  for (const auto &s : subspaces)
  {
    detail::require_same_space(space, s.space, "projection_product");
    const CMatrix q = s.orthonormal ? s.vectors : orthonormalize(s.vectors);
    projections.push_back(q * q.adjoint());
  }

  if (mode == ProjectionMode::Product)
  {
    CMatrix out = CMatrix::Identity(n, n);
    for (const auto &pr : projections)
    {
      out = out * pr;
    }
    return OperatorOnSpace(space, out);
  }

  const std::vector<double> w =
      weights.empty() ? std::vector<double>(subspaces.size(), 1.0 / static_cast<double>(subspaces.size())) : weights;
  if (w.size() != subspaces.size())
  {
    throw InvalidInput("projection_product: one weight per subspace required");
  }
  double total = 0.0;
  for (double wi : w)
  {
    if (!(wi > 0.0))
    {
      throw InvalidInput("projection_product: weights must be positive");
    }
    total += wi;
  }
  if (std::abs(total - 1.0) > 1e-12)
  {
    throw InvalidInput("projection_product: weights must sum to 1");
  }
  CMatrix out = CMatrix::Zero(n, n);
  for (std::size_t i = 0; i < w.size(); i++)
  {
    out += w[i] * projections[i];
  }
  return OperatorOnSpace(space, out);
}

}  // namespace optrig
