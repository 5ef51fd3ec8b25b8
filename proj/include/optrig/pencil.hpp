#pragma once

#include <cmath>
#include <numbers>
#include <optional>
#include <random>
#include <string>
#include <string_view>
#include <vector>

#include "optrig/angle.hpp"
#include "optrig/decomposition.hpp"
#include "optrig/linalg.hpp"

namespace optrig
{

/// t values probed for invertibility of A + tT: 10^k, k = -6..3.
inline std::vector<double> default_t_grid()
{
  std::vector<double> g;
  for (int k = -6; k <= 3; k++)
  {
    g.push_back(std::pow(10.0, k));
  }
  return g;
}

/// Membership of T in the pencil class E_A: T(N(A)) = N(A) and A + tT is
/// invertible for some t > 0.
struct PencilMembership
{
  bool preserves_kernel = false;
  std::optional<double> invertible_t;
  bool is_member = false;
};

/// Relative residual below which T v counts as lying in N(A).
inline constexpr double kernel_membership_tol = 1e-8;

inline PencilMembership pencil_membership(const OperatorOnSpace &a, const OperatorOnSpace &t,
                                          const std::vector<double> &t_grid = default_t_grid(),
                                          double tol_factor = 1.0)
{
  detail::require_same_space(a.space(), t.space(), "pencil_membership");
  PencilMembership out;
  const auto rk = detail::range_kernel(a.entries(), tol_factor);
  const CMatrix &k = rk.kernel;
  if (k.cols() == 0)
  {
    out.preserves_kernel = true;
  }
  else
  {
    // T maps N(A) into N(A) (residual off the kernel vanishes) and onto it
    // (the images keep full rank).
    const CMatrix tk = t.entries() * k;
    const CMatrix off = tk - k * (k.adjoint() * tk);
    const double scale = std::max(spectral_norm(t.entries()), std::numeric_limits<double>::min());
    out.preserves_kernel =
        spectral_norm(off) <= kernel_membership_tol * scale && rank_profile(tk, tol_factor).rank == k.cols();
  }
  for (double tv : t_grid)
  {
    if (rank_profile(CMatrix(a.entries() + tv * t.entries()), tol_factor).rank == a.dim())
    {
      out.invertible_t = tv;
      break;
    }
  }
  out.is_member = out.preserves_kernel && out.invertible_t.has_value();
  return out;
}

/// One probed ray direction with its angle report.
struct RaySample
{
  double theta;
  AngleReport report;
};

/// Estimate of Krein's amplitude am(A) = min over theta of the ray angle.
struct KreinAmplitude
{
  double value = 0.0;
  double theta = 0.0;
  std::vector<RaySample> samples;  // grid first, then refinement, in evaluation order
};

/// Minimum ray angle over a uniform theta grid, refined around the best grid
/// point by golden-section search. A = 0 follows the degenerate convention
/// (amplitude 0).
inline KreinAmplitude krein_amplitude(const OperatorOnSpace &a, int n_theta, const OptimizerConfig &cfg = {},
                                      int refine_iters = 8)
{
  if (n_theta < 1)
  {
    throw InvalidInput("krein_amplitude: n_theta must be at least 1");
  }
  KreinAmplitude out;
  if (rank_profile(a).rank == 0)
  {
    return out;
  }
  constexpr double two_pi = 2.0 * std::numbers::pi;
  auto probe = [&](double theta) {
    out.samples.push_back({theta, ray_angle(a, theta, cfg)});
    return out.samples.back().report.angle;
  };

  out.value = std::numeric_limits<double>::infinity();
  for (int k = 0; k < n_theta; k++)
  {
    const double theta = two_pi * k / n_theta;
    const double v = probe(theta);
    if (v < out.value)
    {
      out.value = v;
      out.theta = theta;
    }
  }

  if (out.value > 0.0 && n_theta > 1)
  {
    const double h = two_pi / n_theta;
    const double invphi = (std::sqrt(5.0) - 1.0) / 2.0;
    double lo = out.theta - h, hi = out.theta + h;
    double x1 = hi - invphi * (hi - lo), x2 = lo + invphi * (hi - lo);
    double f1 = refine_iters > 0 ? probe(x1) : 0.0;
    double f2 = refine_iters > 1 ? probe(x2) : 0.0;
    for (int it = 2; it < refine_iters; it++)
    {
      if (f1 < f2)
      {
        hi = x2;
        x2 = x1;
        f2 = f1;
        x1 = hi - invphi * (hi - lo);
        f1 = probe(x1);
      }
      else
      {
        lo = x1;
        x1 = x2;
        f1 = f2;
        x2 = lo + invphi * (hi - lo);
        f2 = probe(x2);
      }
    }
    for (const auto &s : out.samples)
    {
      if (s.report.angle < out.value)
      {
        out.value = s.report.angle;
        out.theta = s.theta;
      }
    }
  }
  return out;
}

enum class Classification
{
  BelowPi,
  AtPi
};

inline std::string_view to_string(Classification c) { return c == Classification::BelowPi ? "BELOW_PI" : "AT_PI"; }

struct AmplitudeOptions
{
  int n_theta = 16;
  int theta_refine_iters = 8;
  int n_random = 32;
  double margin_threshold = 0.05;    // radians below pi required for BELOW_PI
  double perturbation_scale = 0.25;  // epsilon in S0 (I + epsilon K)
  std::vector<double> t_grid = default_t_grid();
  double tol_factor = 1.0;
};

/// Where the best pencil member came from.
enum class CandidateSource
{
  Ray,
  Factor,
  Perturbation
};

inline std::string_view to_string(CandidateSource s)
{
  switch (s)
  {
    case CandidateSource::Ray:
      return "ray";
    case CandidateSource::Factor:
      return "factor";
    case CandidateSource::Perturbation:
      return "perturbation";
  }
  return "?";
}

struct AmplitudeReport
{
  double krein_amplitude = 0.0;
  double krein_theta = 0.0;
  double generalized_upper_bound = std::numbers::pi;
  std::optional<OperatorOnSpace> best_pencil;
  CandidateSource best_source = CandidateSource::Ray;
  double best_cosine = -1.0;
  int candidates_tried = 0;
  int members_evaluated = 0;
  Classification classification = Classification::AtPi;
  double margin = 0.0;  // pi - generalized_upper_bound
  bool complementary_by_oracle = false;
  std::vector<RaySample> ray_samples;
};

/// Upper bound of the generalized amplitude Am(A) = inf { phi_T(A) : T in E_A }
/// over a finite candidate set:
///   - the probed rays e^{i theta} I that belong to E_A,
///   - the factor S = A|_{R(A)} (+) I_{N(A)} when X = R(A) (+) N(A),
///   - seeded perturbations S0 (I + eps K), K mapping N(A) into N(A), with
///     S0 = S when the factor exists and S0 = I otherwise.
/// Classification is BELOW_PI when the bound sits at least margin_threshold
/// below pi, AT_PI otherwise.
inline AmplitudeReport generalized_amplitude_upper(const OperatorOnSpace &a, const OptimizerConfig &cfg = {},
                                                   const AmplitudeOptions &opt = {})
{
  const Index n = a.dim();
  AmplitudeReport rep;

  auto krein = krein_amplitude(a, opt.n_theta, cfg, opt.theta_refine_iters);
  rep.krein_amplitude = krein.value;
  rep.krein_theta = krein.theta;

  auto consider = [&](const OperatorOnSpace &t, const AngleReport &r, CandidateSource src) {
    rep.members_evaluated++;
    if (!rep.best_pencil || r.angle < rep.generalized_upper_bound)
    {
      rep.generalized_upper_bound = r.angle;
      rep.best_cosine = r.cosine;
      rep.best_pencil = t;
      rep.best_source = src;
    }
  };

  if (krein.samples.empty())
  {
    // A = 0: the feasible set is empty and every ray reports angle 0.
    const auto t = OperatorOnSpace::identity(a.space());
    rep.candidates_tried++;
    consider(t, angle(a, t, cfg), CandidateSource::Ray);
  }
  for (const auto &s : krein.samples)
  {
    const OperatorOnSpace t(a.space(), std::polar(1.0, s.theta) * CMatrix::Identity(n, n));
    rep.candidates_tried++;
    if (pencil_membership(a, t, opt.t_grid, opt.tol_factor).is_member)
    {
      consider(t, s.report, CandidateSource::Ray);
    }
  }

  const auto dec = complementarity_oracle(a, opt.tol_factor);
  rep.complementary_by_oracle = dec.complementary;
  const OperatorOnSpace base = dec.factor_S ? *dec.factor_S : OperatorOnSpace::identity(a.space());
  if (dec.factor_S)
  {
    rep.candidates_tried++;
    if (pencil_membership(a, base, opt.t_grid, opt.tol_factor).is_member)
    {
      consider(base, angle(a, base, cfg), CandidateSource::Factor);
    }
  }

  const CMatrix &kb = dec.kernel_basis.vectors;
  const Index k = kb.cols();
  const CMatrix off_kernel = CMatrix::Identity(n, n) - kb * kb.adjoint();
  std::mt19937_64 rng(cfg.seed ^ 0x9e3779b97f4a7c15ULL);
  std::normal_distribution<double> g;
  auto gaussian = [&](Index rows, Index cols) {
    CMatrix m(rows, cols);
    for (Index j = 0; j < cols; j++)
    {
      for (Index i = 0; i < rows; i++)
      {
        const double re = g(rng);
        const double im = g(rng);
        m(i, j) = Complex(re, im) / std::sqrt(2.0 * static_cast<double>(std::max<Index>(rows, 1)));
      }
    }
    return m;
  };
  constexpr int max_resamples = 10;
  for (int c = 0; c < opt.n_random; c++)
  {
    for (int attempt = 0; attempt < max_resamples; attempt++)
    {
      // K v = kb H kb^* v stays in N(A) for v in N(A).
      const CMatrix kmat = gaussian(n, n) * off_kernel + kb * gaussian(k, k) * kb.adjoint();
      const CMatrix pert = CMatrix::Identity(n, n) + opt.perturbation_scale * kmat;
      const OperatorOnSpace t(a.space(), base.entries() * pert);
      rep.candidates_tried++;
      if (pencil_membership(a, t, opt.t_grid, opt.tol_factor).is_member)
      {
        consider(t, angle(a, t, cfg), CandidateSource::Perturbation);
        break;
      }
    }
  }

  rep.margin = std::numbers::pi - rep.generalized_upper_bound;
  rep.classification = rep.margin >= opt.margin_threshold ? Classification::BelowPi : Classification::AtPi;
  rep.ray_samples = std::move(krein.samples);
  return rep;
}

}  // namespace optrig
