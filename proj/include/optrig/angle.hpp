#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numbers>
#include <optional>
#include <random>
#include <vector>

#include "optrig/linalg.hpp"
#include "optrig/nelder_mead.hpp"
#include "optrig/space.hpp"

namespace optrig
{

/// Multi-start search settings shared by every sphere minimization.
struct OptimizerConfig
{
  int n_starts = 64;
  int limit_starts = 8;   // per kernel, for the limits at N(A) and N(T); 0 disables
  int max_iters = 3000;   // per start
  double step_tol = 1e-10;
  double value_tol = 1e-8;
  double kernel_exclusion_radius = 1e-8;  // relative to |x|
  std::uint64_t seed = 20240917;

  void validate() const
  {
    if (n_starts < 1 || max_iters < 1 || limit_starts < 0)
    {
      throw InvalidInput("optimizer: n_starts and max_iters must be at least 1, limit_starts nonnegative");
    }
    if (!(step_tol > 0.0) || !(value_tol > 0.0) || !(kernel_exclusion_radius > 0.0))
    {
      throw InvalidInput("optimizer: tolerances must be positive");
    }
  }
};

/// Result of estimating cos_T(A) = inf Re[Ax, Tx] / (|Ax| |Tx|).
///
/// The cosine is the best value found, hence an upper bound of the infimum,
/// and the angle a lower bound of the true angle.
struct AngleReport
{
  double cosine = 1.0;
  double angle = 0.0;
  Vector witness;
  int n_starts = 0;  // starts actually run
  int n_converged = 0;
  double spread = 0.0;  // second-best start value minus best
  bool degenerate = false;
};

namespace detail
{

inline double clamp_cosine(double c) { return std::clamp(c, -1.0, 1.0); }

/// Evaluates the angle ratio without allocating. Points within the exclusion
/// radius of N(A) or N(T) are reported as infeasible.
class RatioEvaluator
{
public:
  RatioEvaluator(const CMatrix &a, const CMatrix &t, double p, double radius)
      : a_(a), t_(t), p_(p), radius_(radius), n_(a.rows()), x_(n_), ax_(n_), tx_(n_)
  {
  }

  std::optional<double> operator()(const CVector &x)
  {
    const double nx = lp_norm(x, p_);
    if (!(nx > 0.0))
    {
      return std::nullopt;
    }
    ax_.noalias() = a_ * x;
    tx_.noalias() = t_ * x;
    const double nax = lp_norm(ax_, p_);
    const double ntx = lp_norm(tx_, p_);
    if (!(nax > radius_ * nx) || !(ntx > radius_ * nx))
    {
      return std::nullopt;
    }
    ax_ /= nax;
    return clamp_cosine(sip(ax_, tx_, p_).real() / ntx);
  }

  /// Real parameterization z = (Re x, Im x) of C^n.
  double operator()(const Eigen::VectorXd &z)
  {
    unpack(z, x_);
    const auto v = (*this)(x_);
    return v ? *v : std::numeric_limits<double>::infinity();
  }

  Index dim() const { return n_; }

  static void unpack(const Eigen::VectorXd &z, CVector &x)
  {
    const Index n = z.size() / 2;
    for (Index j = 0; j < n; j++)
    {
      x(j) = Complex(z(j), z(n + j));
    }
  }

  static Eigen::VectorXd pack(const CVector &x)
  {
    const Index n = x.size();
    Eigen::VectorXd z(2 * n);
    z.head(n) = x.real();
    z.tail(n) = x.imag();
    return z;
  }

private:
  const CMatrix &a_;
  const CMatrix &t_;
  double p_;
  double radius_;
  Index n_;
  CVector x_, ax_, tx_;
};

/// Limits of the ratio at a kernel. For x = k + eps w with k in N(A) the ratio
/// tends to Re[Aw, Tk] / (|Aw| |Tk|) as eps -> 0; for k in N(T) it equals
/// Re[Ak + eps Aw, Tw] / (|Ak + eps Aw| |Tw|) and tends to the value at
/// eps = 0. Both are searched over (c, w) with k = K c, which keeps the
/// scales apart that a search over x would have to shrink together.
class KernelLimitEvaluator
{
public:
  enum class Side
  {
    KernelOfA,
    KernelOfT
  };

  KernelLimitEvaluator(const CMatrix &a, const CMatrix &t, const CMatrix &kernel, Side side, double p, double radius)
      : a_(a), t_(t), kernel_(kernel), side_(side), p_(p), radius_(radius), n_(a.rows()), y_(kernel.cols() + n_),
        k_(n_), u_(n_), v_(n_)
  {
  }

  double operator()(const Eigen::VectorXd &z)
  {
    RatioEvaluator::unpack(z, y_);
    const Index kdim = kernel_.cols();
    k_.noalias() = kernel_ * y_.head(kdim);
    const double nk = lp_norm(k_, p_);
    const double nw = lp_norm(CVector(y_.tail(n_)), p_);
    if (!(nk > 0.0) || !(nw > 0.0))
    {
      return std::numeric_limits<double>::infinity();
    }
    // u plays the role of Ax, v the role of Tx.
    if (side_ == Side::KernelOfA)
    {
      u_.noalias() = a_ * y_.tail(n_);
      v_.noalias() = t_ * k_;
    }
    else
    {
      u_.noalias() = a_ * k_;
      v_.noalias() = t_ * y_.tail(n_);
    }
    const double nu = lp_norm(u_, p_);
    const double nv = lp_norm(v_, p_);
    const double su = side_ == Side::KernelOfA ? nw : nk;
    const double sv = side_ == Side::KernelOfA ? nk : nw;
    if (!(nu > radius_ * su) || !(nv > radius_ * sv))
    {
      return std::numeric_limits<double>::infinity();
    }
    u_ /= nu;
    return clamp_cosine(sip(u_, v_, p_).real() / nv);
  }

  /// A point x = k + eps w realizing the limit up to O(eps), with eps small
  /// enough to stay close yet outside the exclusion radius.
  CVector approach_point(const CVector &y, double eps) const
  {
    const Index kdim = kernel_.cols();
    const CVector k = kernel_ * y.head(kdim);
    const CVector w = y.tail(n_);
    return k / lp_norm(k, p_) + eps * w / lp_norm(w, p_);
  }

  Index search_dim() const { return kernel_.cols() + n_; }

private:
  const CMatrix &a_;
  const CMatrix &t_;
  const CMatrix &kernel_;
  Side side_;
  double p_;
  double radius_;
  Index n_;
  CVector y_, k_, u_, v_;
};

inline CVector random_unit(Index n, std::mt19937_64 &rng)
{
  std::normal_distribution<double> g;
  CVector x(n);
  for (Index j = 0; j < n; j++)
  {
    const double re = g(rng);
    const double im = g(rng);
    x(j) = Complex(re, im);
  }
  return x / x.norm();
}

/// Start points for the multi-start search. Besides uniform points on the
/// sphere, a share of starts is placed at random offsets from random kernel
/// vectors, since the infimum is typically approached near N(A) or N(T).
struct StartPoint
{
  CVector x;
  double step;
};

inline std::vector<StartPoint> start_points(Index n, const std::vector<CMatrix> &kernels, int n_starts,
                                            std::mt19937_64 &rng)
{
  std::vector<const CMatrix *> seeded;
  for (const auto &k : kernels)
  {
    if (k.cols() > 0)
    {
      seeded.push_back(&k);
    }
  }
  std::uniform_real_distribution<double> log_offset(-3.0, -1.0);
  std::vector<StartPoint> out;
  out.reserve(static_cast<std::size_t>(n_starts));
  std::size_t next_kernel = 0;
  for (int s = 0; s < n_starts; s++)
  {
    if (!seeded.empty() && s % 4 != 0)
    {
      const CMatrix &k = *seeded[next_kernel++ % seeded.size()];
      CVector v = k * random_unit(k.cols(), rng);
      const double eta = std::pow(10.0, log_offset(rng));
      CVector x = v / v.norm() + eta * random_unit(n, rng);
      out.push_back({x / x.norm(), 0.5 * eta});
    }
    else
    {
      out.push_back({random_unit(n, rng), 0.25});
    }
  }
  return out;
}

struct SearchOutcome
{
  CVector best_x;
  double best_value = std::numeric_limits<double>::infinity();
  int n_starts = 0;
  int n_converged = 0;
  double spread = 0.0;
  bool found = false;
};

/// Minimizes a scale-invariant objective of x in C^n over multi-start points.
/// Stops early once a start attains value_floor, a known lower bound of the
/// objective.
template <typename Objective>
SearchOutcome multistart_minimize(Objective &objective, Index n, const std::vector<CMatrix> &kernels,
                                  const OptimizerConfig &cfg,
                                  double value_floor = -std::numeric_limits<double>::infinity())
{
  std::mt19937_64 rng(cfg.seed);
  const auto starts = start_points(n, kernels, cfg.n_starts, rng);
  const NelderMeadOptions nm{cfg.max_iters, cfg.step_tol, cfg.value_tol, value_floor};

  SearchOutcome out;
  std::vector<double> finals;
  finals.reserve(starts.size());
  for (const auto &s : starts)
  {
    Eigen::VectorXd z0 = RatioEvaluator::pack(s.x);
    if (!std::isfinite(objective(z0)))
    {
      continue;
    }
    auto r = nelder_mead(objective, z0, s.step, nm);
    if (r.converged)
    {
      out.n_converged++;
    }
    finals.push_back(r.value);
    // Strict improvement keeps the earliest start on ties, so reports only
    // depend on the seed.
    if (r.value < out.best_value)
    {
      out.best_value = r.value;
      out.best_x = CVector(n);
      RatioEvaluator::unpack(r.x, out.best_x);
      out.found = true;
    }
    out.n_starts++;
    if (out.best_value <= value_floor)
    {
      break;
    }
  }
  std::sort(finals.begin(), finals.end());
  if (finals.size() > 1)
  {
    out.spread = finals[1] - finals[0];
  }
  return out;
}

inline CVector normalized(const CVector &x, double p) { return x / lp_norm(x, p); }

}  // namespace detail

/// Re[Ax, Tx] / (|Ax| |Tx|) at a single point. Throws NearKernel when |Ax| or
/// |Tx| is within radius * |x| of zero.
inline double cosine_ratio(const OperatorOnSpace &a, const OperatorOnSpace &t, const Vector &x,
                           double radius = OptimizerConfig{}.kernel_exclusion_radius)
{
  detail::require_same_space(a.space(), t.space(), "cosine_ratio");
  detail::require_same_space(a.space(), x.space(), "cosine_ratio");
  detail::RatioEvaluator eval(a.entries(), t.entries(), a.p(), radius);
  const auto v = eval(x.coords());
  if (!v)
  {
    throw NearKernel("cosine_ratio: point lies in a kernel neighborhood of A or T");
  }
  return *v;
}

/// Estimates cos_T(A) and the angle phi_T(A) by multi-start minimization over
/// the unit sphere with kernel neighborhoods removed.
///
/// When A = 0 or T = 0 the feasible set is empty: the report carries
/// cosine 1, angle 0 and the degenerate flag.
inline AngleReport angle(const OperatorOnSpace &a, const OperatorOnSpace &t, const OptimizerConfig &cfg = {})
{
  detail::require_same_space(a.space(), t.space(), "angle");
  cfg.validate();
  const Index n = a.dim();
  const double p = a.p();

  const auto rk_a = detail::range_kernel(a.entries(), 1.0);
  const auto rk_t = detail::range_kernel(t.entries(), 1.0);

  AngleReport rep{1.0, 0.0, Vector::zero(a.space()), cfg.n_starts, 0, 0.0, false};
  if (rk_a.profile.rank == 0 || rk_t.profile.rank == 0)
  {
    rep.degenerate = true;
    return rep;
  }

  detail::RatioEvaluator eval(a.entries(), t.entries(), p, cfg.kernel_exclusion_radius);
  // The ratio never drops below -1: a start within value_tol of it ends the search.
  const auto found = detail::multistart_minimize(eval, n, {rk_a.kernel, rk_t.kernel}, cfg, -1.0 + cfg.value_tol);
  if (!found.found)
  {
    rep.degenerate = true;
    return rep;
  }
  rep.cosine = detail::clamp_cosine(found.best_value);
  rep.witness = Vector(a.space(), detail::normalized(found.best_x, p));

  // Infima approached next to a kernel are searched through their limits,
  // then realized by a point close to the kernel so the cosine stays a value
  // of the ratio.
  const double floor = -1.0 + cfg.value_tol;
  auto search_limit = [&](const CMatrix &kernel, detail::KernelLimitEvaluator::Side side) {
    if (kernel.cols() == 0 || cfg.limit_starts == 0 || rep.cosine <= floor)
    {
      return;
    }
    detail::KernelLimitEvaluator limit(a.entries(), t.entries(), kernel, side, p, cfg.kernel_exclusion_radius);
    OptimizerConfig sub = cfg;
    sub.n_starts = cfg.limit_starts;
    const auto lim = detail::multistart_minimize(limit, limit.search_dim(), {}, sub, floor);
    if (!lim.found || !(lim.best_value < rep.cosine))
    {
      return;
    }
    for (double eps = 1e-3; eps >= 1e-7; eps /= 10.0)
    {
      const CVector x = limit.approach_point(lim.best_x, eps);
      const auto v = eval(x);
      if (v && *v < rep.cosine)
      {
        rep.cosine = *v;
        rep.witness = Vector(a.space(), detail::normalized(x, p));
      }
    }
  };
  search_limit(rk_a.kernel, detail::KernelLimitEvaluator::Side::KernelOfA);
  search_limit(rk_t.kernel, detail::KernelLimitEvaluator::Side::KernelOfT);

  rep.angle = std::acos(rep.cosine);
  rep.n_starts = found.n_starts;
  rep.n_converged = found.n_converged;
  rep.spread = found.spread;
  return rep;
}

/// The angle along the ray of direction theta, i.e. angle(A, e^{i theta} I).
inline AngleReport ray_angle(const OperatorOnSpace &a, double theta, const OptimizerConfig &cfg = {})
{
  const Complex phase = std::polar(1.0, theta);
  return angle(a, OperatorOnSpace(a.space(), phase * CMatrix::Identity(a.dim(), a.dim())), cfg);
}

}  // namespace optrig
