#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <vector>

#include <Eigen/Core>

namespace optrig
{

struct NelderMeadOptions
{
  int max_iters = 500;      // total iterations, restarts included
  double step_tol = 1e-10;  // simplex diameter (infinity norm)
  double value_tol = 1e-8;  // spread of function values over the simplex
  double value_floor = -std::numeric_limits<double>::infinity();  // known lower bound of f
};

struct NelderMeadResult
{
  Eigen::VectorXd x;
  double value = std::numeric_limits<double>::infinity();
  int iterations = 0;
  bool converged = false;
};

/// Derivative-free minimization with dimension-adaptive coefficients
/// (Gao & Han 2012). Infeasible points may return +inf; they are never
/// accepted as improvements.
///
/// After the simplex collapses the search restarts from the best vertex with a
/// fresh simplex of the initial size, and stops once a restart fails to improve
/// the value by more than value_tol, the value reaches value_floor, or the
/// iteration budget is spent.
template <typename F>
NelderMeadResult nelder_mead(F &&f, const Eigen::VectorXd &x0, double initial_step, const NelderMeadOptions &opt)
{
  const Eigen::Index m = x0.size();
  const double dm = static_cast<double>(m);
  const double alpha = 1.0;
  const double beta = 1.0 + 2.0 / dm;           // expansion
  const double gamma = 0.75 - 1.0 / (2.0 * dm);  // contraction
  const double delta = 1.0 - 1.0 / dm;           // shrink

  NelderMeadResult res;
  res.x = x0;
  res.value = f(x0);

  std::vector<Eigen::VectorXd> simplex(m + 1, Eigen::VectorXd(m));
  std::vector<double> values(m + 1);
  std::vector<int> order(m + 1);
  Eigen::VectorXd centroid(m), xr(m), xe(m), xc(m);

  int iters = 0;
  while (iters < opt.max_iters)
  {
    const double start_value = res.value;
    simplex[0] = res.x;
    values[0] = res.value;
    for (Eigen::Index i = 0; i < m; i++)
    {
      simplex[i + 1] = res.x;
      simplex[i + 1](i) += initial_step;
      values[i + 1] = f(simplex[i + 1]);
      if (!std::isfinite(values[i + 1]))
      {
        simplex[i + 1](i) -= 2.0 * initial_step;
        values[i + 1] = f(simplex[i + 1]);
      }
    }

    bool collapsed = false;
    while (iters < opt.max_iters)
    {
      std::iota(order.begin(), order.end(), 0);
      std::sort(order.begin(), order.end(), [&](int a, int b) { return values[a] < values[b]; });
      const int best = order.front();
      const int worst = order.back();
      const int second_worst = order[m - 1];

      double diameter = 0.0;
      for (Eigen::Index i = 0; i <= m; i++)
      {
        diameter = std::max(diameter, (simplex[i] - simplex[best]).lpNorm<Eigen::Infinity>());
      }
      const double spread = values[worst] - values[best];
      if (values[best] <= opt.value_floor)
      {
        collapsed = true;
        break;
      }
      if (diameter <= opt.step_tol || (std::isfinite(spread) && spread <= opt.value_tol))
      {
        collapsed = true;
        break;
      }
      iters++;

      centroid.setZero();
      for (Eigen::Index i = 0; i <= m; i++)
      {
        if (i != worst)
        {
          centroid += simplex[i];
        }
      }
      centroid /= dm;

      xr = centroid + alpha * (centroid - simplex[worst]);
      const double fr = f(xr);
      if (fr < values[best])
      {
        xe = centroid + beta * (xr - centroid);
        const double fe = f(xe);
        if (fe < fr)
        {
          simplex[worst] = xe;
          values[worst] = fe;
        }
        else
        {
          simplex[worst] = xr;
          values[worst] = fr;
        }
        continue;
      }
      if (fr < values[second_worst])
      {
        simplex[worst] = xr;
        values[worst] = fr;
        continue;
      }
      if (fr < values[worst])
      {
        xc = centroid + gamma * (xr - centroid);
        const double fc = f(xc);
        if (fc <= fr)
        {
          simplex[worst] = xc;
          values[worst] = fc;
          continue;
        }
      }
      else
      {
        xc = centroid - gamma * (centroid - simplex[worst]);
        const double fc = f(xc);
        if (fc < values[worst])
        {
          simplex[worst] = xc;
          values[worst] = fc;
          continue;
        }
      }
      for (Eigen::Index i = 0; i <= m; i++)
      {
        if (i != best)
        {
          simplex[i] = simplex[best] + delta * (simplex[i] - simplex[best]);
          values[i] = f(simplex[i]);
        }
      }
    }

    const auto it = std::min_element(values.begin(), values.end());
    const auto bi = static_cast<std::size_t>(it - values.begin());
    if (*it < res.value)
    {
      res.value = *it;
      res.x = simplex[bi];
    }
    if (!collapsed)
    {
      break;
    }
    if (!(start_value - res.value > opt.value_tol) || res.value <= opt.value_floor)
    {
      res.converged = true;
      break;
    }
  }
  res.iterations = iters;
  return res;
}

}  // namespace optrig
