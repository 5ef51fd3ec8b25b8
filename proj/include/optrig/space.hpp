#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <string>
#include <utility>

#include <Eigen/Dense>

#include "optrig/errors.hpp"

namespace optrig
{

using Complex = std::complex<double>;
using CVector = Eigen::VectorXcd;
using CMatrix = Eigen::MatrixXcd;
using Index = Eigen::Index;

/// The space C^n equipped with the l_p norm, 1 < p < inf.
///
/// The endpoints p = 1 and p = inf are rejected: their norms are not smooth,
/// so the compatible semi-inner product is not unique.
class SpaceSpec
{
public:
  SpaceSpec(Index dim, double p) : dim_(dim), p_(p)
  {
    if (dim < 1)
    {
      throw InvalidInput("space dimension must be at least 1, got " + std::to_string(dim));
    }
    if (!std::isfinite(p) || !(p > 1.0))
    {
      throw InvalidInput("l_p exponent must lie in (1, inf), got " + std::to_string(p));
    }
  }

  Index dim() const { return dim_; }
  double p() const { return p_; }
  bool is_hilbert() const { return p_ == 2.0; }

  friend bool operator==(const SpaceSpec &, const SpaceSpec &) = default;

private:
  Index dim_;
  double p_;
};

namespace detail
{

template <typename Derived>
bool all_finite(const Eigen::DenseBase<Derived> &m)
{
  return m.allFinite();
}

inline void require_same_space(const SpaceSpec &a, const SpaceSpec &b, const char *what)
{
  if (!(a == b))
  {
    throw InvalidInput(std::string(what) + ": operands live on different spaces");
  }
}

/// |z| for arguments of modulus at most about 1, where hypot's overflow
/// guard is not needed.
inline double modulus(Complex z) { return std::sqrt(z.real() * z.real() + z.imag() * z.imag()); }

/// base^e with integral exponents up to 4 expanded into products.
inline double pow_fast(double base, double e)
{
  if (e == 2.0)
  {
    return base * base;
  }
  if (e == 1.0)
  {
    return base;
  }
  if (e == 3.0)
  {
    return base * base * base;
  }
  if (e == 4.0)
  {
    const double b2 = base * base;
    return b2 * b2;
  }
  return std::pow(base, e);
}

}  // namespace detail

/// (sum_j |x_j|^p)^(1/p), evaluated with max-scaling to avoid under/overflow.
inline double lp_norm(const CVector &x, double p)
{
  // Scaling by the largest real or imaginary part keeps the squares below
  // overflow without the cost of hypot.
  double scale = 0.0;
  for (Index j = 0; j < x.size(); j++)
  {
    scale = std::max({scale, std::abs(x(j).real()), std::abs(x(j).imag())});
  }
  if (scale == 0.0)
  {
    return 0.0;
  }
  if (p == 2.0)
  {
    return (x / scale).norm() * scale;
  }
  double acc = 0.0;
  for (Index j = 0; j < x.size(); j++)
  {
    acc += detail::pow_fast(detail::modulus(x(j) / scale), p);
  }
  return scale * std::pow(acc, 1.0 / p);
}

/// Giles semi-inner product on l_p:
///   [x, y] = |y|^(2-p) * sum_j x_j |y_j|^(p-2) conj(y_j),
/// where summands with y_j = 0 contribute 0 and [x, 0] = 0.
/// Linear in x, conjugate-homogeneous in y, [x, x] = |x|^2.
inline Complex sip(const CVector &x, const CVector &y, double p)
{
  const double ny = lp_norm(y, p);
  if (ny == 0.0)
  {
    return 0.0;
  }
  if (p == 2.0)
  {
    return y.dot(x);  // sum_j conj(y_j) x_j
  }
  // With u = y/|y|: [x, y] = |y| * sum_j x_j |u_j|^(p-1) conj(u_j)/|u_j|.
  Complex acc = 0.0;
  for (Index j = 0; j < y.size(); j++)
  {
    const Complex u = y(j) / ny;
    const double m = detail::modulus(u);
    if (m == 0.0)
    {
      continue;
    }
    acc += x(j) * detail::pow_fast(m, p - 1.0) * std::conj(u / m);
  }
  return ny * acc;
}

/// A coordinate vector of a SpaceSpec.
class Vector
{
public:
  Vector(SpaceSpec space, CVector coords) : space_(space), coords_(std::move(coords))
  {
    if (coords_.size() != space_.dim())
    {
      throw InvalidInput("vector length " + std::to_string(coords_.size()) + " does not match space dimension " +
                         std::to_string(space_.dim()));
    }
    if (!detail::all_finite(coords_))
    {
      throw InvalidInput("vector has non-finite entries");
    }
  }

  static Vector zero(SpaceSpec space) { return Vector(space, CVector::Zero(space.dim())); }

  const SpaceSpec &space() const { return space_; }
  const CVector &coords() const { return coords_; }
  Index dim() const { return space_.dim(); }

private:
  SpaceSpec space_;
  CVector coords_;
};

/// A dense complex square matrix acting on a SpaceSpec.
class OperatorOnSpace
{
public:
  OperatorOnSpace(SpaceSpec space, CMatrix entries) : space_(space), entries_(std::move(entries))
  {
    if (entries_.rows() != space_.dim() || entries_.cols() != space_.dim())
    {
      throw InvalidInput("operator must be " + std::to_string(space_.dim()) + "x" + std::to_string(space_.dim()) +
                         ", got " + std::to_string(entries_.rows()) + "x" + std::to_string(entries_.cols()));
    }
    if (!detail::all_finite(entries_))
    {
      throw InvalidInput("operator has non-finite entries");
    }
  }

  static OperatorOnSpace identity(SpaceSpec space)
  {
    return OperatorOnSpace(space, CMatrix::Identity(space.dim(), space.dim()));
  }
  static OperatorOnSpace zero(SpaceSpec space)
  {
    return OperatorOnSpace(space, CMatrix::Zero(space.dim(), space.dim()));
  }

  const SpaceSpec &space() const { return space_; }
  const CMatrix &entries() const { return entries_; }
  Index dim() const { return space_.dim(); }
  double p() const { return space_.p(); }

  Vector apply(const Vector &x) const
  {
    detail::require_same_space(space_, x.space(), "apply");
    return Vector(space_, entries_ * x.coords());
  }

  friend OperatorOnSpace operator*(const OperatorOnSpace &a, const OperatorOnSpace &b)
  {
    detail::require_same_space(a.space_, b.space_, "operator product");
    return OperatorOnSpace(a.space_, a.entries_ * b.entries_);
  }
  friend OperatorOnSpace operator+(const OperatorOnSpace &a, const OperatorOnSpace &b)
  {
    detail::require_same_space(a.space_, b.space_, "operator sum");
    return OperatorOnSpace(a.space_, a.entries_ + b.entries_);
  }
  friend OperatorOnSpace operator-(const OperatorOnSpace &a, const OperatorOnSpace &b)
  {
    detail::require_same_space(a.space_, b.space_, "operator difference");
    return OperatorOnSpace(a.space_, a.entries_ - b.entries_);
  }
  friend OperatorOnSpace operator*(Complex s, const OperatorOnSpace &a)
  {
    return OperatorOnSpace(a.space_, s * a.entries_);
  }

private:
  SpaceSpec space_;
  CMatrix entries_;
};

inline double lp_norm(const Vector &x) { return lp_norm(x.coords(), x.space().p()); }

inline Complex sip(const Vector &x, const Vector &y)
{
  detail::require_same_space(x.space(), y.space(), "sip");
  return sip(x.coords(), y.coords(), x.space().p());
}

/// Block-diagonal A (+) B on C^(n+m); both blocks must share the exponent p.
inline OperatorOnSpace direct_sum(const OperatorOnSpace &a, const OperatorOnSpace &b)
{
  if (a.p() != b.p())
  {
    throw InvalidInput("direct_sum: blocks use different l_p exponents");
  }
  const Index n = a.dim() + b.dim();
  CMatrix m = CMatrix::Zero(n, n);
  m.topLeftCorner(a.dim(), a.dim()) = a.entries();
  m.bottomRightCorner(b.dim(), b.dim()) = b.entries();
  return OperatorOnSpace(SpaceSpec(n, a.p()), std::move(m));
}

/// Largest entry modulus, used for the entrywise tolerances throughout.
inline double max_abs(const CMatrix &m) { return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff(); }

}  // namespace optrig
