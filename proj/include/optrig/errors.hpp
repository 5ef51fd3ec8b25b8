#pragma once

#include <stdexcept>
#include <string>

namespace optrig
{

/// Base class of every error raised by the library.
class Error : public std::runtime_error
{
public:
  using std::runtime_error::runtime_error;
};

/// Malformed input: wrong dimensions, non-finite entries, p outside (1, inf).
class InvalidInput : public Error
{
public:
  using Error::Error;
};

/// Malformed matrix or vector document.
class ParseError : public Error
{
public:
  using Error::Error;
};

class SingularOperator : public Error
{
public:
  using Error::Error;
};

/// A point lies within the kernel-exclusion radius of N(A) or N(T). Signals an
/// infeasible evaluation point, not a fault.
class NearKernel : public Error
{
public:
  using Error::Error;
};

class NontrivialKernel : public Error
{
public:
  using Error::Error;
};

/// Two mathematically equivalent rank tests disagreed (tolerance pathology).
class InternalInconsistency : public Error
{
public:
  using Error::Error;
};

/// A contraction iteration did not reach tolerance within its budget.
class StepStall : public Error
{
public:
  using Error::Error;
};

class PreconditionFailure : public Error
{
public:
  using Error::Error;
};

/// Orthogonal projections were requested on a non-Hilbert l_p space.
class NonHilbert : public Error
{
public:
  using Error::Error;
};

}  // namespace optrig
