#pragma once

#include <stdexcept>
#include <string>

namespace socheck {

/// Base class for all library errors.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

class ArityMismatch : public Error {
 public:
  using Error::Error;
};

/// hessian_vec was asked for a point on (or too close to) a tie surface.
class OnKink : public Error {
 public:
  using Error::Error;
};

/// Every sample fell inside the kink filter; the base point is buried in a
/// tie manifold. Perturb the point or supply an exact oracle.
class AllSamplesDiscarded : public Error {
 public:
  using Error::Error;
};

class EmptyEstimate : public Error {
 public:
  using Error::Error;
};

class NotSeparable : public Error {
 public:
  using Error::Error;
};

/// A component fails first-order differentiability at the query point, so
/// its second-order subdifferential is undefined there.
class NotDifferentiable : public Error {
 public:
  using Error::Error;
};

class NotInQ : public Error {
 public:
  using Error::Error;
};

class RankDeficient : public Error {
 public:
  using Error::Error;
};

class InfeasiblePoint : public Error {
 public:
  using Error::Error;
};

class PreconditionFailed : public Error {
 public:
  using Error::Error;
};

class NumericalFailure : public Error {
 public:
  using Error::Error;
};

/// Malformed problem/report input; the message carries a JSON-pointer-style
/// path to the offending element.
class ParseError : public Error {
 public:
  using Error::Error;
};

}  // namespace socheck
