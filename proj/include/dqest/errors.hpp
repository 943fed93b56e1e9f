#pragma once

#include <stdexcept>
#include <string>

namespace dqest {

// Base class for all errors raised by this library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Input fails a construction-time or precondition check (NaN/Inf entries,
// malformed shapes, alpha outside its admissible range, ...).
class InvalidInput : public Error {
 public:
  using Error::Error;
};

// The sample is constant where a non-degenerate distribution is required
// (e.g. the tilde transform at the atom of a point mass).
class DegenerateSample : public Error {
 public:
  using Error::Error;
};

// A normalizing denominator of an estimator is exactly zero
// (sum |S_k - t| = 0 in the expectile index).
class DegenerateDenominator : public Error {
 public:
  using Error::Error;
};

// The sum of marginal risk measures vanishes, so the diversification
// ratio (and its delta-method variance) is undefined.
class ZeroDenominator : public Error {
 public:
  using Error::Error;
};

// A moment/support assumption needed by a variance formula fails,
// e.g. the alpha-star equation has no root below the attainable range.
class AssumptionViolated : public Error {
 public:
  using Error::Error;
};

// A density plug-in evaluates to a non-positive value at a point where the
// asymptotic-variance formulas divide by it.
class NonPositiveDensity : public Error {
 public:
  using Error::Error;
};

// Quasi-likelihood optimization failed at every start.
class FitFailed : public Error {
 public:
  using Error::Error;
};

// A closed form that only holds for centered models was requested with a
// nonzero location.
class NotCentered : public Error {
 public:
  using Error::Error;
};

}  // namespace dqest
