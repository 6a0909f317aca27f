// Error types thrown by the loewner library. Each maps to one failure
// condition of a documented operation; the CLI translates them to exit codes.
#pragma once

#include <stdexcept>
#include <string>

namespace loewner {

inline constexpr double kPi = 3.14159265358979323846;

struct Error : std::runtime_error {
  explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

// Composition of slit maps produced NaN/Inf (step size too coarse for the
// driving oscillation, or evaluation point on the slit).
struct NonFiniteEvaluation : Error {
  using Error::Error;
};

// Unzipped points left the closed upper half-plane beyond tolerance.
struct SelfIntersection : Error {
  using Error::Error;
};

// Two consecutive trace points coincide (zero-capacity step).
struct DegenerateStep : Error {
  using Error::Error;
};

// Curve is not star-shaped about the chosen base point (fast fitting path).
struct NotStarShaped : Error {
  using Error::Error;
};

// Iterative fit stalled before reaching its residual target.
struct NoConvergence : Error {
  using Error::Error;
};

// Series logarithm hit a zero of f' inside the evaluation radius.
struct SeriesLogFailure : Error {
  using Error::Error;
};

// Interior and exterior maps do not bound the same curve.
struct MismatchedCurve : Error {
  using Error::Error;
};

struct QuadratureNoConvergence : Error {
  using Error::Error;
};

// Welding correspondence is not strictly increasing (under-resolved boundary).
struct MonotonicityViolation : Error {
  using Error::Error;
};

struct TruncationTooSmall : Error {
  using Error::Error;
};

// Grunsky operator norm >= 1: non-quasicircle data or under-resolved map.
struct NormAtLeastOne : Error {
  using Error::Error;
};

struct TruncationMismatch : Error {
  using Error::Error;
};

// All importance weights negligible; increase samples or eps.
struct ZeroHits : Error {
  using Error::Error;
};

struct DomainError : Error {
  using Error::Error;
};

// Chord approaches the slit R+ within tolerance.
struct SlitCollision : Error {
  using Error::Error;
};

// Malformed input file; message names the offending key or field.
struct ParseError : Error {
  using Error::Error;
};

}  // namespace loewner
