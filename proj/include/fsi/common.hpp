#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace fsi {

using Vec2 = Eigen::Vector2d;
using Mat2 = Eigen::Matrix2d;

enum class ErrorCode {
  OutOfTube,
  AmbiguousProjection,
  DisplacementTooLarge,
  NewtonDivergence,
  DegenerateJacobian,
  WindowTooLarge,
  PowerIterationStall,
  SolverFailure,
  ScaleTooSmall,
  MeshingFailure,
  QuadratureMismatch,
  IncompatibleBoundaryData,
  LinearSolveFailure,
  IncompatibleMean,
  ZeroLoad,
  CompatibilityViolation,
  DegenerateDenominator,
  GridMismatch,
  SlabTooLong,
  DegeneracyDuringIteration,
  MaxIterExceeded,
  ConfigError,
};

const char* to_string(ErrorCode c);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}
  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kTwoPi = 2.0 * kPi;

/// Rotate by -90 degrees: (a, b) -> (b, -a). Outward normal of a counter-clockwise tangent.
inline Vec2 rot_cw(const Vec2& v) { return Vec2(v.y(), -v.x()); }

/// Wrap a parameter into [0, 1).
inline double wrap01(double y) {
  double r = y - std::floor(y);
  return r >= 1.0 ? 0.0 : r;
}

/// Periodic distance between two parameters.
inline double param_distance(double a, double b) {
  double d = std::abs(wrap01(a) - wrap01(b));
  return std::min(d, 1.0 - d);
}

}  // namespace fsi
