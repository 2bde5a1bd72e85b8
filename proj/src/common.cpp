#include "fsi/common.hpp"

namespace fsi {

const char* to_string(ErrorCode c) {
  switch (c) {
    case ErrorCode::OutOfTube: return "OutOfTube";
    case ErrorCode::AmbiguousProjection: return "AmbiguousProjection";
    case ErrorCode::DisplacementTooLarge: return "DisplacementTooLarge";
    case ErrorCode::NewtonDivergence: return "NewtonDivergence";
    case ErrorCode::DegenerateJacobian: return "DegenerateJacobian";
    case ErrorCode::WindowTooLarge: return "WindowTooLarge";
    case ErrorCode::PowerIterationStall: return "PowerIterationStall";
    case ErrorCode::SolverFailure: return "SolverFailure";
    case ErrorCode::ScaleTooSmall: return "ScaleTooSmall";
    case ErrorCode::MeshingFailure: return "MeshingFailure";
    case ErrorCode::QuadratureMismatch: return "QuadratureMismatch";
    case ErrorCode::IncompatibleBoundaryData: return "IncompatibleBoundaryData";
    case ErrorCode::LinearSolveFailure: return "LinearSolveFailure";
    case ErrorCode::IncompatibleMean: return "IncompatibleMean";
    case ErrorCode::ZeroLoad: return "ZeroLoad";
    case ErrorCode::CompatibilityViolation: return "CompatibilityViolation";
    case ErrorCode::DegenerateDenominator: return "DegenerateDenominator";
    case ErrorCode::GridMismatch: return "GridMismatch";
    case ErrorCode::SlabTooLong: return "SlabTooLong";
    case ErrorCode::DegeneracyDuringIteration: return "DegeneracyDuringIteration";
    case ErrorCode::MaxIterExceeded: return "MaxIterExceeded";
    case ErrorCode::ConfigError: return "ConfigError";
  }
  return "Unknown";
}

}  // namespace fsi
