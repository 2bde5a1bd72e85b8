#pragma once

#include <memory>
#include <vector>

#include "fsi/fem.hpp"

namespace fsi {

struct CoupledParams {
  double rho_f = 1.0;  // fluid density
  double mu = 1.0;     // viscosity
  double rho_s = 1.0;  // beam inertia
  double gamma = 1.0;  // beam damping, -gamma d_y^2 d_t eta
  double alpha = 1.0;  // beam stiffness, alpha d_y^4 eta
  double denom_threshold = 1e-3;  // relative to the boundary length, for c_pi
  double compat_tol = 1e-8;
};

/// Beam vectors use the real basis of beam_basis(): [1, cos 2 pi y, sin 2 pi y, ...].
struct CoupledState {
  double t = 0.0;
  VectorXd u;       // full P2 velocity, boundary dofs = E w
  VectorXd pi0;     // pressure minus its J-weighted mean
  double c_pi = 0.0;
  VectorXd eta, w;  // beam displacement and velocity modes
  VectorXd w_prev;  // beam velocity one level back, for d_t^2 eta
  double c_pi_residual = 0.0;

  static CoupledState zero(const MixedSpace& s);
  VectorXd pressure() const { return pi0.array() + c_pi; }
  /// Max over boundary nodes of |u - (w n)|.
  double interface_defect(const MixedSpace& s) const;
};

/// Right-hand sides at quadrature points; empty vectors mean zero.
struct SourceBundle {
  std::vector<Vec2> bfh;   // volume load
  std::vector<Mat2> H;     // flux correction, tested against grad v
  std::vector<double> h;   // divergence data, B : grad u = h
  VectorXd g;              // beam load, modal coefficients
  double h_shift = 0.0;    // constant added by compatibility_project

  static SourceBundle zero(const MixedSpace& s);
  VectorXd load(const MixedSpace& s) const;        // int bfh . v + int H : grad v
  VectorXd divergence(const MixedSpace& s) const;  // int q h
  VectorXd beam(const MixedSpace& s) const;        // int g b_m
};

/// Shift h by a constant so that int h equals the discrete flux of the state's beam velocity.
SourceBundle compatibility_project(const SourceBundle& src, const CoupledState& state, const AssembledOperators& ops);

struct PressureSplit {
  VectorXd pi0;
  double c_pi = 0.0;
  double denominator = 0.0;
  double residual = 0.0;  // relative residual of the scalar c_pi identity
};

/// Backward-Euler monolithic fluid-beam step with coefficients frozen at ops.eta0.
/// The matrix is factorised once; step() can be called repeatedly.
class CoupledStepper {
 public:
  CoupledStepper(const AssembledOperators& ops, const CoupledParams& par, double dt);
  ~CoupledStepper();
  CoupledStepper(const CoupledStepper&) = delete;
  CoupledStepper& operator=(const CoupledStepper&) = delete;

  CoupledState step(const CoupledState& s, const SourceBundle& src) const;

  /// Split a total pressure at the new level into mean-free part and constant; residual of the
  /// mode-0 structure equation written in terms of pi0 and c_pi.
  PressureSplit pressure_split(const CoupledState& prev, const CoupledState& next, const VectorXd& pi,
                               const SourceBundle& src) const;

  /// Residual of the momentum/beam rows for a given new state and total pressure.
  double momentum_residual(const CoupledState& prev, const CoupledState& next, const VectorXd& pi,
                           const SourceBundle& src) const;

  const AssembledOperators& ops() const { return ops_; }
  const CoupledParams& params() const { return par_; }
  double dt() const { return dt_; }
  double flux_weight() const { return d1_; }  // 1^T D E e_0

 private:
  const AssembledOperators& ops_;
  CoupledParams par_;
  double dt_;
  SpMat S_, C_, system_;
  VectorXd beam_diag_;
  double d1_ = 0.0;
  struct Factor;
  std::unique_ptr<Factor> lu_;

  VectorXd rhs_x(const CoupledState& s, const SourceBundle& src) const;
};

struct EnergyRow {
  double t = 0.0, E = 0.0, D = 0.0, work_f = 0.0, work_g = 0.0, residual = 0.0, c_pi = 0.0;
};

double coupled_energy(const AssembledOperators& ops, const CoupledParams& par, const CoupledState& s);
double coupled_dissipation(const AssembledOperators& ops, const CoupledParams& par, const CoupledState& s);

/// Per-step ledger: r = E^{n+1} - E^n + dt D^{n+1} - dt (work_f + work_g), with work_f including the
/// pressure work int pi h. sources[n] drives the step from states[n] to states[n+1].
std::vector<EnergyRow> energy_report(const AssembledOperators& ops, const CoupledParams& par,
                                     const std::vector<CoupledState>& states,
                                     const std::vector<SourceBundle>& sources, double dt);

}  // namespace fsi
