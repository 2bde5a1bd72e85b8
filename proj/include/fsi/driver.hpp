#pragma once

#include <memory>
#include <string>
#include <vector>

#include "fsi/nonlinear.hpp"

namespace fsi {

/// Reference curve families. A horseshoe is a thick circular arc of centreline radius `radius`,
/// half width `half_width` and rounded tips `gap` apart; its exterior gap is what lets two
/// boundary arcs meet under admissible displacements.
struct GeometrySpec {
  std::string type = "circle";  // circle | ellipse | horseshoe
  double radius = 1.0;
  double a = 1.0, b = 1.0;      // ellipse semi-axes
  double half_width = 0.3, gap = 0.12;
  int modes = 64;               // Fourier modes kept for the horseshoe
  double L = 0.3;
  double alpha_fraction = 0.5;
};

ReferenceGeometry make_geometry(const GeometrySpec& spec);

/// Beam profile: mean + sum a_k cos(2 pi k y) + b_k sin(2 pi k y) + periodic Gaussian bumps.
struct BeamSpec {
  struct Bump {
    double y = 0.0, amplitude = 0.0, width = 0.05;
  };
  double mean = 0.0;
  std::vector<std::pair<int, double>> cos, sin;
  std::vector<Bump> bumps;

  bool empty() const { return mean == 0.0 && cos.empty() && sin.empty() && bumps.empty(); }
  PeriodicField field(int max_mode) const;
};

struct TimeProfile {
  std::string kind = "constant";  // constant | ramp | sine
  double ramp = 1.0;              // ramp: min(t / ramp, 1)
  double omega = kTwoPi;          // sine: sin(omega t)
  double operator()(double t) const;
};

/// f(x, t) = scale * profile(t) * (c + M x).
struct FluidForcing {
  Vec2 c = Vec2::Zero();
  Mat2 M = Mat2::Zero();
  double scale = 1.0;
  TimeProfile time;
  bool is_zero() const { return scale == 0.0 || (c.isZero(0.0) && M.isZero(0.0)); }
};

/// g(y, t) = scale * profile(t) * profile field.
struct BeamForcing {
  BeamSpec shape;
  double scale = 1.0;
  TimeProfile time;
  bool is_zero() const { return scale == 0.0 || shape.empty(); }
};

struct RunConfig {
  GeometrySpec geometry;
  double mesh_h = 0.25;
  int beam_modes = 6;
  CoupledParams constants;
  BeamSpec eta0, eta1;
  std::string u0 = "extension";  // extension | rotation
  double u0_amplitude = 0.0;     // rotation about the centroid, added in the interior
  FluidForcing f;
  BeamForcing g;
  double T = 1.0, t_star = 0.1, dt = 0.01;
  double picard_tol = 1e-8, theta_max = 0.9;
  int max_iter = 50;
  DegeneracyThresholds degeneracy;
  double displacement_guard = 0.95;  // fraction of alpha
  int max_halvings = 10;             // T*_min = T / 2^max_halvings
  unsigned seed = 0;
  int vtk_every = 0;                 // snapshot every n levels, 0 = final state only
};

/// Geometry and spaces of one run. Kept behind a pointer since the space refers to the geometry.
struct Discretization {
  std::unique_ptr<ReferenceGeometry> geometry;
  std::unique_ptr<MixedSpace> space;
};
std::shared_ptr<const Discretization> discretize(const RunConfig& cfg);

/// ProblemData (constants and forcing closures) of a config on a given space.
ProblemData problem_data(const RunConfig& cfg, const MixedSpace& s);

struct InitialData {
  CoupledState state;
  double eta1_shift = 0.0;      // change of the mean of eta1 for zero net flux
  double divergence_before = 0.0;    // ||D u0||_2 before the correction
  double divergence_residual = 0.0;  // ||D u0||_2 after the correction
};

/// Initial state: eta0, eta1 with zero discrete flux, u0 = harmonic extension of eta1 n plus the
/// optional interior field, corrected to be discretely divergence free.
InitialData initial_state(const RunConfig& cfg, const MixedSpace& s);

/// Checks constants, displacement and geometry of the initial data. Throws ConfigError.
void validate(const RunConfig& cfg, const MixedSpace& s);

enum class Termination { Horizon, SelfIntersection, Degeneracy, DisplacementLimit, SolverFailure };
const char* to_string(Termination t);

struct IterationRow {
  int slab = 0, iter = 0;
  double t0 = 0.0, t_star = 0.0, distance = 0.0, theta = 0.0;
};

struct SlabRecord {
  double t0 = 0.0, t1 = 0.0, t_star = 0.0, dt = 0.0;
  int iterations = 0, halvings = 0;
  double max_theta = 0.0;
  int first_level = 0, last_level = 0;  // indices into RunResult::states
};

/// Level diagnostics of the terminal state.
struct GeometryCheck {
  bool self_intersection = false;
  DegeneracyReport degeneracy;
  double sup_eta = 0.0;
  double guard = 0.0;  // displacement_guard * alpha
};
GeometryCheck check_geometry(const RunConfig& cfg, const ReferenceGeometry& g, const PeriodicField& eta);

struct RunResult {
  std::shared_ptr<const Discretization> disc;
  std::vector<CoupledState> states;   // every accepted level, states[0] = initial
  std::vector<VectorXd> beam_load;    // g modes at each level
  std::vector<EnergyRow> ledger;      // one row per level, physical coefficients
  std::vector<IterationRow> iterations;
  std::vector<SlabRecord> slabs;
  Termination termination = Termination::Horizon;
  std::string message;
  GeometryCheck final_check;
  double t_end = 0.0;
  InitialData initial;
};

/// Chains Picard slabs from 0 to T. Failures end the run with a termination reason; only
/// ConfigError is thrown.
RunResult run(const RunConfig& cfg);

/// Energy ledger of a level sequence with coefficients at the physical displacement of each level:
/// E = rho_f/2 int J|u|^2 + rho_s/2 |w|^2 + alpha/2 |eta''|^2, D = mu int grad u A : grad u + gamma |w'|^2,
/// work = int J f(Psi) . u + int g w, residual = E^{n+1} - E^n + dt (D^{n+1} - work^{n+1}).
std::vector<EnergyRow> physical_ledger(const MixedSpace& s, const ProblemData& data,
                                       const std::vector<CoupledState>& states);

struct AccelerationTable {
  double sup_grad_u = 0.0;     // sup int |grad u|^2
  double sum_fluid = 0.0;      // sum dt int |D^2 u|^2 + |d_t u|^2 + |grad pi|^2
  double sup_beam = 0.0;       // sup |d_t d_y eta|^2 + |d_y^3 eta|^2
  double sum_beam = 0.0;       // sum dt |d_t d_y^2 eta|^2 + |d_t^2 eta|^2
  double data_u0 = 0.0;        // int |grad u0|^2
  double data_beam = 0.0;      // |d_y^3 eta0|^2 + |d_y eta1|^2
  double data_g = 0.0;         // sum dt |d_y g|^2
  double lhs() const { return sup_grad_u + sum_fluid + sup_beam + sum_beam; }
  double rhs() const { return data_u0 + data_beam + data_g; }
  double ratio() const { return lhs() / (rhs() + 1.0); }
};

/// Levels [first, last] of a run, accumulated; defaults to the whole run.
AccelerationTable acceleration_diagnostics(const RunResult& r, int first = 0, int last = -1);

/// Discrete Y* distance between two single states on the same space (sup-level terms only).
double state_distance(const AssembledOperators& ops, const CoupledState& a, const CoupledState& b);

}  // namespace fsi
