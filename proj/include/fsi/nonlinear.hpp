#pragma once

#include <functional>
#include <memory>
#include <vector>

#include "fsi/coupled.hpp"

namespace fsi {

/// Fluid and beam loads as functions of physical position / beam parameter and time.
struct ProblemData {
  CoupledParams par;
  std::function<Vec2(const Vec2& x, double t)> f;   // empty = 0
  std::function<double(double y, double t)> g;      // empty = 0
};

/// Beam modes of g(., t) in the real basis (L2 projection by equispaced quadrature).
VectorXd beam_load_modes(const MixedSpace& s, const std::function<double(double, double)>& g, double t);

/// Time levels t0 + n dt, n = 0..N, on one slab; coefficients frozen at ops->eta0.
struct Trajectory {
  std::shared_ptr<const AssembledOperators> ops;
  double t0 = 0.0, dt = 0.0;
  std::vector<CoupledState> states;
  std::vector<SourceBundle> sources;  // sources[n] drove states[n] -> states[n + 1]
  int n_steps() const { return static_cast<int>(states.size()) - 1; }
};

/// Sources at one level from the iterate (zeta, w_bar, q_bar); w_bar_prev is the previous level.
struct LevelSources {
  SourceBundle src;
  HanzawaField coeff;  // coefficient fields of zeta at this level
};
LevelSources source_terms(const AssembledOperators& ops, const ProblemData& data, const CoupledState& level,
                          const CoupledState& prev_level, double dt);

/// Discrete Y* distance: sqrt of
///   sup_n [int J|du|^2 + int |grad du|^2 + |d_t d_y de|^2 + |d_y^3 de|^2]
/// + sum_n dt [int |grad du|^2 + |D^2 du|^2 + |d_t du|^2 + |dp|^2 + |grad dp|^2 + |d_t d_y^2 de|^2 + |d_t^2 de|^2].
double ystar_distance(const Trajectory& a, const Trajectory& b);

struct PicardOptions {
  double t_star = 0.1;
  double dt = 0.01;
  double tol = 1e-8;
  int max_iter = 50;
  double theta_max = 0.9;
  DegeneracyThresholds degeneracy;
};

struct PicardReport {
  std::vector<double> distance;  // d_m between iterates m and m - 1
  std::vector<double> theta;     // d_m / d_{m-1}
  int iterations = 0;
  bool converged = false;
};

/// Picard iteration of the frozen-coefficient slab map, started from the constant extension of
/// the initial state. Throws SlabTooLong, DegeneracyDuringIteration, MaxIterExceeded.
Trajectory picard_solve(const MixedSpace& space, const ProblemData& data, const CoupledState& initial,
                        const PicardOptions& opt, PicardReport* report = nullptr);

/// One application of the slab map to a trajectory (sources recomputed from it).
Trajectory picard_map(const Trajectory& iterate, const ProblemData& data, const DegeneracyThresholds& th = {});

/// Y* distance between a trajectory and its image under the slab map.
double self_consistency_residual(const Trajectory& traj, const ProblemData& data);

}  // namespace fsi
