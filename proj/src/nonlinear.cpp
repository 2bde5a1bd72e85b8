#include "fsi/nonlinear.hpp"

#include <cmath>

namespace fsi {

VectorXd beam_load_modes(const MixedSpace& s, const std::function<double(double, double)>& g, double t) {
  VectorXd out = VectorXd::Zero(s.n_beam());
  if (!g) return out;
  const int n = std::max(64, 4 * s.n_beam());
  for (int j = 0; j < n; ++j) {
    const double y = double(j) / n, v = g(y, t) / n;
    for (int m = 0; m < s.n_beam(); ++m) out(m) += v * beam_basis(m, y);
  }
  return out.cwiseQuotient(s.beam_m0);
}

LevelSources source_terms(const AssembledOperators& ops, const ProblemData& data, const CoupledState& lv,
                          const CoupledState& prev, double dt) {
  const MixedSpace& s = *ops.space;
  const CoupledParams& par = data.par;
  LevelSources out;
  const BoundaryDisplacement bd(PeriodicField::from_real_vector(lv.eta), PeriodicField::from_real_vector(lv.w), lv.t);
  out.coeff = coefficient_fields(s.geometry(), bd, s.frames);
  const HanzawaField& z = out.coeff;
  const HanzawaField& c0 = ops.coeff;

  std::vector<Vec2> W, Wp;
  std::vector<Mat2> G, Gp;
  s.velocity_at_qp(lv.u, W, G);
  s.velocity_at_qp(prev.u, Wp, Gp);
  const std::vector<double> q = s.pressure_at_qp(lv.pressure());

  SourceBundle& src = out.src;
  src.bfh.resize(s.n_qp());
  src.H.resize(s.n_qp());
  src.h.resize(s.n_qp());
  for (int k = 0; k < s.n_qp(); ++k) {
    const Vec2 dtw = (W[k] - Wp[k]) / dt;
    Vec2 b = -par.rho_f * (z.J[k] - c0.J[k]) * dtw - par.rho_f * z.J[k] * (G[k] * (z.Finv[k] * (W[k] - z.dtpsi[k])));
    if (data.f) b += z.J[k] * data.f(z.psi[k], lv.t);
    src.bfh[k] = b;
    const Mat2 dB = c0.B[k] - z.B[k];
    src.H[k] = par.mu * G[k] * (c0.A[k] - z.A[k]) - dB * q[k];
    src.h[k] = dB.cwiseProduct(G[k]).sum();
  }
  src.g = beam_load_modes(s, data.g, lv.t);
  return out;
}

// ---------------------------------------------------------------- Y* distance

double ystar_distance(const Trajectory& a, const Trajectory& b) {
  if (a.states.size() != b.states.size() || std::abs(a.dt - b.dt) > 1e-14 * std::max(1.0, a.dt) || !a.ops || !b.ops ||
      a.ops->space != b.ops->space)
    throw Error(ErrorCode::GridMismatch, "trajectories live on different grids");
  const AssembledOperators& ops = *a.ops;
  const MixedSpace& s = *ops.space;
  const double dt = a.dt;
  double sup = 0.0, sum = 0.0;
  VectorXd du_prev, dw_prev;
  for (size_t n = 0; n < a.states.size(); ++n) {
    const CoupledState& x = a.states[n];
    const CoupledState& y = b.states[n];
    const VectorXd du = x.u - y.u, de = x.eta - y.eta, dw = x.w - y.w;
    const VectorXd dp = x.pressure() - y.pressure();
    const double grad = du.dot(s.laplace * du);
    const double level = du.dot(ops.mass_J * du) + grad + dw.dot(s.beam_m1.cwiseProduct(dw)) +
                         de.dot(s.beam_m3.cwiseProduct(de));
    sup = std::max(sup, level);
    if (n > 0) {
      const VectorXd dtu = (du - du_prev) / dt;
      const VectorXd dtw = (dw - dw_prev) / dt;
      sum += dt * (grad + du.dot(s.hessian_gram * du) + dtu.dot(s.mass * dtu) + dp.dot(s.p_mass * dp) +
                   dp.dot(s.p_laplace * dp) + dw.dot(s.beam_m2.cwiseProduct(dw)) + dtw.dot(s.beam_m0.cwiseProduct(dtw)));
    }
    du_prev = du;
    dw_prev = dw;
  }
  return std::sqrt(sup + sum);
}

// ---------------------------------------------------------------- Picard

namespace {

Trajectory slab_map(const Trajectory& it, const CoupledStepper& stepper, const ProblemData& data,
                    const DegeneracyThresholds& th) {
  const MixedSpace& s = *it.ops->space;
  Trajectory out;
  out.ops = it.ops;
  out.t0 = it.t0;
  out.dt = it.dt;
  out.states.reserve(it.states.size());
  out.states.push_back(it.states.front());
  for (int n = 0; n < it.n_steps(); ++n) {
    const CoupledState& lv = it.states[n + 1];
    const DegeneracyReport rep = degeneracy_check(s.geometry(), PeriodicField::from_real_vector(lv.eta), th);
    if (!rep.ok)
      throw Error(ErrorCode::DegeneracyDuringIteration, "iterate degenerates (" + rep.reason + ") at t = " + std::to_string(lv.t));
    LevelSources ls;
    try {
      ls = source_terms(*it.ops, data, lv, it.states[n], it.dt);
    } catch (const Error& e) {
      throw Error(ErrorCode::DegeneracyDuringIteration, e.what());
    }
    out.sources.push_back(std::move(ls.src));
    out.states.push_back(stepper.step(out.states.back(), out.sources.back()));
  }
  return out;
}

}  // namespace

Trajectory picard_map(const Trajectory& iterate, const ProblemData& data, const DegeneracyThresholds& th) {
  const CoupledStepper stepper(*iterate.ops, data.par, iterate.dt);
  return slab_map(iterate, stepper, data, th);
}

double self_consistency_residual(const Trajectory& traj, const ProblemData& data) {
  return ystar_distance(traj, picard_map(traj, data));
}

Trajectory picard_solve(const MixedSpace& space, const ProblemData& data, const CoupledState& initial,
                        const PicardOptions& opt, PicardReport* report) {
  if (!(opt.t_star > 0.0) || !(opt.dt > 0.0)) throw Error(ErrorCode::ConfigError, "slab length and time step must be positive");
  const int N = std::max(1, static_cast<int>(std::lround(opt.t_star / opt.dt)));
  Trajectory it;
  it.ops = std::make_shared<AssembledOperators>(
      assemble(space, BoundaryDisplacement(PeriodicField::from_real_vector(initial.eta), PeriodicField(), initial.t)));
  it.t0 = initial.t;
  it.dt = opt.t_star / N;
  for (int n = 0; n <= N; ++n) {
    it.states.push_back(initial);
    it.states.back().t = initial.t + n * it.dt;
  }
  const CoupledStepper stepper(*it.ops, data.par, it.dt);

  PicardReport rep;
  int high = 0, growth = 0;
  for (int m = 1; m <= opt.max_iter; ++m) {
    Trajectory next = slab_map(it, stepper, data, opt.degeneracy);
    const double d = ystar_distance(next, it);
    rep.distance.push_back(d);
    rep.iterations = m;
    if (rep.distance.size() >= 2) {
      const double prev = rep.distance[rep.distance.size() - 2];
      const double th = prev > 0.0 ? d / prev : 0.0;
      rep.theta.push_back(th);
      high = th >= opt.theta_max ? high + 1 : 0;
      growth = d > prev ? growth + 1 : 0;
    }
    it = std::move(next);
    if (d <= opt.tol) {
      rep.converged = true;
      break;
    }
    if (high >= 2 || growth >= 3) {
      if (report) *report = rep;
      throw Error(ErrorCode::SlabTooLong, "Picard contraction factor " + std::to_string(rep.theta.back()));
    }
  }
  if (report) *report = rep;
  if (!rep.converged) throw Error(ErrorCode::MaxIterExceeded, "Picard did not converge in " + std::to_string(opt.max_iter) + " iterations");
  return it;
}

}  // namespace fsi
