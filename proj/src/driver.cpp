#include "fsi/driver.hpp"

#include <cmath>

#include "fsi/spaces.hpp"
#include "fsi/stokes.hpp"

namespace fsi {

// ---------------------------------------------------------------- specs

namespace {

Vec2 horseshoe_point(double R, double a, double tg, double s) {
  const double sweep = kTwoPi - 2.0 * tg, te = kTwoPi - tg;
  const double l_out = (R + a) * sweep, l_cap = kPi * a, l_in = (R - a) * sweep;
  if (s < l_out) {
    const double th = tg + s / (R + a);
    return (R + a) * Vec2(std::cos(th), std::sin(th));
  }
  s -= l_out;
  if (s < l_cap) {
    const double p = te + s / a;
    return R * Vec2(std::cos(te), std::sin(te)) + a * Vec2(std::cos(p), std::sin(p));
  }
  s -= l_cap;
  if (s < l_in) {
    const double th = te - s / (R - a);
    return (R - a) * Vec2(std::cos(th), std::sin(th));
  }
  s -= l_in;
  const double p = tg + kPi + s / a;
  return R * Vec2(std::cos(tg), std::sin(tg)) + a * Vec2(std::cos(p), std::sin(p));
}

ReferenceGeometry horseshoe(const GeometrySpec& sp) {
  const double R = sp.radius, a = sp.half_width;
  if (!(a > 0.0 && a < R && sp.gap > 0.0 && sp.gap + 2.0 * a < 2.0 * R))
    throw Error(ErrorCode::ConfigError, "horseshoe needs 0 < half_width < radius and 0 < gap < 2 (radius - half_width)");
  if (sp.modes < 8) throw Error(ErrorCode::ConfigError, "horseshoe needs at least 8 modes");
  const double tg = std::asin((sp.gap + 2.0 * a) / (2.0 * R));
  const double length = 2.0 * R * (kTwoPi - 2.0 * tg) + kTwoPi * a;
  const int n = std::max(4096, 32 * sp.modes);
  std::vector<double> xs(n), ys(n);
  for (int j = 0; j < n; ++j) {
    const Vec2 p = horseshoe_point(R, a, tg, length * j / n);
    xs[j] = p.x();
    ys[j] = p.y();
  }
  return ReferenceGeometry(PeriodicField::from_samples(xs, sp.modes), PeriodicField::from_samples(ys, sp.modes), sp.L,
                           sp.alpha_fraction);
}

}  // namespace

ReferenceGeometry make_geometry(const GeometrySpec& sp) {
  if (!(sp.L > 0.0)) throw Error(ErrorCode::ConfigError, "geometry.L must be positive");
  try {
    if (sp.type == "circle") {
      if (!(sp.radius > 0.0)) throw Error(ErrorCode::ConfigError, "circle radius must be positive");
      return ReferenceGeometry(PeriodicField::from_cos_sin(0.0, {sp.radius}, {0.0}),
                               PeriodicField::from_cos_sin(0.0, {0.0}, {sp.radius}), sp.L, sp.alpha_fraction);
    }
    if (sp.type == "ellipse") {
      if (!(sp.a > 0.0 && sp.b > 0.0)) throw Error(ErrorCode::ConfigError, "ellipse semi-axes must be positive");
      return ReferenceGeometry(PeriodicField::from_cos_sin(0.0, {sp.a}, {0.0}),
                               PeriodicField::from_cos_sin(0.0, {0.0}, {sp.b}), sp.L, sp.alpha_fraction);
    }
    if (sp.type == "horseshoe") return horseshoe(sp);
  } catch (const Error& e) {
    if (e.code() == ErrorCode::ConfigError) throw;
    throw Error(ErrorCode::ConfigError, std::string("invalid geometry: ") + e.what());
  }
  throw Error(ErrorCode::ConfigError, "unknown geometry type '" + sp.type + "'");
}

PeriodicField BeamSpec::field(int K) const {
  std::vector<double> a(K, 0.0), b(K, 0.0);
  for (const auto& [k, v] : cos) {
    if (k < 1 || k > K) throw Error(ErrorCode::ConfigError, "cos mode " + std::to_string(k) + " outside 1.." + std::to_string(K));
    a[k - 1] += v;
  }
  for (const auto& [k, v] : sin) {
    if (k < 1 || k > K) throw Error(ErrorCode::ConfigError, "sin mode " + std::to_string(k) + " outside 1.." + std::to_string(K));
    b[k - 1] += v;
  }
  PeriodicField f = PeriodicField::from_cos_sin(mean, a, b);
  if (!bumps.empty()) {
    const int n = std::max(512, 16 * K);
    std::vector<double> v(n, 0.0);
    for (const Bump& bp : bumps) {
      if (!(bp.width > 0.0)) throw Error(ErrorCode::ConfigError, "bump width must be positive");
      for (int j = 0; j < n; ++j)
        for (int img = -2; img <= 2; ++img) {
          const double d = (double(j) / n - bp.y - img) / bp.width;
          v[j] += bp.amplitude * std::exp(-0.5 * d * d);
        }
    }
    f += PeriodicField::from_samples(v, K);
  }
  return f;
}

double TimeProfile::operator()(double t) const {
  if (kind == "constant") return 1.0;
  if (kind == "ramp") return ramp > 0.0 ? std::min(t / ramp, 1.0) : 1.0;
  if (kind == "sine") return std::sin(omega * t);
  throw Error(ErrorCode::ConfigError, "unknown time profile '" + kind + "'");
}

// ---------------------------------------------------------------- setup

std::shared_ptr<const Discretization> discretize(const RunConfig& cfg) {
  if (!(cfg.mesh_h > 0.0)) throw Error(ErrorCode::ConfigError, "mesh.h must be positive");
  if (cfg.beam_modes < 1) throw Error(ErrorCode::ConfigError, "beam_modes must be at least 1");
  auto d = std::make_shared<Discretization>();
  d->geometry = std::make_unique<ReferenceGeometry>(make_geometry(cfg.geometry));
  try {
    d->space = std::make_unique<MixedSpace>(*d->geometry, build_mesh(*d->geometry, cfg.mesh_h), cfg.beam_modes);
  } catch (const Error& e) {
    throw Error(ErrorCode::ConfigError, std::string("discretisation failed: ") + e.what());
  }
  return d;
}

ProblemData problem_data(const RunConfig& cfg, const MixedSpace& s) {
  ProblemData d;
  d.par = cfg.constants;
  if (!cfg.f.is_zero()) {
    const FluidForcing f = cfg.f;
    d.f = [f](const Vec2& x, double t) -> Vec2 { return f.scale * f.time(t) * (f.c + f.M * x); };
  }
  if (!cfg.g.is_zero()) {
    const PeriodicField shape = cfg.g.shape.field(std::max(32, s.beam_modes()));
    const double scale = cfg.g.scale;
    const TimeProfile tp = cfg.g.time;
    d.g = [shape, scale, tp](double y, double t) { return scale * tp(t) * shape(y); };
  }
  return d;
}

void validate(const RunConfig& cfg, const MixedSpace& s) {
  const CoupledParams& c = cfg.constants;
  if (!(c.rho_f > 0 && c.mu > 0 && c.rho_s > 0 && c.gamma > 0 && c.alpha > 0))
    throw Error(ErrorCode::ConfigError, "physical constants must be strictly positive");
  if (!(cfg.T > 0 && cfg.t_star > 0 && cfg.dt > 0)) throw Error(ErrorCode::ConfigError, "T, t_star and dt must be positive");
  if (!(cfg.picard_tol > 0)) throw Error(ErrorCode::ConfigError, "picard_tol must be positive");
  if (!(cfg.theta_max > 0 && cfg.theta_max <= 1)) throw Error(ErrorCode::ConfigError, "theta_max must lie in (0, 1]");
  if (cfg.max_iter < 1) throw Error(ErrorCode::ConfigError, "max_iter must be at least 1");
  if (!(cfg.displacement_guard > 0 && cfg.displacement_guard <= 1))
    throw Error(ErrorCode::ConfigError, "displacement_guard must lie in (0, 1]");
  if (cfg.max_halvings < 0 || cfg.max_halvings > 40) throw Error(ErrorCode::ConfigError, "max_halvings must lie in 0..40");
  if (cfg.u0 != "extension" && cfg.u0 != "rotation") throw Error(ErrorCode::ConfigError, "unknown u0 type '" + cfg.u0 + "'");

  const ReferenceGeometry& g = s.geometry();
  const GeometryCheck chk = check_geometry(cfg, g, cfg.eta0.field(s.beam_modes()));
  if (chk.sup_eta >= chk.guard)
    throw Error(ErrorCode::ConfigError, "initial displacement " + std::to_string(chk.sup_eta) + " exceeds the guard " +
                                            std::to_string(chk.guard));
  if (!chk.degeneracy.ok) throw Error(ErrorCode::ConfigError, "initial boundary is degenerate (" + chk.degeneracy.reason + ")");
  if (chk.self_intersection) throw Error(ErrorCode::ConfigError, "initial boundary self-intersects");
}

InitialData initial_state(const RunConfig& cfg, const MixedSpace& s) {
  const PeriodicField eta0 = cfg.eta0.field(s.beam_modes());
  const AssembledOperators ops = assemble(s, BoundaryDisplacement(eta0));
  InitialData out;
  CoupledState& st = out.state;
  st = CoupledState::zero(s);
  st.eta = eta0.real_vector();

  VectorXd w = cfg.eta1.field(s.beam_modes()).real_vector();
  const double d1 = (ops.divergence * s.E.col(0)).sum();
  if (!(d1 > cfg.constants.denom_threshold * s.geometry().perimeter()))
    throw Error(ErrorCode::ConfigError, "initial boundary has no flux through the constant beam mode");
  const double flux = (ops.divergence * (s.E * w)).sum();
  out.eta1_shift = -flux / d1;
  w(0) += out.eta1_shift;

  VectorXd u = extend_boundary_to_domain(s, PeriodicField::from_real_vector(w));
  if (cfg.u0 == "rotation" && cfg.u0_amplitude != 0.0) {
    Vec2 c = Vec2::Zero();
    for (int q = 0; q < s.n_qp(); ++q) c += s.qp_w[q] * s.qp_x[q];
    c /= s.area;
    for (int i = 0; i < s.n_nodes(); ++i) {
      const Vec2 r = s.nodes[i] - c;
      u.segment<2>(2 * i) += cfg.u0_amplitude * Vec2(-r.y(), r.x());
    }
  }
  const VectorXd ub = s.E * w;
  for (int i : s.boundary_nodes) u.segment<2>(2 * i) = ub.segment<2>(2 * i);

  std::vector<Vec2> U;
  std::vector<Mat2> G;
  s.velocity_at_qp(u, U, G);
  std::vector<double> h(s.n_qp());
  double mean = 0.0;
  for (int q = 0; q < s.n_qp(); ++q) {
    h[q] = -ops.coeff.B[q].cwiseProduct(G[q]).sum();
    mean += s.qp_w[q] * h[q];
  }
  mean /= s.area;
  for (double& v : h) v -= mean;
  out.divergence_before = (ops.divergence * u).norm();
  u += bogovskii_lift(ops, h, 1e-9);

  st.u = u;
  st.w = w;
  st.w_prev = w;
  out.divergence_residual = (ops.divergence * u).norm();
  return out;
}

GeometryCheck check_geometry(const RunConfig& cfg, const ReferenceGeometry& g, const PeriodicField& eta) {
  GeometryCheck c;
  c.self_intersection = self_intersection_check(g, eta);
  c.degeneracy = degeneracy_check(g, eta, cfg.degeneracy);
  c.sup_eta = g.L() - c.degeneracy.displacement_margin;
  c.guard = cfg.displacement_guard * g.alpha();
  return c;
}

const char* to_string(Termination t) {
  switch (t) {
    case Termination::Horizon: return "horizon";
    case Termination::SelfIntersection: return "self_intersection";
    case Termination::Degeneracy: return "degeneracy";
    case Termination::DisplacementLimit: return "displacement_limit";
    case Termination::SolverFailure: return "solver_failure";
  }
  return "unknown";
}

// ---------------------------------------------------------------- ledgers

std::vector<EnergyRow> physical_ledger(const MixedSpace& s, const ProblemData& data,
                                       const std::vector<CoupledState>& states) {
  const CoupledParams& par = data.par;
  std::vector<EnergyRow> rows;
  double E_prev = 0.0;
  for (size_t n = 0; n < states.size(); ++n) {
    const CoupledState& st = states[n];
    const HanzawaField hf =
        coefficient_fields(s.geometry(), BoundaryDisplacement(PeriodicField::from_real_vector(st.eta)), s.frames);
    std::vector<Vec2> U;
    std::vector<Mat2> G;
    s.velocity_at_qp(st.u, U, G);
    double kin = 0.0, diss = 0.0, wf = 0.0;
    for (int q = 0; q < s.n_qp(); ++q) {
      kin += s.qp_w[q] * hf.J[q] * U[q].squaredNorm();
      diss += s.qp_w[q] * (G[q] * hf.A[q]).cwiseProduct(G[q]).sum();
      if (data.f) wf += s.qp_w[q] * hf.J[q] * data.f(hf.psi[q], st.t).dot(U[q]);
    }
    EnergyRow r;
    r.t = st.t;
    r.E = 0.5 * par.rho_f * kin + 0.5 * par.rho_s * st.w.dot(s.beam_m0.cwiseProduct(st.w)) +
          0.5 * par.alpha * st.eta.dot(s.beam_m2.cwiseProduct(st.eta));
    r.D = par.mu * diss + par.gamma * st.w.dot(s.beam_m1.cwiseProduct(st.w));
    r.work_f = wf;
    r.work_g = s.beam_m0.cwiseProduct(beam_load_modes(s, data.g, st.t)).dot(st.w);
    r.c_pi = st.c_pi;
    if (n > 0) {
      const double dt = st.t - states[n - 1].t;
      r.residual = r.E - E_prev + dt * (r.D - r.work_f - r.work_g);
    }
    E_prev = r.E;
    rows.push_back(r);
  }
  return rows;
}

AccelerationTable acceleration_diagnostics(const RunResult& r, int first, int last) {
  AccelerationTable a;
  if (r.states.empty() || !r.disc) return a;
  const MixedSpace& s = *r.disc->space;
  if (last < 0 || last >= static_cast<int>(r.states.size())) last = static_cast<int>(r.states.size()) - 1;
  first = std::clamp(first, 0, last);
  const CoupledState& s0 = r.states[first];
  a.data_u0 = s0.u.dot(s.laplace * s0.u);
  a.data_beam = s0.eta.dot(s.beam_m3.cwiseProduct(s0.eta)) + s0.w.dot(s.beam_m1.cwiseProduct(s0.w));
  for (int n = first; n <= last; ++n) {
    const CoupledState& st = r.states[n];
    a.sup_grad_u = std::max(a.sup_grad_u, st.u.dot(s.laplace * st.u));
    a.sup_beam = std::max(a.sup_beam, st.w.dot(s.beam_m1.cwiseProduct(st.w)) + st.eta.dot(s.beam_m3.cwiseProduct(st.eta)));
    if (n == first) continue;
    const CoupledState& pr = r.states[n - 1];
    const double dt = st.t - pr.t;
    const VectorXd dtu = (st.u - pr.u) / dt;
    const VectorXd dtw = (st.w - pr.w) / dt;
    const VectorXd p = st.pressure();
    a.sum_fluid += dt * (st.u.dot(s.hessian_gram * st.u) + dtu.dot(s.mass * dtu) + p.dot(s.p_laplace * p));
    a.sum_beam += dt * (st.w.dot(s.beam_m2.cwiseProduct(st.w)) + dtw.dot(s.beam_m0.cwiseProduct(dtw)));
    if (n < static_cast<int>(r.beam_load.size())) {
      const VectorXd& g = r.beam_load[n];
      a.data_g += dt * g.dot(s.beam_m1.cwiseProduct(g));
    }
  }
  return a;
}

double state_distance(const AssembledOperators& ops, const CoupledState& a, const CoupledState& b) {
  const MixedSpace& s = *ops.space;
  const VectorXd du = a.u - b.u, dw = a.w - b.w, de = a.eta - b.eta;
  return std::sqrt(du.dot(ops.mass_J * du) + du.dot(s.laplace * du) + dw.dot(s.beam_m1.cwiseProduct(dw)) +
                   de.dot(s.beam_m3.cwiseProduct(de)));
}

// ---------------------------------------------------------------- run

RunResult run(const RunConfig& cfg) {
  RunResult r;
  r.disc = discretize(cfg);
  const MixedSpace& s = *r.disc->space;
  const ReferenceGeometry& g = s.geometry();
  validate(cfg, s);
  const ProblemData data = problem_data(cfg, s);
  r.initial = initial_state(cfg, s);
  r.states.push_back(r.initial.state);
  r.beam_load.push_back(beam_load_modes(s, data.g, 0.0));

  PicardOptions base;
  base.tol = cfg.picard_tol;
  base.theta_max = cfg.theta_max;
  base.max_iter = cfg.max_iter;
  // iterates only need invertible coefficients; the configured thresholds are applied to accepted levels
  const DegeneracyThresholds def;
  base.degeneracy.speed_fraction = std::min(def.speed_fraction, cfg.degeneracy.speed_fraction);
  base.degeneracy.alignment = std::min(def.alignment, cfg.degeneracy.alignment);
  base.degeneracy.displacement_fraction = std::min(def.displacement_fraction, cfg.degeneracy.displacement_fraction);

  const double t_min = cfg.T / std::ldexp(1.0, cfg.max_halvings);
  const double eps = 1e-9 * cfg.dt;
  double t_star = std::min(cfg.t_star, cfg.T);
  int halvings = 0;
  bool stop = false;
  while (!stop) {
    const CoupledState cur = r.states.back();
    const double remaining = cfg.T - cur.t;
    if (remaining <= eps) {
      r.termination = Termination::Horizon;
      break;
    }
    PicardOptions opt = base;
    opt.t_star = t_star >= remaining - eps ? remaining : t_star;
    opt.dt = std::min(cfg.dt, opt.t_star);
    PicardReport rep;
    Trajectory traj;
    const int slab = static_cast<int>(r.slabs.size());
    auto log_iterations = [&](bool accepted) {
      for (size_t m = 0; m < rep.distance.size(); ++m) {
        IterationRow row;
        row.slab = accepted ? slab : -1;
        row.iter = static_cast<int>(m) + 1;
        row.t0 = cur.t;
        row.t_star = opt.t_star;
        row.distance = rep.distance[m];
        row.theta = m == 0 ? 0.0 : rep.theta[m - 1];
        r.iterations.push_back(row);
      }
    };
    try {
      traj = picard_solve(s, data, cur, opt, &rep);
    } catch (const Error& e) {
      log_iterations(false);
      const bool retry = e.code() == ErrorCode::SlabTooLong || e.code() == ErrorCode::MaxIterExceeded ||
                         e.code() == ErrorCode::DegeneracyDuringIteration;
      if (retry && opt.t_star / 2 >= t_min * (1 - 1e-12)) {
        t_star = opt.t_star / 2;
        ++halvings;
        continue;
      }
      r.termination = e.code() == ErrorCode::DegeneracyDuringIteration ? Termination::Degeneracy : Termination::SolverFailure;
      r.message = e.what();
      break;
    } catch (const std::exception& e) {
      r.termination = Termination::SolverFailure;
      r.message = e.what();
      break;
    }
    log_iterations(true);

    SlabRecord rec;
    rec.t0 = cur.t;
    rec.t_star = opt.t_star;
    rec.dt = traj.dt;
    rec.iterations = rep.iterations;
    rec.halvings = halvings;
    for (double th : rep.theta) rec.max_theta = std::max(rec.max_theta, th);
    rec.first_level = static_cast<int>(r.states.size()) - 1;
    for (int n = 1; n <= traj.n_steps(); ++n) {
      r.states.push_back(traj.states[n]);
      r.beam_load.push_back(traj.sources[n - 1].g);
      const GeometryCheck chk = check_geometry(cfg, g, PeriodicField::from_real_vector(traj.states[n].eta));
      std::string why;
      if (chk.self_intersection) {
        r.termination = Termination::SelfIntersection;
        why = "deformed boundary self-intersects";
      } else if (!chk.degeneracy.ok) {
        r.termination = chk.degeneracy.reason == "displacement" ? Termination::DisplacementLimit : Termination::Degeneracy;
        why = "degeneracy check failed (" + chk.degeneracy.reason + ", margin " + std::to_string(chk.degeneracy.margin) + ")";
      } else if (chk.sup_eta >= chk.guard) {
        r.termination = Termination::DisplacementLimit;
        why = "||eta||_inf = " + std::to_string(chk.sup_eta) + " reached the guard " + std::to_string(chk.guard);
      }
      if (!why.empty()) {
        r.message = why + " at t = " + std::to_string(traj.states[n].t);
        stop = true;
        break;
      }
    }
    rec.t1 = r.states.back().t;
    rec.last_level = static_cast<int>(r.states.size()) - 1;
    r.slabs.push_back(rec);
  }

  r.t_end = r.states.back().t;
  r.final_check = check_geometry(cfg, g, PeriodicField::from_real_vector(r.states.back().eta));
  try {
    r.ledger = physical_ledger(s, data, r.states);
  } catch (const Error& e) {
    // the last level can sit past alpha only when the guard fraction is 1
    r.message += std::string("; ledger: ") + e.what();
  }
  return r;
}

}  // namespace fsi
