// Acceptance suite: one PASS/FAIL line per criterion, exit status 1 if any criterion fails.
#include <Eigen/SVD>
#include <chrono>
#include <cstdio>
#include <functional>
#include <random>
#include <sstream>

#include "fsi/io.hpp"
#include "fsi/spaces.hpp"
#include "fsi/stokes.hpp"

using namespace fsi;

namespace {

struct Verdict {
  bool pass = true;
  std::ostringstream detail;
  void require(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      detail << " [failed: " << what << "]";
    }
  }
};

std::mt19937 rng(20240607);

PeriodicField random_eta(int K, double sup_target) {
  std::normal_distribution<double> nd;
  PeriodicField e(K);
  for (int k = 1; k <= K; ++k) e.set_coeff(k, cplx(nd(rng), nd(rng)) / double(k * k));
  e.set_coeff(0, 0.3 * nd(rng));
  return e * (sup_target / e.max_abs(4096));
}

Vec2 random_point_in_disk(double r) {
  std::uniform_real_distribution<double> u(-r, r);
  for (;;) {
    const Vec2 p(u(rng), u(rng));
    if (p.norm() < r) return p;
  }
}

double rate(double e0, double e1, double h0, double h1) { return std::log(e0 / e1) / std::log(h0 / h1); }

RunConfig load_config(const std::string& name) {
  return parse_run_config(read_json_file(std::string(FSI_CONFIG_DIR) + "/" + name));
}

// 1. Hanzawa round trip and identity at eta = 0
void hanzawa_kernel(Verdict& v) {
  const auto g = ReferenceGeometry::circle(1.0, 0.3);
  double worst = 0.0;
  for (int t = 0; t < 20; ++t) {
    const PeriodicField eta = random_eta(16, 0.99 * g.alpha());
    for (int i = 0; i < 100; ++i) {
      const Vec2 x = random_point_in_disk(1.0);
      worst = std::max(worst, (hanzawa_inverse(g, eta, hanzawa(g, eta, x)) - x).norm());
    }
  }
  std::vector<Vec2> pts;
  for (int i = 0; i < 100; ++i) pts.push_back(random_point_in_disk(1.0));
  const HanzawaField id = coefficient_fields(g, BoundaryDisplacement(PeriodicField(8)), pts);
  bool exact = true;
  for (size_t q = 0; q < pts.size(); ++q)
    exact = exact && id.J[q] == 1.0 && id.A[q] == Mat2::Identity() && id.B[q] == Mat2::Identity() &&
            id.psi[q] == pts[q] && hanzawa(g, PeriodicField(8), pts[q]) == pts[q];
  v.detail << "round-trip error " << worst << ", identity exact " << exact;
  v.require(worst < 1e-10, "round trip");
  v.require(exact, "identity");
}

// 2. analytic gradient against central differences; Piola residual under refinement
void coefficient_fields_check(Verdict& v) {
  const auto g = ReferenceGeometry::circle(1.0, 0.3);
  double max_rel = 0.0;
  for (int t = 0; t < 5; ++t) {
    const PeriodicField eta = random_eta(8, 0.8 * g.alpha());
    std::vector<Vec2> pts;
    for (int i = 0; i < 200; ++i) pts.push_back(random_point_in_disk(0.999));
    const HanzawaField hf = coefficient_fields(g, BoundaryDisplacement(eta), pts);
    for (size_t q = 0; q < pts.size(); ++q) {
      const double h = 1e-6;
      Mat2 fd;
      for (int j = 0; j < 2; ++j) {
        Vec2 e = Vec2::Zero();
        e(j) = h;
        fd.col(j) = (hanzawa(g, eta, pts[q] + e) - hanzawa(g, eta, pts[q] - e)) / (2 * h);
      }
      max_rel = std::max(max_rel, (fd - hf.grad[q]).cwiseAbs().maxCoeff() / hf.grad[q].cwiseAbs().maxCoeff());
    }
  }
  const PeriodicField eta = PeriodicField::from_cos_sin(0.0, {0.04, 0.0, 0.02}, {0.03});
  std::vector<double> r;
  for (double h : {0.2, 0.1, 0.05}) {
    const MixedSpace s(g, build_mesh(g, h), 4);
    r.push_back(piola_residual(assemble(s, BoundaryDisplacement(eta))));
  }
  v.detail << "max FD relative error " << max_rel << ", Piola residual " << r[0] << " " << r[1] << " " << r[2];
  v.require(max_rel < 1e-6, "finite differences");
  v.require(r[1] < r[0] && r[2] < r[1], "Piola decrease");
}

// 3. trace of the extension operator
void extension_trace(Verdict& v) {
  const auto g = ReferenceGeometry::circle(1.0, 0.3);
  const std::vector<double> hs = {0.2, 0.1, 0.05};
  std::vector<MixedSpace> spaces;
  std::vector<Mesh> meshes;
  for (double h : hs) meshes.push_back(build_mesh(g, h));
  for (const Mesh& m : meshes) spaces.emplace_back(g, m, 4);
  const std::vector<PeriodicField> bs = {PeriodicField::constant(1.0, 2), PeriodicField::from_cos_sin(0.0, {0.0}, {1.0}),
                                         PeriodicField::from_cos_sin(0.0, {0.0, 1.0}, {})};
  double worst_rate = 1e300;
  int cases = 0;
  for (int t = 0; t < 3; ++t) {
    const PeriodicField eta = random_eta(6, 0.5 * g.alpha());
    for (const auto& b : bs) {
      std::vector<double> res;
      for (const auto& s : spaces) res.push_back(F_eta_trace_residual(s, eta, b));
      for (int i = 0; i + 1 < 3; ++i) worst_rate = std::min(worst_rate, rate(res[i], res[i + 1], hs[i], hs[i + 1]));
      ++cases;
    }
  }
  v.detail << cases << " cases, slowest observed rate " << worst_rate;
  v.require(worst_rate >= 0.9, "O(h) decrease");
}

// 4. Stokes convergence and rigid rotation
void stokes_convergence(Verdict& v, std::vector<StokesBenchRow>& rows) {
  StokesBenchSpec spec;
  spec.family = "manufactured";
  spec.meshes = {0.1, 0.05, 0.025};
  rows = stokes_bench(spec, 1);
  const double ru1 = rate(rows[0].h1_err, rows[1].h1_err, 0.1, 0.05), ru2 = rate(rows[1].h1_err, rows[2].h1_err, 0.05, 0.025);
  const double rp1 = rate(rows[0].l2_err, rows[1].l2_err, 0.1, 0.05), rp2 = rate(rows[1].l2_err, rows[2].l2_err, 0.05, 0.025);
  const auto g = ReferenceGeometry::circle(1.0, 0.3);
  const MixedSpace s(g, build_mesh(g, 0.1), 4);
  const VectorXd rot = s.interpolate([](const Vec2& x) { return Vec2(-x.y(), x.x()); });
  const auto r = solve_steady(assemble(s, BoundaryDisplacement()), VectorXd::Zero(s.n_vel()), rot);
  const double rot_err = (r.u - rot).cwiseAbs().maxCoeff();
  v.detail << "H1 rates " << ru1 << " " << ru2 << ", pressure L2 rates " << rp1 << " " << rp2 << ", rotation error "
           << rot_err;
  v.require(std::abs(ru1 - 2.0) <= 0.2 && std::abs(ru2 - 2.0) <= 0.2, "velocity rate");
  v.require(std::abs(rp1 - 2.0) <= 0.3 && std::abs(rp2 - 2.0) <= 0.3, "pressure rate");
  v.require(rot_err < 1e-10 && r.residual < 1e-10, "rigid rotation");
}

// 5. regularity ratio: drift under refinement, ordering of rough and smooth families
void regularity_probe(Verdict& v, const std::vector<StokesBenchRow>& rows) {
  double lo = 1e300, hi = 0.0;
  for (const auto& r : rows) {
    lo = std::min(lo, r.ratio);
    hi = std::max(hi, r.ratio);
  }
  const double drift = hi / lo - 1.0;
  RegularitySpec spec;
  const auto sweep = regularity_sweep(spec, 1);
  const int nm = static_cast<int>(spec.modes.size());
  bool ordered = true;
  for (int j = 0; j < nm; ++j) ordered = ordered && sweep[j].ratio > sweep[nm + j].ratio;
  const double grow_rough = sweep[nm - 1].ratio / sweep[0].ratio - 1.0;
  const double grow_smooth = sweep[2 * nm - 1].ratio / sweep[nm].ratio - 1.0;
  v.detail << "drift " << 100 * drift << "%, rough/smooth growth over m " << 100 * grow_rough << "% / "
           << 100 * grow_smooth << "%";
  v.require(drift < 0.15, "drift");
  v.require(ordered && grow_rough > grow_smooth, "family ordering");
}

CoupledState random_state(const MixedSpace& s, double scale = 1.0) {
  std::normal_distribution<double> nd;
  CoupledState st = CoupledState::zero(s);
  VectorXd x(s.n_int() + s.n_beam());
  for (int i = 0; i < x.size(); ++i) x(i) = scale * nd(rng);
  for (int m = 0; m < s.n_beam(); ++m) {
    const double k = (m + 1) / 2;
    x(s.n_int() + m) /= 1.0 + k * k;
    st.eta(m) = 0.01 * scale * nd(rng) / (1.0 + k * k * k);
  }
  st.u = s.P * x;
  st.w = x.tail(s.n_beam());
  st.w_prev = st.w;
  return st;
}

SourceBundle random_sources(const MixedSpace& s, bool with_h) {
  std::normal_distribution<double> nd;
  const double a = nd(rng), b = nd(rng), c = nd(rng), d = nd(rng);
  SourceBundle src = SourceBundle::zero(s);
  src.bfh.resize(s.n_qp());
  src.H.resize(s.n_qp());
  if (with_h) src.h.resize(s.n_qp());
  for (int q = 0; q < s.n_qp(); ++q) {
    const Vec2& x = s.qp_x[q];
    src.bfh[q] = Vec2(a + b * x.y(), c * x.x() * x.y());
    src.H[q] << d * x.x(), 0.1 * a, 0.2 * b, -d * x.y();
    if (with_h) src.h[q] = c * x.x() + d * x.y() * x.y();
  }
  for (int m = 0; m < s.n_beam(); ++m) src.g(m) = nd(rng) / (1.0 + m);
  return src;
}

// 6. energy: unforced decay, forced residual first order in dt
void energy_identity(Verdict& v) {
  const auto g = ReferenceGeometry::circle(1.0, 0.3);
  const MixedSpace s(g, build_mesh(g, 0.25), 4);
  const PeriodicField eta0 = PeriodicField::from_cos_sin(0.0, {0.03}, {0.0, 0.02});
  const AssembledOperators ops = assemble(s, BoundaryDisplacement(eta0));
  const CoupledParams par;
  double worst_inc = -1e300;
  {
    const CoupledStepper st(ops, par, 0.01);
    for (int trial = 0; trial < 5; ++trial) {
      std::vector<CoupledState> traj{random_state(s)};
      for (int k = 0; k < 200; ++k) traj.push_back(st.step(traj.back(), SourceBundle()));
      const auto led = energy_report(ops, par, traj, {}, 0.01);
      for (size_t k = 1; k < led.size(); ++k) worst_inc = std::max(worst_inc, (led[k].E - led[k - 1].E) / led[0].E);
    }
  }
  // accumulated residual over [0, 0.2] from zero data, load switched on linearly in time
  const SourceBundle src = random_sources(s, false);
  std::vector<double> total;
  for (double dt : {0.02, 0.01, 0.005}) {
    const CoupledStepper st(ops, par, dt);
    const int n = static_cast<int>(std::lround(0.2 / dt));
    std::vector<CoupledState> traj{CoupledState::zero(s)};
    std::vector<SourceBundle> srcs;
    for (int k = 0; k < n; ++k) {
      const double a = traj.back().t + dt;
      SourceBundle sk = src;
      for (auto& x : sk.bfh) x *= a;
      for (auto& x : sk.H) x *= a;
      sk.g *= a;
      srcs.push_back(sk);
      traj.push_back(st.step(traj.back(), sk));
    }
    double sum = 0.0;
    for (const auto& row : energy_report(ops, par, traj, srcs, dt)) sum += std::abs(row.residual);
    total.push_back(sum);
  }
  const double r1 = total[0] / total[1], r2 = total[1] / total[2];
  v.detail << "largest relative energy increment " << worst_inc << ", forced residual halving ratios " << r1 << " "
           << r2;
  v.require(worst_inc <= 0.0, "monotone energy");
  v.require(std::abs(r1 - 2.0) <= 0.4 && std::abs(r2 - 2.0) <= 0.4, "first-order residual");
}

// 7. pressure split on every accepted step
void pressure_split(Verdict& v) {
  double worst_c = 0.0, worst_mean = 0.0;
  int steps = 0;
  {
    const auto g = ReferenceGeometry::circle(1.0, 0.3);
    const MixedSpace s(g, build_mesh(g, 0.2), 6);
    const PeriodicField eta0 = PeriodicField::from_cos_sin(0.0, {0.04, 0.02}, {0.0, 0.03});
    const AssembledOperators ops = assemble(s, BoundaryDisplacement(eta0));
    const VectorXd wJ = divergence_rhs_from_qp(s, ops.coeff.J);
    const CoupledStepper st(ops, CoupledParams(), 0.02);
    for (int trial = 0; trial < 3; ++trial) {
      CoupledState x = random_state(s);
      const SourceBundle src = random_sources(s, false);
      for (int k = 0; k < 20; ++k, ++steps) {
        x = st.step(x, compatibility_project(src, x, ops));
        worst_c = std::max(worst_c, x.c_pi_residual);
        worst_mean = std::max(worst_mean, std::abs(wJ.dot(x.pi0)) / std::max(1.0, x.pi0.norm()));
      }
    }
  }
  const RunResult r = run(load_config("forced.json"));
  for (size_t n = 1; n < r.states.size(); ++n, ++steps) worst_c = std::max(worst_c, r.states[n].c_pi_residual);
  v.detail << steps << " steps, max c_pi residual " << worst_c << ", max |pi0 mean| " << worst_mean;
  v.require(worst_c <= 1e-8, "c_pi identity");
  v.require(worst_mean <= 1e-12, "zero mean");
}

// 8. Picard contraction matrix
void picard_contraction(Verdict& v) {
  int pairs = 0, decreasing = 0;
  bool geometric = true, consistent = true;
  double worst_self = 0.0;
  std::vector<GeometrySpec> geos(2);
  geos[1].type = "ellipse";
  geos[1].a = 1.2;
  geos[1].b = 0.85;
  geos[1].L = 0.25;
  for (const GeometrySpec& gs : geos) {
    const ReferenceGeometry g = make_geometry(gs);
    const MixedSpace s(g, build_mesh(g, 0.25), 4);
    CoupledState init = CoupledState::zero(s);
    init.w(5) = 0.05;
    init.w_prev = init.w;
    init.u = s.E * init.w;
    for (double fa : {1e-3, 1.0, 10.0}) {
      ProblemData data;
      data.f = [fa](const Vec2& x, double) -> Vec2 { return fa * Vec2(1.0 + x.y(), -x.x()); };
      data.g = [fa](double y, double) { return fa * std::cos(2 * kTwoPi * y); };
      double prev = -1.0;
      for (double T : {0.2, 0.1, 0.05}) {
        PicardOptions opt;
        opt.t_star = T;
        opt.dt = 0.0125;
        opt.tol = 1e-10;
        PicardReport rep;
        const Trajectory t = picard_solve(s, data, init, opt, &rep);
        double th = 0.0;
        for (double x : rep.theta) th = std::max(th, x);
        geometric = geometric && rep.converged && th < opt.theta_max;
        const double self = self_consistency_residual(t, data);
        worst_self = std::max(worst_self, self / opt.tol);
        consistent = consistent && self <= 10 * opt.tol;
        if (prev >= 0.0) {
          ++pairs;
          decreasing += th < prev;
        }
        prev = th;
      }
    }
  }
  const double frac = double(decreasing) / pairs;
  v.detail << "theta decreased in " << decreasing << "/" << pairs << " halvings, worst self-consistency "
           << worst_self << " tol";
  v.require(geometric, "geometric decay");
  v.require(frac >= 0.8, "theta trend");
  v.require(consistent, "self-consistency");
}

bool segments_cross(const Vec2& a, const Vec2& b, const Vec2& c, const Vec2& d) {
  auto cross = [](const Vec2& u, const Vec2& w) { return u.x() * w.y() - u.y() * w.x(); };
  return cross(b - a, c - a) * cross(b - a, d - a) <= 0 && cross(d - c, a - c) * cross(d - c, b - c) <= 0;
}

bool brute_force_crossing(const ReferenceGeometry& g, const PeriodicField& eta, int n) {
  std::vector<Vec2> p(n);
  for (int j = 0; j < n; ++j) p[j] = deformed_point(g, eta, double(j) / n);
  for (int i = 0; i < n; ++i)
    for (int j = i + 2; j < n; ++j)
      if (!(i == 0 && j == n - 1) && segments_cross(p[i], p[(i + 1) % n], p[j], p[(j + 1) % n])) return true;
  return false;
}

double fd_alignment(const ReferenceGeometry& g, const PeriodicField& eta) {
  double amin = 1.0;
  for (int j = 0; j < 4000; ++j) {
    const double y = j / 4000.0, d = 1e-6;
    const Vec2 t = (deformed_point(g, eta, y + d) - deformed_point(g, eta, y - d)) / (2 * d);
    amin = std::min(amin, g.normal(y).dot(Vec2(t.y(), -t.x()).normalized()));
  }
  return amin;
}

// 9. restart consistency and the three stress terminations
void continuation(Verdict& v) {
  RunConfig one = load_config("forced.json");
  one.T = 0.2;
  one.t_star = 0.2;
  one.picard_tol = 1e-10;
  RunConfig two = one;
  two.t_star = 0.1;
  const RunResult a = run(one), b = run(two);
  const double d = state_distance(assemble(*a.disc->space, BoundaryDisplacement()), a.states.back(), b.states.back());
  v.detail << "restart distance " << d;
  v.require(a.termination == Termination::Horizon && b.termination == Termination::Horizon && b.slabs.size() == 2 &&
                d <= 10 * one.picard_tol,
            "restart");

  const RunConfig cd = load_config("stress_displacement.json");
  const RunResult rd = run(cd);
  {
    const PeriodicField eta = PeriodicField::from_real_vector(rd.states.back().eta);
    const double sup = eta.max_abs(50000);
    v.detail << "; displacement: " << to_string(rd.termination) << " dense sup " << sup << " guard "
             << rd.final_check.guard;
    v.require(rd.termination == Termination::DisplacementLimit && sup >= rd.final_check.guard, "displacement");
  }
  const RunConfig cg = load_config("stress_degeneracy.json");
  const RunResult rg = run(cg);
  {
    const PeriodicField eta = PeriodicField::from_real_vector(rg.states.back().eta);
    const double al = fd_alignment(*rg.disc->geometry, eta);
    v.detail << "; degeneracy: " << to_string(rg.termination) << " FD alignment " << al;
    v.require(rg.termination == Termination::Degeneracy && al <= cg.degeneracy.alignment &&
                  !brute_force_crossing(*rg.disc->geometry, eta, 1000),
              "degeneracy");
  }
  const RunResult rs = run(load_config("stress_self_intersection.json"));
  {
    const ReferenceGeometry& g = *rs.disc->geometry;
    const bool last = brute_force_crossing(g, PeriodicField::from_real_vector(rs.states.back().eta), 2000);
    const bool before = brute_force_crossing(g, PeriodicField::from_real_vector(rs.states[rs.states.size() - 2].eta), 2000);
    v.detail << "; self-intersection: " << to_string(rs.termination) << " at t " << rs.t_end << ", all-pairs crossing "
             << last;
    v.require(rs.termination == Termination::SelfIntersection && last && !before, "self-intersection");
  }
}

double dense_multiplier_norm(const PeriodicField& phi, double s, int K) {
  const PeriodicField d = phi.differentiate(1);
  const int Ko = K + d.max_mode();
  const int n = 4 * Ko + 8;
  Eigen::MatrixXcd M(2 * Ko + 1, 2 * K + 1);
  auto w = [s](int k) { return std::sqrt(1.0 + std::pow(kTwoPi * std::abs(k), 2.0 * (s - 1.0))); };
  for (int k = -K; k <= K; ++k) {
    std::vector<cplx> prod(n);
    for (int j = 0; j < n; ++j) prod[j] = d(double(j) / n) * std::exp(cplx(0.0, kTwoPi * k * double(j) / n));
    for (int m = -Ko; m <= Ko; ++m) {
      cplx c = 0.0;
      for (int j = 0; j < n; ++j) c += prod[j] * std::exp(cplx(0.0, -kTwoPi * m * double(j) / n));
      M(m + Ko, k + K) = c / double(n) * w(m) / w(k);
    }
  }
  return Eigen::JacobiSVD<Eigen::MatrixXcd>(M).singularValues()(0);
}

// 10. multiplier norm estimator
void multiplier(Verdict& v) {
  const double zero = multiplier_norm_estimate(PeriodicField::constant(2.0, 4), 1.5, 32);
  const PeriodicField phi = random_eta(5, 0.1);
  double worst_hom = 0.0, worst_svd = 0.0;
  for (int K : {8, 16, 32, 64})
    for (double s : {1.0, 1.5, 2.0}) {
      const double a = multiplier_norm_estimate(phi, s, K);
      const double b = multiplier_norm_estimate(-3.5 * phi, s, K);
      worst_hom = std::max(worst_hom, std::abs(b - 3.5 * a) / b);
      worst_svd = std::max(worst_svd, std::abs(a / dense_multiplier_norm(phi, s, K) - 1.0));
    }
  v.detail << "constant " << zero << ", homogeneity defect " << worst_hom << ", max deviation from SVD "
           << 100 * worst_svd << "%";
  v.require(zero == 0.0, "constants");
  v.require(worst_hom <= 1e-8, "homogeneity");
  v.require(worst_svd <= 0.05, "SVD oracle");
}

// 11. half-space extension determinant
void half_space(Verdict& v) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  const int nx = 128, nz = 32;
  double worst_fd = 0.0, lo_half = 0.0, hi_half = 0.0;
  bool inside = true;
  for (int t = 0; t < 10; ++t) {
    // periodic piecewise-linear graph with random slopes
    std::vector<double> graph(nx);
    double y = 0.0;
    std::vector<double> slope(nx);
    for (auto& sl : slope) sl = u(rng);
    double mean = 0.0;
    for (double sl : slope) mean += sl / nx;
    for (int j = 0; j < nx; ++j) {
      graph[j] = y;
      y += (slope[j] - mean) / nx;
    }
    double K = 0.0;
    for (int j = 0; j < nx; ++j) K = std::max(K, std::abs(graph[(j + 1) % nx] - graph[j]) * nx);
    const double ratio = t == 0 ? 0.5 : 0.05 + 0.45 * (u(rng) + 1.0) / 2.0;
    const double N = K / ratio;
    const auto H = build_half_space_extension(graph, K, N, nz);
    inside = inside && H.det_min >= 1.0 - ratio - 1e-12 && H.det_max <= 1.0 + ratio + 1e-12;
    if (t == 0) {
      lo_half = H.det_min;
      hi_half = H.det_max;
      inside = inside && H.det_min >= 0.5 && H.det_max <= 2.0;
    }
    // independent determinant: d/dt of the mollified graph differentiated under the integral,
    // -int zeta(u) u phi'(z - t u) du with phi' piecewise constant, by fine midpoint quadrature
    auto dT = [&](double z, double tt) {
      const int nq = 20000;
      double acc = 0.0;
      for (int q = 0; q < nq; ++q) {
        const double uu = -1.0 + (q + 0.5) * 2.0 / nq;
        double x = z - tt * uu;
        x -= std::floor(x);
        const int j = static_cast<int>(x * nx) % nx;
        acc -= mollifier(uu) * uu * (graph[(j + 1) % nx] - graph[j]) * nx * 2.0 / nq;
      }
      return acc;
    };
    for (int j = 0; j < nx; j += 8)
      for (int i = 0; i < nz; i += 4) {
        const double oracle = 1.0 + dT(double(j) / nx, H.z_n(i) / N) / N;
        worst_fd = std::max(worst_fd, std::abs(oracle - H.det(i, j)));
      }
  }
  v.detail << "K/N = 1/2 det range [" << lo_half << ", " << hi_half << "], max deviation from quadrature oracle "
           << worst_fd;
  v.require(inside, "det bounds");
  v.require(worst_fd < 1e-3, "determinant oracle");
}

}  // namespace

int main() {
  std::vector<StokesBenchRow> stokes_rows;
  const std::vector<std::pair<std::string, std::function<void(Verdict&)>>> criteria = {
      {"hanzawa kernel", hanzawa_kernel},
      {"coefficient fields", coefficient_fields_check},
      {"extension trace", extension_trace},
      {"stokes convergence", [&](Verdict& v) { stokes_convergence(v, stokes_rows); }},
      {"regularity probe", [&](Verdict& v) { regularity_probe(v, stokes_rows); }},
      {"energy identity", energy_identity},
      {"pressure split", pressure_split},
      {"picard contraction", picard_contraction},
      {"global continuation", continuation},
      {"multiplier estimator", multiplier},
      {"half-space extension", half_space}};
  int failed = 0;
  for (size_t i = 0; i < criteria.size(); ++i) {
    Verdict v;
    const auto t0 = std::chrono::steady_clock::now();
    try {
      criteria[i].second(v);
    } catch (const std::exception& e) {
      v.pass = false;
      v.detail << " [exception: " << e.what() << "]";
    }
    const double sec = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    failed += !v.pass;
    std::printf("%s %2zu %-22s %s (%.1f s)\n", v.pass ? "PASS" : "FAIL", i + 1, criteria[i].first.c_str(),
                v.detail.str().c_str(), sec);
    std::fflush(stdout);
  }
  std::printf("%d/%zu criteria passed\n", int(criteria.size()) - failed, criteria.size());
  return failed ? 1 : 0;
}
