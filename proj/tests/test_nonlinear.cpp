#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <random>

#include "fsi/nonlinear.hpp"

using namespace fsi;

namespace {

struct Setup {
  ReferenceGeometry g;
  Mesh m;
  MixedSpace s;
  Setup(double h, int K) : g(ReferenceGeometry::circle(1.0, 0.3)), m(build_mesh(g, h)), s(g, m, K) {}
};

VectorXd modes(const MixedSpace& s, std::initializer_list<std::pair<int, double>> entries) {
  VectorXd v = VectorXd::Zero(s.n_beam());
  for (const auto& [m, a] : entries) v(m) = a;
  return v;
}

}  // namespace

TEST_CASE("sources vanish at the frozen geometry") {
  Setup su(0.25, 4);
  const MixedSpace& s = su.s;
  const VectorXd eta0 = modes(s, {{1, 0.03}, {4, -0.02}});
  const auto ops = assemble(s, BoundaryDisplacement(PeriodicField::from_real_vector(eta0)));
  ProblemData data;
  CoupledState a = CoupledState::zero(s), b = CoupledState::zero(s);
  a.eta = b.eta = eta0;
  const LevelSources z = source_terms(ops, data, b, a, 0.1);
  double mx = 0.0;
  for (int q = 0; q < s.n_qp(); ++q) mx = std::max({mx, z.src.bfh[q].norm(), z.src.H[q].norm(), std::abs(z.src.h[q])});
  CHECK(mx == 0.0);
  CHECK(z.src.g.norm() == 0.0);

  // nonzero velocity and pressure, same geometry: H and h vanish, bfh is pure transport
  std::mt19937 rng(1);
  std::normal_distribution<double> nd;
  b.w = modes(s, {{1, 0.2}, {2, -0.1}});
  VectorXd x(s.n_int() + s.n_beam());
  for (int i = 0; i < x.size(); ++i) x(i) = nd(rng);
  x.tail(s.n_beam()) = b.w;
  b.u = s.P * x;
  b.pi0 = VectorXd::Random(s.n_pre());
  const LevelSources t = source_terms(ops, data, b, a, 0.1);
  mx = 0.0;
  for (int q = 0; q < s.n_qp(); ++q) mx = std::max({mx, t.src.H[q].norm(), std::abs(t.src.h[q])});
  CHECK(mx == 0.0);
}

TEST_CASE("source fields against a finite-difference oracle") {
  Setup su(0.2, 4);
  const MixedSpace& s = su.s;
  const ReferenceGeometry& g = su.g;
  const VectorXd eta0 = modes(s, {{1, 0.02}});
  const auto ops = assemble(s, BoundaryDisplacement(PeriodicField::from_real_vector(eta0)));
  ProblemData data;
  data.par.rho_f = 1.3;
  data.par.mu = 0.7;
  data.f = [](const Vec2& x, double t) { return Vec2(std::sin(x.y()) + t, x.x() * x.x()); };

  CoupledState prev = CoupledState::zero(s), lv = CoupledState::zero(s);
  const double dt = 0.05;
  lv.t = 0.3;
  lv.eta = modes(s, {{1, 0.04}, {3, 0.03}, {6, -0.01}});
  lv.w = modes(s, {{0, 0.01}, {2, 0.3}, {5, -0.2}});
  std::mt19937 rng(8);
  std::normal_distribution<double> nd;
  VectorXd x(s.n_int() + s.n_beam());
  for (int i = 0; i < x.size(); ++i) x(i) = nd(rng);
  x.tail(s.n_beam()) = lv.w;
  lv.u = s.P * x;
  for (int i = 0; i < s.n_int(); ++i) x(i) = nd(rng);
  x.tail(s.n_beam()).setZero();
  prev.u = s.P * x;
  lv.pi0 = VectorXd::Random(s.n_pre());
  lv.c_pi = 0.4;

  const LevelSources ls = source_terms(ops, data, lv, prev, dt);
  std::vector<Vec2> W, Wp;
  std::vector<Mat2> G, Gp;
  s.velocity_at_qp(lv.u, W, G);
  s.velocity_at_qp(prev.u, Wp, Gp);
  const auto q = s.pressure_at_qp(lv.pressure());
  const PeriodicField z = PeriodicField::from_real_vector(lv.eta);
  const PeriodicField zt = PeriodicField::from_real_vector(lv.w);
  const double d = 1e-6;
  double eb = 0.0, eH = 0.0, eh = 0.0;
  for (int k = 0; k < s.n_qp(); k += 3) {
    const Vec2 xq = s.qp_x[k];
    // independent differencing of the map in space and along the beam velocity in time
    Mat2 F, F0;
    for (int c = 0; c < 2; ++c) {
      Vec2 e = Vec2::Zero();
      e(c) = d;
      F.col(c) = (hanzawa(g, z, xq + e) - hanzawa(g, z, xq - e)) / (2 * d);
      F0.col(c) = (hanzawa(g, PeriodicField::from_real_vector(eta0), xq + e) -
                   hanzawa(g, PeriodicField::from_real_vector(eta0), xq - e)) / (2 * d);
    }
    const Vec2 dtpsi = (hanzawa(g, z + d * zt, xq) - hanzawa(g, z - d * zt, xq)) / (2 * d);
    const double J = F.determinant(), J0 = F0.determinant();
    const Mat2 Fi = F.inverse(), F0i = F0.inverse();
    const Mat2 A = J * Fi * Fi.transpose(), A0 = J0 * F0i * F0i.transpose();
    const Mat2 B = J * Fi.transpose(), B0 = J0 * F0i.transpose();
    const Vec2 dtw = (W[k] - Wp[k]) / dt;
    const Vec2 bfh = -1.3 * (J - J0) * dtw - 1.3 * J * G[k] * Fi * (W[k] - dtpsi) + J * data.f(hanzawa(g, z, xq), 0.3);
    const Mat2 H = 0.7 * G[k] * (A0 - A) - (B0 - B) * q[k];
    const double h = (B0 - B).cwiseProduct(G[k]).sum();
    eb = std::max(eb, (bfh - ls.src.bfh[k]).norm() / (1.0 + bfh.norm()));
    eH = std::max(eH, (H - ls.src.H[k]).norm() / (1.0 + H.norm()));
    eh = std::max(eh, std::abs(h - ls.src.h[k]) / (1.0 + std::abs(h)));
  }
  MESSAGE("FD oracle deviations " << eb << " " << eH << " " << eh);
  CHECK(eb < 1e-6);
  CHECK(eH < 1e-6);
  CHECK(eh < 1e-6);
}

TEST_CASE("beam load projection") {
  Setup su(0.25, 4);
  const VectorXd g = beam_load_modes(su.s, [](double y, double t) { return t + 2.0 * std::cos(kTwoPi * 3 * y); }, 0.5);
  CHECK(g(0) == doctest::Approx(0.5));
  CHECK(g(5) == doctest::Approx(2.0));
  CHECK(std::abs(g(6)) < 1e-13);
  CHECK(std::abs(g(1)) < 1e-13);
}

TEST_CASE("Y* distance") {
  Setup su(0.25, 3);
  const MixedSpace& s = su.s;
  Trajectory a;
  a.ops = std::make_shared<AssembledOperators>(assemble(s, BoundaryDisplacement()));
  a.dt = 0.1;
  a.states = {CoupledState::zero(s), CoupledState::zero(s)};
  Trajectory b = a;
  CHECK(ystar_distance(a, b) == 0.0);

  // level-1 differences: constant velocity (1, 0), beam cos mode, pressure constant 2
  for (int i = 0; i < s.n_nodes(); ++i) b.states[1].u(2 * i) = 1.0;
  b.states[1].eta(1) = 1.0;
  b.states[1].c_pi = 2.0;
  const double area = s.area;
  const double m3 = 0.5 * std::pow(kTwoPi, 6);
  const double expect = std::sqrt(area + m3 + a.dt * (area / (a.dt * a.dt) + 4.0 * area));
  CHECK(ystar_distance(a, b) == doctest::Approx(expect).epsilon(1e-10));

  // homogeneity
  Trajectory c = b;
  for (auto& st : c.states) {
    st.u *= 3.0;
    st.eta *= 3.0;
    st.w *= 3.0;
    st.pi0 *= 3.0;
    st.c_pi *= 3.0;
  }
  CHECK(ystar_distance(a, c) == doctest::Approx(3.0 * ystar_distance(a, b)).epsilon(1e-12));

  Trajectory d = a;
  d.states.push_back(CoupledState::zero(s));
  CHECK_THROWS_AS(ystar_distance(a, d), Error);
}

TEST_CASE("Picard on zero data") {
  Setup su(0.25, 3);
  PicardOptions opt;
  opt.t_star = 0.1;
  opt.dt = 0.02;
  PicardReport rep;
  const Trajectory t = picard_solve(su.s, ProblemData(), CoupledState::zero(su.s), opt, &rep);
  CHECK(rep.iterations == 1);
  CHECK(rep.converged);
  CHECK(rep.distance[0] == 0.0);
  for (const auto& st : t.states) CHECK(st.u.norm() == 0.0);
}

TEST_CASE("Picard contraction on small forcing") {
  Setup su(0.25, 4);
  ProblemData data;
  data.f = [](const Vec2& x, double) -> Vec2 { return 1e-3 * Vec2(1.0 + x.y(), -x.x()); };
  data.g = [](double y, double) { return 1e-3 * std::cos(kTwoPi * 2 * y); };
  CoupledState init = CoupledState::zero(su.s);
  init.w = modes(su.s, {{3, 0.05}});
  init.u = su.s.E * init.w;
  std::vector<double> theta;
  for (double T : {0.2, 0.1, 0.05}) {
    PicardOptions opt;
    opt.t_star = T;
    opt.dt = 0.0125;
    opt.tol = 1e-10;
    PicardReport rep;
    const Trajectory t = picard_solve(su.s, data, init, opt, &rep);
    double th = 0.0;
    for (double x : rep.theta) th = std::max(th, x);
    theta.push_back(th);
    MESSAGE("T* = " << T << ": iterations " << rep.iterations << ", max theta " << th);
    const double r = self_consistency_residual(t, data);
    CHECK(r <= 10 * opt.tol);
    for (size_t n = 1; n < t.states.size(); ++n) CHECK(t.states[n].interface_defect(su.s) <= 1e-12);
  }
  CHECK(theta[1] < theta[0]);
  CHECK(theta[2] < theta[1]);
}
