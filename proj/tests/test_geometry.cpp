#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <random>

#include "fsi/geometry.hpp"

using namespace fsi;

namespace {

PeriodicField random_eta(std::mt19937& rng, int K, double sup_target) {
  std::normal_distribution<double> nd;
  PeriodicField e(K);
  for (int k = 1; k <= K; ++k) e.set_coeff(k, cplx(nd(rng), nd(rng)) / double(k * k));
  e.set_coeff(0, 0.3 * nd(rng));
  const double s = e.max_abs(4096);
  return e * (sup_target / s);
}

Vec2 random_point_in_disk(std::mt19937& rng, double r) {
  std::uniform_real_distribution<double> u(-r, r);
  for (;;) {
    Vec2 p(u(rng), u(rng));
    if (p.norm() < r) return p;
  }
}

// all-pairs segment test
bool brute_force_intersects(const std::vector<Vec2>& P) {
  const int n = static_cast<int>(P.size());
  auto orient = [](const Vec2& a, const Vec2& b, const Vec2& c) {
    return (b - a).x() * (c - a).y() - (b - a).y() * (c - a).x();
  };
  for (int i = 0; i < n; ++i)
    for (int j = i + 2; j < n; ++j) {
      if (i == 0 && j == n - 1) continue;
      const Vec2 &a = P[i], &b = P[(i + 1) % n], &c = P[j], &d = P[(j + 1) % n];
      const double o1 = orient(a, b, c), o2 = orient(a, b, d), o3 = orient(c, d, a), o4 = orient(c, d, b);
      if (o1 * o2 < 0 && o3 * o4 < 0) return true;
    }
  return false;
}

}  // namespace

TEST_CASE("cutoff profile") {
  Cutoff chi(0.2);
  CHECK(chi.value(0.0) == 1.0);
  CHECK(chi.value(-0.02) == 1.0);
  CHECK(chi.value(0.5) == 1.0);
  CHECK(chi.value(-0.1801) == 0.0);
  CHECK(chi.value(-0.2) == 0.0);
  double sup = 0.0;
  for (int j = 0; j <= 20000; ++j) {
    const double s = -0.2 + 0.2 * j / 20000.0;
    sup = std::max(sup, chi.d1(s));
    const double h = 1e-6;
    CHECK(chi.d1(s) == doctest::Approx((chi.value(s + h) - chi.value(s - h)) / (2 * h)).epsilon(1e-5).scale(1));
    CHECK(chi.d2(s) == doctest::Approx((chi.d1(s + h) - chi.d1(s - h)) / (2 * h)).epsilon(1e-3).scale(1000));
  }
  CHECK(sup <= 1.3 / 0.2);
  CHECK(sup == doctest::Approx(chi.sup_d1()).epsilon(1e-6));
}

TEST_CASE("tubular coordinates on the unit circle") {
  auto g = ReferenceGeometry::circle(1.0, 0.3);
  TubularCoords tc = tubular_coordinates(g, Vec2(1.1, 0.0));
  CHECK(param_distance(tc.y, 0.0) < 1e-13);
  CHECK(tc.s == doctest::Approx(0.1).epsilon(1e-13));
  const double y = 0.37;
  tc = tubular_coordinates(g, g.point(y));
  CHECK(param_distance(tc.y, y) < 1e-12);
  CHECK(std::abs(tc.s) < 1e-13);
  CHECK_THROWS_AS(tubular_coordinates(g, Vec2(0.5, 0.0)), Error);
  try {
    tubular_coordinates(g, Vec2(0.0, 0.0));
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::OutOfTube);
  }
}

TEST_CASE("tubular coordinates on an ellipse against a dense argmin") {
  auto g = ReferenceGeometry::ellipse(2.0, 1.0, 0.4);
  for (Vec2 x : {Vec2(0.0, 1.3), Vec2(1.2, 0.5), Vec2(-1.7, -0.3)}) {
    const int n = 1000000;
    double best = 1e300, ybest = 0.0;
    for (int j = 0; j < n; ++j) {
      const double y = double(j) / n;
      const double d = (Vec2(2 * std::cos(kTwoPi * y), std::sin(kTwoPi * y)) - x).norm();
      if (d < best) best = d, ybest = y;
    }
    if (best >= g.L()) continue;
    TubularCoords tc = tubular_coordinates(g, x);
    CHECK(param_distance(tc.y, ybest) < 2e-6);
    CHECK(std::abs(tc.s) == doctest::Approx(best).epsilon(1e-9));
  }
}

TEST_CASE("Hanzawa transform basic properties") {
  auto g = ReferenceGeometry::circle(1.0, 0.3);
  std::mt19937 rng(3);
  PeriodicField zero(4);
  for (int i = 0; i < 20; ++i) {
    Vec2 x = random_point_in_disk(rng, 1.0);
    CHECK((hanzawa(g, zero, x) - x).norm() == 0.0);
  }
  PeriodicField eta = PeriodicField::from_cos_sin(0.0, {0.1}, {});
  // far from the boundary the map is the identity
  Vec2 far(0.2, -0.3);
  CHECK((hanzawa(g, eta, far) - far).norm() == 0.0);
  for (double y : {0.0, 0.1, 0.45, 0.8}) {
    const Vec2 expect = g.point(y) + 0.1 * std::cos(kTwoPi * y) * g.normal(y);
    CHECK((hanzawa(g, eta, g.point(y)) - expect).norm() < 1e-13);
  }
  PeriodicField big = PeriodicField::from_cos_sin(0.0, {0.31}, {});
  CHECK_THROWS_AS(hanzawa(g, big, Vec2(1, 0)), Error);
}

TEST_CASE("Hanzawa inverse: round trip and fiber bisection oracle") {
  auto g = ReferenceGeometry::circle(1.0, 0.3);
  std::mt19937 rng(5);
  std::uniform_real_distribution<double> u01(0.0, 1.0);
  for (int t = 0; t < 5; ++t) {
    PeriodicField eta = random_eta(rng, 16, 0.5 * g.L() * 0.99);
    for (int i = 0; i < 100; ++i) {
      Vec2 x = random_point_in_disk(rng, 1.0);
      Vec2 xh = hanzawa(g, eta, x);
      CHECK((hanzawa_inverse(g, eta, xh) - x).norm() < 1e-10);
    }
    // fiber oracle
    for (int i = 0; i < 20; ++i) {
      const double y = u01(rng);
      const double tt = -0.25 + 0.35 * u01(rng);
      const Vec2 xh = g.point(y) + tt * g.normal(y);
      const double e = eta(y);
      double lo = -g.L(), hi = g.L();
      for (int it = 0; it < 200; ++it) {
        const double m = 0.5 * (lo + hi);
        if (m + e * g.cutoff().value(m) < tt) lo = m;
        else hi = m;
      }
      const Vec2 ref = g.point(y) + 0.5 * (lo + hi) * g.normal(y);
      CHECK((hanzawa_inverse(g, eta, xh) - ref).norm() < 1e-10);
    }
  }
}

TEST_CASE("coefficient fields: identity, symmetry and finite differences") {
  auto g = ReferenceGeometry::circle(1.0, 0.3);
  std::mt19937 rng(9);
  std::vector<Vec2> pts;
  for (int i = 0; i < 200; ++i) pts.push_back(random_point_in_disk(rng, 1.0));
  HanzawaField id = coefficient_fields(g, BoundaryDisplacement(PeriodicField(6)), pts);
  for (size_t q = 0; q < pts.size(); ++q) {
    CHECK(id.J[q] == 1.0);
    CHECK(id.A[q] == Mat2::Identity());
    CHECK(id.B[q] == Mat2::Identity());
    CHECK(id.psi[q] == pts[q]);
  }
  PeriodicField eta = random_eta(rng, 8, 0.1);
  HanzawaField hf = coefficient_fields(g, BoundaryDisplacement(eta), pts);
  double max_rel = 0.0;
  for (size_t q = 0; q < pts.size(); ++q) {
    CHECK((hf.A[q] - hf.A[q].transpose()).norm() < 1e-14);
    CHECK(hf.A[q].determinant() > 0.0);
    CHECK(hf.A[q].trace() > 0.0);
    const double h = 1e-6;
    Mat2 fd;
    for (int j = 0; j < 2; ++j) {
      Vec2 e = Vec2::Zero();
      e(j) = h;
      fd.col(j) = (hanzawa(g, eta, pts[q] + e) - hanzawa(g, eta, pts[q] - e)) / (2 * h);
    }
    max_rel = std::max(max_rel, (fd - hf.grad[q]).cwiseAbs().maxCoeff() / hf.grad[q].cwiseAbs().maxCoeff());
    CHECK((hf.B[q] - hf.J[q] * hf.Finv[q].transpose()).norm() < 1e-14);
  }
  CHECK(max_rel < 1e-6);
}

TEST_CASE("degeneracy check") {
  auto g = ReferenceGeometry::circle(1.0, 0.3);
  DegeneracyReport ok = degeneracy_check(g, PeriodicField(3));
  CHECK(ok.ok);
  CHECK(ok.min_speed == doctest::Approx(kTwoPi));
  CHECK(ok.min_alignment == doctest::Approx(1.0));
  CHECK(ok.displacement_margin == doctest::Approx(0.3));

  DegeneracyReport big = degeneracy_check(g, PeriodicField::from_cos_sin(0.0, {0.99 * 0.3}, {}));
  CHECK_FALSE(big.ok);
  CHECK(big.reason == "displacement");
  CHECK(big.displacement_margin < 0.05 * 0.3);

  // steep mode: dense oracle on n . n_eta using the closed form for a circle,
  // phi_eta = (1 + eta) e_r, d_y phi_eta = eta' e_r + 2 pi (1 + eta) e_theta
  std::vector<double> a(12, 0.0);
  a[11] = 0.25;
  PeriodicField steep = PeriodicField::from_cos_sin(0.0, a, {});
  double min_dot = 1e300;
  for (int j = 0; j < 200000; ++j) {
    const double y = j / 200000.0;
    const double e = steep(y), de = steep.derivative(y, 1);
    // outward normal of (de, 2 pi (1+e)) in the (e_r, e_theta) frame is (2 pi (1+e), -de)/|.|
    const double dot = kTwoPi * (1 + e) / std::hypot(kTwoPi * (1 + e), de);
    min_dot = std::min(min_dot, dot);
  }
  DegeneracyReport rep = degeneracy_check(g, steep, {0.05, 0.5, 0.05});
  CHECK(rep.min_alignment == doctest::Approx(min_dot).epsilon(1e-4));
  CHECK_FALSE(rep.ok);
  CHECK(rep.reason == "alignment");
}

TEST_CASE("self intersection: sweep agrees with all-pairs oracle") {
  auto g = ReferenceGeometry::circle(1.0, 0.3);
  CHECK_FALSE(self_intersection_check(g, PeriodicField(2)));
  CHECK_FALSE(self_intersection_check(g, PeriodicField::from_cos_sin(0.0, {0.0, 0.01}, {0.0, 0.0, 0.01})));
  std::mt19937 rng(21);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  int n_true = 0, n_false = 0;
  for (int t = 0; t < 24; ++t) {
    std::vector<double> a(6), b(6);
    for (int k = 0; k < 6; ++k) a[k] = (k % 2 == 1 ? -0.9 : 0.25 * u(rng)) * (1 + 0.3 * u(rng));
    for (int k = 0; k < 6; ++k) b[k] = 0.2 * u(rng);
    PeriodicField eta = PeriodicField::from_cos_sin(0.0, a, b);
    std::vector<Vec2> P(g.n_check(6));
    for (size_t j = 0; j < P.size(); ++j) P[j] = deformed_point(g, eta, double(j) / P.size());
    const bool fast = self_intersection_check(g, eta);
    CHECK(fast == brute_force_intersects(P));
    (fast ? n_true : n_false)++;
  }
  CHECK(n_true > 0);
}

TEST_CASE("local charts") {
  auto g = ReferenceGeometry::circle(1.0, 0.3);
  PeriodicField zero(2);
  Chart c = local_chart(g, zero, 0.75, 0.5);
  CHECK((c.x0 - Vec2(0.0, -1.0)).norm() < 1e-14);
  CHECK((c.Q * Vec2(0.0, -1.0) - Vec2(0.0, 1.0)).norm() < 1e-14);
  CHECK(std::abs(c.derivative(0.0)) < 1e-10);
  for (double z : {-0.43, -0.1, 0.05, 0.31, 0.49})
    CHECK(c(z) == doctest::Approx(std::sqrt(1 - z * z) - 1.0).epsilon(1e-10).scale(1));
  CHECK(chart_lipschitz(c) == doctest::Approx(0.5 / std::sqrt(0.75)).epsilon(1e-6));
  double prev = 1e300;
  for (double r : {0.4, 0.2, 0.1, 0.05}) {
    const double lip = chart_lipschitz(local_chart(g, zero, 0.75, r));
    CHECK(lip < prev);
    CHECK(lip == doctest::Approx(r / std::sqrt(1 - r * r)).epsilon(1e-6));
    prev = lip;
  }
  CHECK_THROWS_AS(local_chart(g, zero, 0.75, 1.5), Error);

  CHECK(chart_lipschitz(Chart::from_function([](double) { return 0.0; }, 0.3)) == 0.0);
  CHECK(chart_lipschitz(Chart::from_function([](double z) { return 0.7 * z; }, 0.3)) ==
        doctest::Approx(0.7).epsilon(1e-10));

  // re-substitution: interpolated chart points lie on the deformed curve
  std::mt19937 rng(4);
  PeriodicField eta = random_eta(rng, 6, 0.05);
  Chart ce = local_chart(g, eta, 0.3, 0.3);
  for (double z : {-0.27, -0.05, 0.12, 0.29}) {
    double lo = 0.0, hi = 0.6;
    auto zl = [&](double y) { return (ce.Q * (deformed_point(g, eta, y) - ce.x0)).x(); };
    const double sg = zl(hi) > zl(lo) ? 1 : -1;
    for (int it = 0; it < 200; ++it) {
      double m = 0.5 * (lo + hi);
      if (sg * zl(m) < sg * z) lo = m;
      else hi = m;
    }
    const double h = (ce.Q * (deformed_point(g, eta, 0.5 * (lo + hi)) - ce.x0)).y();
    CHECK(std::abs(ce(z) - h) < 1e-8);
  }
}

TEST_CASE("Hanzawa displacement scales linearly with eta") {
  auto g = ReferenceGeometry::circle(1.0, 0.3);
  std::mt19937 rng(12);
  PeriodicField shape = random_eta(rng, 5, 1.0);
  std::vector<Vec2> pts;
  for (int i = 0; i < 400; ++i) pts.push_back(random_point_in_disk(rng, 1.0));
  auto frames = fiber_frames(g, pts);
  std::vector<double> ratios;
  for (double lam : {0.1, 0.2, 0.3, 0.4, 0.5}) {
    PeriodicField e = shape * (lam * g.L());
    HanzawaField hf = coefficient_fields(g, BoundaryDisplacement(e), frames);
    double n1 = 0.0;
    for (size_t q = 0; q < pts.size(); ++q)
      n1 += (hf.psi[q] - pts[q]).squaredNorm() + (hf.grad[q] - Mat2::Identity()).squaredNorm();
    ratios.push_back(std::sqrt(n1) / (lam * g.L()));
  }
  for (double r : ratios) CHECK(r == doctest::Approx(ratios.front()).epsilon(0.2));
}
