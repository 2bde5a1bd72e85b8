#include "fsi/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace fsi {

// ---------------------------------------------------------------- cutoff

namespace {
constexpr double kRamp = 1.0 / 32.0;  // ramp width in units of the 0.8 L transition

double smooth_step(double x) { return x * x * (3.0 - 2.0 * x); }
double smooth_step_d(double x) { return 6.0 * x * (1.0 - x); }
double smooth_step_int(double x) { return x * x * x - 0.5 * x * x * x * x; }
}  // namespace

double Cutoff::value(double s) const {
  const double u = (s + 0.9 * L_) / (0.8 * L_);
  const double c = 1.0 / (1.0 - kRamp);
  double I;
  if (u <= 0.0) return 0.0;
  if (u >= 1.0) return 1.0;
  if (u < kRamp)
    I = kRamp * smooth_step_int(u / kRamp);
  else if (u <= 1.0 - kRamp)
    I = 0.5 * kRamp + (u - kRamp);
  else
    I = (1.0 - kRamp) - kRamp * smooth_step_int((1.0 - u) / kRamp);
  return std::min(1.0, c * I);
}

double Cutoff::d1(double s) const {
  const double u = (s + 0.9 * L_) / (0.8 * L_);
  if (u <= 0.0 || u >= 1.0) return 0.0;
  double b = 1.0;
  if (u < kRamp) b = smooth_step(u / kRamp);
  else if (u > 1.0 - kRamp) b = smooth_step((1.0 - u) / kRamp);
  return b / ((1.0 - kRamp) * 0.8 * L_);
}

double Cutoff::d2(double s) const {
  const double u = (s + 0.9 * L_) / (0.8 * L_);
  if (u <= 0.0 || u >= 1.0) return 0.0;
  double db = 0.0;
  if (u < kRamp) db = smooth_step_d(u / kRamp) / kRamp;
  else if (u > 1.0 - kRamp) db = -smooth_step_d((1.0 - u) / kRamp) / kRamp;
  const double a = 0.8 * L_;
  return db / ((1.0 - kRamp) * a * a);
}

double Cutoff::sup_d1() const { return 1.0 / ((1.0 - kRamp) * 0.8 * L_); }

// ---------------------------------------------------------------- reference curve

ReferenceGeometry::ReferenceGeometry(PeriodicField x, PeriodicField y, double L,
                                     double alpha_fraction, bool validate)
    : px_(std::move(x)), py_(std::move(y)), L_(L), alpha_(alpha_fraction * L), chi_(L) {
  if (!(L > 0.0)) throw Error(ErrorCode::ConfigError, "tube width L must be positive");
  if (!(alpha_fraction > 0.0 && alpha_fraction * chi_.sup_d1() * L < 1.0))
    throw Error(ErrorCode::ConfigError, "alpha too large for the cutoff slope");
  const int n = 4096;
  min_speed_ = 1e300;
  perimeter_ = 0.0;
  for (int j = 0; j < n; ++j) {
    double sp = tangent(double(j) / n).norm();
    min_speed_ = std::min(min_speed_, sp);
    perimeter_ += sp / n;
  }
  const int nc = std::max(256, 8 * max_mode());
  coarse_.resize(nc);
  for (int j = 0; j < nc; ++j) coarse_[j] = point(double(j) / nc);
  if (!validate) return;
  if (!(min_speed_ > 0.0)) throw Error(ErrorCode::ConfigError, "curve parametrization degenerates");
  std::vector<Vec2> poly(n_check());
  for (size_t j = 0; j < poly.size(); ++j) poly[j] = point(double(j) / poly.size());
  if (polyline_self_intersects(poly)) throw Error(ErrorCode::ConfigError, "reference curve is not simple");
  // counter-clockwise orientation (shoelace)
  double area = 0.0;
  for (size_t j = 0; j < poly.size(); ++j) {
    const Vec2& a = poly[j];
    const Vec2& b = poly[(j + 1) % poly.size()];
    area += a.x() * b.y() - a.y() * b.x();
  }
  if (area <= 0.0) throw Error(ErrorCode::ConfigError, "reference curve must be counter-clockwise");
  std::string d = tube_defect();
  if (!d.empty()) throw Error(ErrorCode::ConfigError, "tube width too large: " + d);
}

ReferenceGeometry ReferenceGeometry::circle(double r, double L, Vec2 center) {
  PeriodicField x = PeriodicField::from_cos_sin(center.x(), {r}, {0.0});
  PeriodicField y = PeriodicField::from_cos_sin(center.y(), {0.0}, {r});
  return ReferenceGeometry(x, y, L);
}

ReferenceGeometry ReferenceGeometry::ellipse(double a, double b, double L) {
  PeriodicField x = PeriodicField::from_cos_sin(0.0, {a}, {0.0});
  PeriodicField y = PeriodicField::from_cos_sin(0.0, {0.0}, {b});
  return ReferenceGeometry(x, y, L);
}

CurveFrame ReferenceGeometry::frame(double y) const {
  double bx[4], by[4];
  px_.eval(y, 2, bx);
  py_.eval(y, 2, by);
  CurveFrame f;
  f.p = Vec2(bx[0], by[0]);
  f.dp = Vec2(bx[1], by[1]);
  f.ddp = Vec2(bx[2], by[2]);
  const double sp = f.dp.norm();
  f.n = rot_cw(f.dp) / sp;
  f.dn = rot_cw(f.ddp) / sp - rot_cw(f.dp) * (f.dp.dot(f.ddp) / (sp * sp * sp));
  return f;
}

Vec2 ReferenceGeometry::point(double y) const { return Vec2(px_(y), py_(y)); }
Vec2 ReferenceGeometry::tangent(double y) const {
  return Vec2(px_.derivative(y, 1), py_.derivative(y, 1));
}
Vec2 ReferenceGeometry::normal(double y) const {
  Vec2 t = tangent(y);
  return rot_cw(t) / t.norm();
}

int ReferenceGeometry::n_check(int k_eta) const {
  return std::max(1024, 64 * std::max(max_mode(), k_eta));
}

NearestPoint ReferenceGeometry::nearest(const Vec2& x) const {
  const int nc = static_cast<int>(coarse_.size());
  std::vector<double> d2(nc);
  double dmin = 1e300;
  for (int j = 0; j < nc; ++j) {
    d2[j] = (coarse_[j] - x).squaredNorm();
    dmin = std::min(dmin, d2[j]);
  }
  // coarse local minima that could still hold the global one
  double seg = 0.0;
  for (int j = 0; j < nc; ++j) seg = std::max(seg, (coarse_[(j + 1) % nc] - coarse_[j]).norm());
  const double cutoff = std::pow(std::sqrt(dmin) + seg, 2);
  std::vector<int> cand;
  for (int j = 0; j < nc; ++j) {
    const double a = d2[(j + nc - 1) % nc], b = d2[(j + 1) % nc];
    if (d2[j] <= a && d2[j] <= b && d2[j] <= cutoff) cand.push_back(j);
  }
  struct Refined {
    double y, dist;
  };
  std::vector<Refined> refined;
  const double h = 1.0 / nc;
  for (int j : cand) {
    double y = double(j) / nc;
    for (int it = 0; it < 60; ++it) {
      double bx[3], by[3];
      px_.eval(y, 2, bx);
      py_.eval(y, 2, by);
      const Vec2 r(x.x() - bx[0], x.y() - by[0]);
      const Vec2 d1(bx[1], by[1]), dd(bx[2], by[2]);
      const double f = r.dot(d1);
      const double fp = -d1.squaredNorm() + r.dot(dd);
      double step;
      if (fp < 0.0)
        step = -f / fp;
      else
        step = (f > 0 ? 0.25 : -0.25) * h;
      step = std::clamp(step, -h, h);
      y += step;
      if (std::abs(step) < 1e-15) break;
    }
    refined.push_back({wrap01(y), (point(y) - x).norm()});
  }
  auto best = std::min_element(refined.begin(), refined.end(),
                               [](const Refined& a, const Refined& b) { return a.dist < b.dist; });
  NearestPoint np;
  np.y = best->y;
  np.dist = best->dist;
  const Vec2 n = normal(np.y);
  np.s = (x - point(np.y)).dot(n);
  for (const auto& r : refined) {
    if (param_distance(r.y, best->y) > 1e-6 &&
        std::abs(r.dist - best->dist) <= 1e-9 * std::max(1.0, best->dist))
      np.ambiguous = true;
  }
  return np;
}

std::string ReferenceGeometry::tube_defect(int n_y, int n_s) const {
  for (int i = 0; i < n_y; ++i) {
    const double y = (i + 0.5) / n_y;
    const CurveFrame f = frame(y);
    for (int j = 0; j < n_s; ++j) {
      const double s = -L_ * (j + 1.0) / (n_s + 0.01);
      const NearestPoint np = nearest(f.p + s * f.n);
      if (np.ambiguous || param_distance(np.y, y) > 1e-6 || std::abs(np.s - s) > 1e-8 * std::max(1.0, L_)) {
        return "projection not unique at y=" + std::to_string(y) + ", s=" + std::to_string(s);
      }
    }
  }
  return {};
}

// ---------------------------------------------------------------- eta-dependent maps

double sup_norm(const ReferenceGeometry& g, const PeriodicField& eta) {
  if (eta.is_zero()) return 0.0;
  return eta.max_abs(g.n_check(eta.max_mode()));
}

TubularCoords tubular_coordinates(const ReferenceGeometry& g, const Vec2& x) {
  const NearestPoint np = g.nearest(x);
  if (np.dist >= g.L()) throw Error(ErrorCode::OutOfTube, "point outside the tubular neighbourhood");
  if (np.ambiguous) throw Error(ErrorCode::AmbiguousProjection, "two nearest boundary points");
  return {np.y, np.s};
}

Vec2 deformed_point(const ReferenceGeometry& g, const PeriodicField& eta, double y) {
  return g.point(y) + eta(y) * g.normal(y);
}

Vec2 deformed_tangent(const ReferenceGeometry& g, const PeriodicField& eta, double y) {
  const CurveFrame f = g.frame(y);
  double e[2];
  eta.eval(y, 1, e);
  return f.dp + e[1] * f.n + e[0] * f.dn;
}

Vec2 deformed_normal(const ReferenceGeometry& g, const PeriodicField& eta, double y) {
  const Vec2 t = deformed_tangent(g, eta, y);
  return rot_cw(t) / t.norm();
}

namespace {

void check_displacement(const ReferenceGeometry& g, const PeriodicField& eta, double bound) {
  if (sup_norm(g, eta) >= bound)
    throw Error(ErrorCode::DisplacementTooLarge, "||eta||_inf exceeds the admissible bound");
}

Vec2 hanzawa_unchecked(const ReferenceGeometry& g, const PeriodicField& eta, const Vec2& x) {
  const NearestPoint np = g.nearest(x);
  if (np.dist >= g.L()) return x;
  if (np.ambiguous) throw Error(ErrorCode::AmbiguousProjection, "two nearest boundary points");
  const CurveFrame f = g.frame(np.y);
  return f.p + (np.s + eta(np.y) * g.cutoff().value(np.s)) * f.n;
}

FiberFrame make_frame(const ReferenceGeometry& g, const Vec2& x) {
  FiberFrame fr;
  fr.x = x;
  const NearestPoint np = g.nearest(x);
  if (np.dist >= g.L()) return fr;
  if (np.ambiguous) throw Error(ErrorCode::AmbiguousProjection, "two nearest boundary points");
  const CurveFrame f = g.frame(np.y);
  fr.in_tube = true;
  fr.y = np.y;
  fr.s = np.s;
  fr.n = f.n;
  fr.dn = f.dn;
  Mat2 M;
  M.col(0) = f.dp + np.s * f.dn;
  M.col(1) = f.n;
  fr.Minv = M.inverse();
  return fr;
}

// F = I + [eta chi n' + eta' chi n, eta chi' n] M^{-1}
Mat2 frame_gradient(const ReferenceGeometry& g, const FiberFrame& fr, double e0, double e1) {
  if (!fr.in_tube) return Mat2::Identity();
  const double c = g.cutoff().value(fr.s), dc = g.cutoff().d1(fr.s);
  Mat2 P;
  P.col(0) = e0 * c * fr.dn + e1 * c * fr.n;
  P.col(1) = e0 * dc * fr.n;
  return Mat2::Identity() + P * fr.Minv;
}

}  // namespace

Vec2 hanzawa(const ReferenceGeometry& g, const PeriodicField& eta, const Vec2& x) {
  check_displacement(g, eta, g.L());
  if (eta.is_zero()) return x;
  return hanzawa_unchecked(g, eta, x);
}

Mat2 hanzawa_gradient(const ReferenceGeometry& g, const PeriodicField& eta, const Vec2& x) {
  check_displacement(g, eta, g.L());
  const FiberFrame fr = make_frame(g, x);
  if (!fr.in_tube) return Mat2::Identity();
  double e[2];
  eta.eval(fr.y, 1, e);
  return frame_gradient(g, fr, e[0], e[1]);
}

Vec2 hanzawa_inverse(const ReferenceGeometry& g, const PeriodicField& eta, const Vec2& xhat,
                     const InverseOptions& opt) {
  check_displacement(g, eta, g.alpha());
  if (eta.is_zero()) return xhat;
  const double scale = std::max(1.0, xhat.norm());
  Vec2 x = xhat;
  {
    const NearestPoint np = g.nearest(xhat);
    if (np.dist < g.L() && !np.ambiguous) x = xhat - eta(np.y) * g.cutoff().value(np.s) * g.normal(np.y);
  }
  Vec2 res = hanzawa_unchecked(g, eta, x) - xhat;
  for (int it = 0; it < opt.max_iter; ++it) {
    if (res.norm() <= opt.tol * scale) return x;
    const FiberFrame fr = make_frame(g, x);
    double e[2] = {0.0, 0.0};
    if (fr.in_tube) eta.eval(fr.y, 1, e);
    const Mat2 F = frame_gradient(g, fr, e[0], e[1]);
    if (!(F.determinant() > 0.0)) break;
    const Vec2 dx = F.lu().solve(res);
    double lam = 1.0;
    bool improved = false;
    for (int ls = 0; ls < 30; ++ls) {
      const Vec2 xt = x - lam * dx;
      const Vec2 rt = hanzawa_unchecked(g, eta, xt) - xhat;
      if (rt.norm() < res.norm() || rt.norm() <= opt.tol * scale) {
        x = xt;
        res = rt;
        improved = true;
        break;
      }
      lam *= 0.5;
    }
    if (!improved) break;
  }
  if (res.norm() <= opt.tol * scale) return x;
  throw Error(ErrorCode::NewtonDivergence, "Hanzawa inversion did not converge");
}

std::vector<FiberFrame> fiber_frames(const ReferenceGeometry& g, const std::vector<Vec2>& points) {
  std::vector<FiberFrame> out;
  out.reserve(points.size());
  for (const auto& p : points) out.push_back(make_frame(g, p));
  return out;
}

HanzawaField HanzawaField::identity(size_t n) {
  HanzawaField h;
  h.psi.assign(n, Vec2::Zero());
  h.grad.assign(n, Mat2::Identity());
  h.Finv.assign(n, Mat2::Identity());
  h.J.assign(n, 1.0);
  h.A.assign(n, Mat2::Identity());
  h.B.assign(n, Mat2::Identity());
  h.dtpsi.assign(n, Vec2::Zero());
  return h;
}

HanzawaField coefficient_fields(const ReferenceGeometry& g, const BoundaryDisplacement& bd,
                                const std::vector<FiberFrame>& frames) {
  check_displacement(g, bd.eta, g.L());
  HanzawaField h = HanzawaField::identity(frames.size());
  const bool zero_eta = bd.eta.is_zero();
  const bool zero_vel = bd.velocity.is_zero();
  for (size_t q = 0; q < frames.size(); ++q) {
    const FiberFrame& fr = frames[q];
    h.psi[q] = fr.x;
    if (!fr.in_tube) continue;
    const double c = g.cutoff().value(fr.s);
    if (!zero_vel) h.dtpsi[q] = bd.velocity(fr.y) * c * fr.n;
    if (zero_eta) continue;
    double e[2];
    bd.eta.eval(fr.y, 1, e);
    h.psi[q] = fr.x + e[0] * c * fr.n;
    const Mat2 F = frame_gradient(g, fr, e[0], e[1]);
    const double det = F.determinant();
    if (!(det > 0.0)) throw Error(ErrorCode::DegenerateJacobian, "det grad Psi <= 0");
    const Mat2 Fi = F.inverse();
    h.grad[q] = F;
    h.Finv[q] = Fi;
    h.J[q] = det;
    h.A[q] = det * Fi * Fi.transpose();
    h.B[q] = det * Fi.transpose();
  }
  return h;
}

HanzawaField coefficient_fields(const ReferenceGeometry& g, const BoundaryDisplacement& eta,
                                const std::vector<Vec2>& points) {
  return coefficient_fields(g, eta, fiber_frames(g, points));
}

// ---------------------------------------------------------------- monitors

DegeneracyReport degeneracy_check(const ReferenceGeometry& g, const PeriodicField& eta,
                                  const DegeneracyThresholds& th) {
  const int N = g.n_check(eta.max_mode());
  DegeneracyReport r;
  r.min_speed = 1e300;
  r.min_alignment = 1e300;
  double sup = 0.0;
  for (int j = 0; j < N; ++j) {
    const double y = double(j) / N;
    const CurveFrame f = g.frame(y);
    double e[2];
    eta.eval(y, 1, e);
    const Vec2 t = f.dp + e[1] * f.n + e[0] * f.dn;
    const double sp = t.norm();
    r.min_speed = std::min(r.min_speed, sp);
    r.min_alignment = std::min(r.min_alignment, sp > 0 ? f.n.dot(rot_cw(t) / sp) : -1.0);
    sup = std::max(sup, std::abs(e[0]));
  }
  r.displacement_margin = g.L() - sup;
  const double sp_th = th.speed_fraction * g.min_speed();
  const double disp_th = th.displacement_fraction * g.L();
  if (r.min_speed <= sp_th) {
    r.ok = false;
    r.reason = "speed";
    r.margin = r.min_speed - sp_th;
  } else if (r.min_alignment <= th.alignment) {
    r.ok = false;
    r.reason = "alignment";
    r.margin = r.min_alignment - th.alignment;
  } else if (r.displacement_margin <= disp_th) {
    r.ok = false;
    r.reason = "displacement";
    r.margin = r.displacement_margin - disp_th;
  } else {
    r.margin = std::min({r.min_speed - sp_th, r.min_alignment - th.alignment, r.displacement_margin - disp_th});
  }
  return r;
}

namespace {

double orient(const Vec2& a, const Vec2& b, const Vec2& c) {
  return (b.x() - a.x()) * (c.y() - a.y()) - (b.y() - a.y()) * (c.x() - a.x());
}

bool on_segment(const Vec2& a, const Vec2& b, const Vec2& p) {
  return std::min(a.x(), b.x()) <= p.x() && p.x() <= std::max(a.x(), b.x()) &&
         std::min(a.y(), b.y()) <= p.y() && p.y() <= std::max(a.y(), b.y());
}

bool segments_intersect(const Vec2& p1, const Vec2& p2, const Vec2& q1, const Vec2& q2) {
  const double d1 = orient(q1, q2, p1), d2 = orient(q1, q2, p2);
  const double d3 = orient(p1, p2, q1), d4 = orient(p1, p2, q2);
  if (((d1 > 0 && d2 < 0) || (d1 < 0 && d2 > 0)) && ((d3 > 0 && d4 < 0) || (d3 < 0 && d4 > 0)))
    return true;
  if (d1 == 0 && on_segment(q1, q2, p1)) return true;
  if (d2 == 0 && on_segment(q1, q2, p2)) return true;
  if (d3 == 0 && on_segment(p1, p2, q1)) return true;
  if (d4 == 0 && on_segment(p1, p2, q2)) return true;
  return false;
}

}  // namespace

bool polyline_self_intersects(const std::vector<Vec2>& P) {
  const int n = static_cast<int>(P.size());
  if (n < 4) return false;
  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  auto xmin = [&](int i) { return std::min(P[i].x(), P[(i + 1) % n].x()); };
  auto xmax = [&](int i) { return std::max(P[i].x(), P[(i + 1) % n].x()); };
  std::sort(order.begin(), order.end(), [&](int a, int b) { return xmin(a) < xmin(b); });
  std::vector<int> active;
  for (int i : order) {
    const double xl = xmin(i);
    active.erase(std::remove_if(active.begin(), active.end(), [&](int j) { return xmax(j) < xl; }),
                 active.end());
    for (int j : active) {
      const int d = std::abs(i - j);
      if (d <= 1 || d == n - 1) continue;
      if (segments_intersect(P[i], P[(i + 1) % n], P[j], P[(j + 1) % n])) return true;
    }
    active.push_back(i);
  }
  return false;
}

bool self_intersection_check(const ReferenceGeometry& g, const PeriodicField& eta) {
  const int N = g.n_check(eta.max_mode());
  std::vector<Vec2> P(N);
  for (int j = 0; j < N; ++j) P[j] = deformed_point(g, eta, double(j) / N);
  return polyline_self_intersects(P);
}

// ---------------------------------------------------------------- charts

namespace {

double barycentric(const std::vector<double>& x, const std::vector<double>& f, double z) {
  const int n = static_cast<int>(x.size()) - 1;
  double num = 0.0, den = 0.0;
  for (int j = 0; j <= n; ++j) {
    const double d = z - x[j];
    if (d == 0.0) return f[j];
    double w = (j % 2 == 0) ? 1.0 : -1.0;
    if (j == 0 || j == n) w *= 0.5;
    num += w * f[j] / d;
    den += w / d;
  }
  return num / den;
}

}  // namespace

void Chart::finalize() {
  const int n = static_cast<int>(nodes.size()) - 1;
  dvalues.assign(n + 1, 0.0);
  auto c = [n](int j) { return ((j == 0 || j == n) ? 2.0 : 1.0) * ((j % 2 == 0) ? 1.0 : -1.0); };
  for (int i = 0; i <= n; ++i) {
    double diag = 0.0, acc = 0.0;
    for (int j = 0; j <= n; ++j) {
      if (i == j) continue;
      const double Dij = (c(i) / c(j)) / (nodes[i] - nodes[j]);
      diag -= Dij;
      acc += Dij * values[j];
    }
    dvalues[i] = acc + diag * values[i];
  }
}

Chart Chart::from_function(const std::function<double(double)>& f, double r, int n) {
  Chart ch;
  ch.r = r;
  for (int j = 0; j <= n; ++j) {
    const double z = r * std::cos(kPi * j / n);
    ch.nodes.push_back(z);
    ch.values.push_back(f(z));
  }
  ch.finalize();
  return ch;
}

double Chart::operator()(double z) const { return barycentric(nodes, values, z); }
double Chart::derivative(double z) const { return barycentric(nodes, dvalues, z); }

Chart local_chart(const ReferenceGeometry& g, const PeriodicField& eta, double y0, double r, int n_nodes) {
  Chart ch;
  ch.y0 = y0;
  ch.r = r;
  ch.x0 = deformed_point(g, eta, y0);
  const Vec2 ne = deformed_normal(g, eta, y0);
  ch.Q << ne.y(), -ne.x(), ne.x(), ne.y();
  auto local = [&](double y) { return Vec2(ch.Q * (deformed_point(g, eta, y) - ch.x0)); };
  const double sgn = (ch.Q * deformed_tangent(g, eta, y0)).x() > 0 ? 1.0 : -1.0;
  const double step = 1.0 / (4.0 * g.n_check(eta.max_mode()));
  double ends[2];
  for (int side = 0; side < 2; ++side) {
    const double dir = side == 0 ? 1.0 : -1.0;
    double y = y0, prev = 0.0;
    for (;;) {
      y += dir * step;
      const double z = sgn * local(y).x();
      if (dir * (z - prev) <= 0.0) throw Error(ErrorCode::WindowTooLarge, "graph not monotone on window");
      prev = z;
      if (dir * z >= r) break;
      if (std::abs(y - y0) > 0.5) throw Error(ErrorCode::WindowTooLarge, "window exceeds curve");
    }
    ends[side] = y;
  }
  // sgn*z increases along [ends[1], ends[0]]
  for (int j = 0; j <= n_nodes; ++j) {
    const double z = r * std::cos(kPi * j / n_nodes);
    double lo = ends[1], hi = ends[0];
    for (int it = 0; it < 100 && hi - lo > 1e-16; ++it) {
      const double mid = 0.5 * (lo + hi);
      if (sgn * local(mid).x() < sgn * z) lo = mid;
      else hi = mid;
    }
    const double y = 0.5 * (lo + hi);
    ch.nodes.push_back(z);
    ch.values.push_back(local(y).y());
    ch.params.push_back(wrap01(y));
  }
  ch.finalize();
  return ch;
}

double chart_lipschitz(const Chart& c, int n_samples) {
  double m = 0.0;
  for (double d : c.dvalues) m = std::max(m, std::abs(d));
  for (int j = 0; j < n_samples; ++j) {
    const double z = -c.r + 2.0 * c.r * j / (n_samples - 1);
    m = std::max(m, std::abs(c.derivative(z)));
  }
  return m;
}

}  // namespace fsi
