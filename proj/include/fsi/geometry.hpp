#pragma once

#include <functional>
#include <string>
#include <vector>

#include "fsi/common.hpp"
#include "fsi/fourier.hpp"

namespace fsi {

/// Cutoff chi(s) on the normal fiber: 1 for s >= -0.1 L, 0 for s <= -0.9 L, C^2 in between.
/// chi' is a plateau of height 1/(0.775 L) with cubic-smoothstep ramps, so sup|chi'| = 1.29/L.
class Cutoff {
 public:
  explicit Cutoff(double L = 1.0) : L_(L) {}
  double value(double s) const;
  double d1(double s) const;
  double d2(double s) const;
  double sup_d1() const;
  double L() const { return L_; }

 private:
  double L_;
};

struct CurveFrame {
  Vec2 p, dp, ddp;  // phi, phi', phi''
  Vec2 n, dn;       // outward normal and its y-derivative
};

struct NearestPoint {
  double y = 0.0;
  double s = 0.0;     // signed distance, positive outside
  double dist = 0.0;  // |s|
  bool ambiguous = false;
};

struct TubularCoords {
  double y;
  double s;
};

/// Closed counter-clockwise reference curve phi: [0,1) -> R^2 with tubular width L.
class ReferenceGeometry {
 public:
  ReferenceGeometry(PeriodicField x, PeriodicField y, double L, double alpha_fraction = 0.5,
                    bool validate = true);

  static ReferenceGeometry circle(double r, double L, Vec2 center = Vec2::Zero());
  static ReferenceGeometry ellipse(double a, double b, double L);

  CurveFrame frame(double y) const;
  Vec2 point(double y) const;
  Vec2 tangent(double y) const;  // phi'
  Vec2 normal(double y) const;

  NearestPoint nearest(const Vec2& x) const;

  double L() const { return L_; }
  double alpha() const { return alpha_; }
  const Cutoff& cutoff() const { return chi_; }
  int max_mode() const { return std::max(px_.max_mode(), py_.max_mode()); }
  const PeriodicField& x_field() const { return px_; }
  const PeriodicField& y_field() const { return py_; }
  double perimeter() const { return perimeter_; }
  double min_speed() const { return min_speed_; }

  /// Polyline resolution for self-intersection monitors, max(1024, 64 K).
  int n_check(int k_eta = 0) const;

  /// Checks that nearest-point projection is single valued on the interior half tube.
  /// Returns the first offending description or an empty string.
  std::string tube_defect(int n_y = 256, int n_s = 8) const;

 private:
  PeriodicField px_, py_;
  double L_;
  double alpha_;
  Cutoff chi_;
  double perimeter_ = 0.0;
  double min_speed_ = 0.0;
  std::vector<Vec2> coarse_;  // coarse samples for the projection seed
};

/// Beam state: displacement eta, velocity d_t eta, time.
struct BoundaryDisplacement {
  PeriodicField eta;
  PeriodicField velocity;
  double t = 0.0;

  BoundaryDisplacement() = default;
  explicit BoundaryDisplacement(PeriodicField e, PeriodicField v = PeriodicField(), double time = 0.0)
      : eta(std::move(e)), velocity(std::move(v)), t(time) {}

  int max_mode() const { return std::max(eta.max_mode(), velocity.max_mode()); }
};

double sup_norm(const ReferenceGeometry& g, const PeriodicField& eta);

TubularCoords tubular_coordinates(const ReferenceGeometry& g, const Vec2& x);

/// Deformed curve phi_eta = phi + eta n, its y-derivative and outward normal.
Vec2 deformed_point(const ReferenceGeometry& g, const PeriodicField& eta, double y);
Vec2 deformed_tangent(const ReferenceGeometry& g, const PeriodicField& eta, double y);
Vec2 deformed_normal(const ReferenceGeometry& g, const PeriodicField& eta, double y);

Vec2 hanzawa(const ReferenceGeometry& g, const PeriodicField& eta, const Vec2& x);
Mat2 hanzawa_gradient(const ReferenceGeometry& g, const PeriodicField& eta, const Vec2& x);

struct InverseOptions {
  double tol = 1e-12;
  int max_iter = 60;
};
Vec2 hanzawa_inverse(const ReferenceGeometry& g, const PeriodicField& eta, const Vec2& xhat,
                     const InverseOptions& opt = {});

/// Per-point data of the reference tube that does not depend on eta.
struct FiberFrame {
  Vec2 x;
  bool in_tube = false;
  double y = 0.0, s = 0.0;
  Vec2 n = Vec2::Zero(), dn = Vec2::Zero();
  Mat2 Minv = Mat2::Identity();  // inverse of [phi' + s n', n]
};

std::vector<FiberFrame> fiber_frames(const ReferenceGeometry& g, const std::vector<Vec2>& points);

struct HanzawaField {
  std::vector<Vec2> psi;
  std::vector<Mat2> grad;   // F = grad Psi, F_ij = d_j Psi_i
  std::vector<Mat2> Finv;
  std::vector<double> J;
  std::vector<Mat2> A;      // J F^{-1} F^{-T}
  std::vector<Mat2> B;      // J F^{-T}
  std::vector<Vec2> dtpsi;  // d_t Psi from the beam velocity (zero if not requested)

  size_t size() const { return J.size(); }
  static HanzawaField identity(size_t n);
};

HanzawaField coefficient_fields(const ReferenceGeometry& g, const BoundaryDisplacement& eta,
                                const std::vector<FiberFrame>& frames);
HanzawaField coefficient_fields(const ReferenceGeometry& g, const BoundaryDisplacement& eta,
                                const std::vector<Vec2>& points);

struct DegeneracyThresholds {
  double speed_fraction = 0.05;      // min |d_y phi_eta| relative to min |d_y phi|
  double alignment = 0.05;           // min n . n_eta
  double displacement_fraction = 0.05;  // (L - ||eta||) relative to L
};

struct DegeneracyReport {
  bool ok = true;
  std::string reason;  // "speed", "alignment", "displacement" or empty
  double margin = 0.0; // value of the violated quantity minus its threshold (negative on violation)
  double min_speed = 0.0;
  double min_alignment = 0.0;
  double displacement_margin = 0.0;
};

DegeneracyReport degeneracy_check(const ReferenceGeometry& g, const PeriodicField& eta,
                                  const DegeneracyThresholds& th = {});

bool polyline_self_intersects(const std::vector<Vec2>& closed_polyline);
bool self_intersection_check(const ReferenceGeometry& g, const PeriodicField& eta);

/// Boundary as a graph over the rotated tangent line at x0 = phi_eta(y0).
class Chart {
 public:
  Chart() = default;
  /// Synthetic chart of a given graph on [-r, r].
  static Chart from_function(const std::function<double(double)>& f, double r, int n = 64);

  double operator()(double z) const;
  double derivative(double z) const;

  Mat2 Q = Mat2::Identity();
  Vec2 x0 = Vec2::Zero();
  double y0 = 0.0;
  double z0 = 0.0;
  double r = 0.0;
  std::vector<double> nodes;    // Chebyshev-Lobatto points on [-r, r]
  std::vector<double> values;   // graph values at nodes
  std::vector<double> dvalues;  // spectral derivative at nodes
  std::vector<double> params;   // curve parameter of each node (empty for synthetic)

  void finalize();  // fills dvalues from values
};

Chart local_chart(const ReferenceGeometry& g, const PeriodicField& eta, double y0, double r,
                  int n_nodes = 64);
double chart_lipschitz(const Chart& c, int n_samples = 2001);

}  // namespace fsi
