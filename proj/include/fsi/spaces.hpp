#pragma once

#include <vector>

#include "fsi/fem.hpp"
#include "fsi/fourier.hpp"
#include "fsi/geometry.hpp"

namespace fsi {

/// (sum_k (1 + (2 pi |k|)^{2s}) |f_k|^2)^{1/2}, s <= 8.
double fractional_norm(const PeriodicField& f, double s);

struct MultiplierOptions {
  double tol = 1e-14;     // stop when the relative change drops below this
  double stall = 1e-8;    // PowerIterationStall if still above this after max_iter
  int max_iter = 10000;
  unsigned seed = 20240607;
};

/// Operator norm of v -> (d_y phi) v from W^{s-1,2}_K (modes |k| <= K) into W^{s-1,2},
/// by power iteration on the weighted normal operator.
double multiplier_norm_estimate(const PeriodicField& phi, double s, int K, const MultiplierOptions& opt = {});

/// F_Omega: componentwise discrete harmonic extension of (b n) o phi^{-1}, times chi(s).
VectorXd extend_boundary_to_domain(const MixedSpace& space, const PeriodicField& b);

struct PushedField {
  std::vector<Vec2> points;  // Psi_eta(x_q)
  std::vector<Vec2> values;  // (F_Omega b)(x_q)
  VectorXd reference;        // F_Omega b on the reference mesh
};

/// F_eta b realised on Omega_eta as F_Omega b composed with Psi_eta^{-1}.
PushedField extend_F_eta(const MixedSpace& space, const PeriodicField& eta, const PeriodicField& b);

/// max_y |(F_eta b)(phi_eta(y)) - b(y) n(y)| over n_samples parameters.
double F_eta_trace_residual(const MixedSpace& space, const PeriodicField& eta, const PeriodicField& b,
                            int n_samples = 512);

/// Compactly supported C^2 mollifier on (-1, 1) with unit mass.
double mollifier(double u);
double mollifier_d(double u);

/// Mollifier extension of a periodic Lipschitz graph into the half space and the map
/// Phi(z', z_n) = (z', z_n + (T phi)(z', z_n / N)).
struct HalfSpaceExtension {
  int n_x = 0, n_zn = 0;
  double K_lip = 0.0, N = 1.0;
  double c_zeta = 0.0;
  bool precondition_met = false;  // N >= c(zeta) K + 1
  std::vector<double> graph;      // phi at z' = j / n_x, periodic linear interpolant
  Eigen::MatrixXd det;            // det grad Phi at (z'_j, z_n_i), i = row
  double det_min = 0.0, det_max = 0.0;

  double graph_at(double z) const;
  double T(double z, double t) const;     // int zeta(u) phi(z - t u) du
  double dT_dt(double z, double t) const;
  double dT_dz(double z, double t) const;
  Vec2 Phi(double z, double zn) const;
  double z_n(int i) const { return double(i + 1) / n_zn; }
};

HalfSpaceExtension build_half_space_extension(const std::vector<double>& graph, double K_lip, double N,
                                              int n_zn = 64);

}  // namespace fsi
