#include "fsi/spaces.hpp"

#include <Eigen/SparseCholesky>
#include <cmath>
#include <random>

namespace fsi {

double fractional_norm(const PeriodicField& f, double s) {
  if (s < 0.0 || s > 8.0) throw Error(ErrorCode::ConfigError, "fractional order outside [0, 8]");
  double acc = 0.0;
  for (int k = -f.max_mode(); k <= f.max_mode(); ++k) {
    const double w = k == 0 ? 1.0 : 1.0 + std::pow(kTwoPi * std::abs(k), 2.0 * s);  // 0^0 := 0
    acc += w * std::norm(f.coeff(k));
  }
  return std::sqrt(acc);
}

double multiplier_norm_estimate(const PeriodicField& phi, double s, int K, const MultiplierOptions& opt) {
  if (s < 1.0) throw Error(ErrorCode::ConfigError, "multiplier norm needs s >= 1");
  const PeriodicField d = phi.differentiate(1);
  const int Kp = d.max_mode();
  const int nin = 2 * K + 1, nout = 2 * (K + Kp) + 1;
  auto weight = [s](int k) { return 1.0 + std::pow(kTwoPi * std::abs(k), 2.0 * (s - 1.0)); };
  Eigen::MatrixXcd S = Eigen::MatrixXcd::Zero(nout, nin);
  bool zero = true;
  for (int j = -(K + Kp); j <= K + Kp; ++j)
    for (int k = -K; k <= K; ++k) {
      const cplx c = d.coeff(j - k);
      if (c == cplx(0.0, 0.0)) continue;
      zero = false;
      S(j + K + Kp, k + K) = c * std::sqrt(weight(j) / weight(k));
    }
  if (zero) return 0.0;
  const Eigen::MatrixXcd G = S.adjoint() * S;

  std::mt19937 rng(opt.seed);
  std::normal_distribution<double> nd;
  Eigen::VectorXcd x(nin);
  for (int i = 0; i < nin; ++i) x(i) = cplx(nd(rng), nd(rng));
  x.normalize();
  double lam = 0.0, change = 1.0;
  for (int it = 0; it < opt.max_iter; ++it) {
    Eigen::VectorXcd y = G * x;
    const double nl = y.norm();
    if (nl == 0.0) return 0.0;
    change = std::abs(nl - lam) / nl;
    lam = nl;
    x = y / nl;
    if (change < opt.tol) return std::sqrt(lam);
  }
  if (change > opt.stall)
    throw Error(ErrorCode::PowerIterationStall, "power iteration did not settle");
  return std::sqrt(lam);
}

// ---------------------------------------------------------------- extensions

VectorXd extend_boundary_to_domain(const MixedSpace& sp, const PeriodicField& b) {
  const int nn = sp.n_nodes();
  VectorXd U = VectorXd::Zero(sp.n_vel());
  if (b.is_zero()) return U;
  // scalar Laplacian = component-0 block of the vector one
  std::vector<int> red(nn, -1);
  int ni = 0;
  for (int i = 0; i < nn; ++i)
    if (sp.node_boundary[i] < 0) red[i] = ni++;
  std::vector<Eigen::Triplet<double>> tII;
  Eigen::MatrixXd rhs = Eigen::MatrixXd::Zero(ni, 2);
  Eigen::MatrixXd ub = Eigen::MatrixXd::Zero(nn, 2);
  for (size_t k = 0; k < sp.boundary_nodes.size(); ++k) {
    const double y = sp.boundary_node_params[k];
    ub.row(sp.boundary_nodes[k]) = (b(y) * sp.geometry().normal(y)).transpose();
  }
  for (int col = 0; col < sp.laplace.outerSize(); col += 2)
    for (SpMat::InnerIterator it(sp.laplace, col); it; ++it) {
      if (it.row() % 2) continue;
      const int i = static_cast<int>(it.row()) / 2, j = col / 2;
      if (red[i] < 0) continue;
      if (red[j] >= 0)
        tII.emplace_back(red[i], red[j], it.value());
      else
        rhs.row(red[i]) -= it.value() * ub.row(j);
    }
  SpMat KII(ni, ni);
  KII.setFromTriplets(tII.begin(), tII.end());
  Eigen::SimplicialLDLT<SpMat> ldlt(KII);
  if (ldlt.info() != Eigen::Success) throw Error(ErrorCode::SolverFailure, "Laplace factorisation failed");
  const Eigen::MatrixXd uI = ldlt.solve(rhs);
  if (ldlt.info() != Eigen::Success) throw Error(ErrorCode::SolverFailure, "Laplace solve failed");
  const ReferenceGeometry& g = sp.geometry();
  for (int i = 0; i < nn; ++i) {
    Vec2 v;
    double c = 1.0;
    if (red[i] < 0) {
      v = ub.row(i).transpose();
    } else {
      v = uI.row(red[i]).transpose();
      const NearestPoint np = g.nearest(sp.nodes[i]);
      c = np.dist >= g.L() ? 0.0 : g.cutoff().value(np.s);
    }
    U(2 * i) = c * v.x();
    U(2 * i + 1) = c * v.y();
  }
  return U;
}

PushedField extend_F_eta(const MixedSpace& sp, const PeriodicField& eta, const PeriodicField& b) {
  PushedField out;
  out.reference = extend_boundary_to_domain(sp, b);
  const HanzawaField hf = coefficient_fields(sp.geometry(), BoundaryDisplacement(eta), sp.frames);
  out.points = hf.psi;
  std::vector<Mat2> grad;
  sp.velocity_at_qp(out.reference, out.values, grad);
  return out;
}

double F_eta_trace_residual(const MixedSpace& sp, const PeriodicField& eta, const PeriodicField& b,
                            int n_samples) {
  const ReferenceGeometry& g = sp.geometry();
  const VectorXd U = extend_boundary_to_domain(sp, b);
  double res = 0.0;
  for (int j = 0; j < n_samples; ++j) {
    const double y = (j + 0.5) / n_samples;
    const Vec2 xhat = deformed_point(g, eta, y);
    const Vec2 x = hanzawa_inverse(g, eta, xhat);
    const PointLocation loc = sp.locate(x);
    const Vec2 v = sp.eval_velocity(U, loc);
    res = std::max(res, (v - b(y) * g.normal(y)).norm());
  }
  return res;
}

// ---------------------------------------------------------------- half space

double mollifier(double u) {
  if (std::abs(u) >= 1.0) return 0.0;
  const double a = 1.0 - u * u;
  return 35.0 / 32.0 * a * a * a;
}

double mollifier_d(double u) {
  if (std::abs(u) >= 1.0) return 0.0;
  const double a = 1.0 - u * u;
  return -105.0 / 16.0 * u * a * a;
}

namespace {
const double kGL5x[5] = {-0.9061798459386640, -0.5384693101056831, 0.0, 0.5384693101056831, 0.9061798459386640};
const double kGL5w[5] = {0.2369268850561891, 0.4786286704993665, 0.5688888888888889, 0.4786286704993665,
                         0.2369268850561891};
}  // namespace

double HalfSpaceExtension::graph_at(double z) const {
  const double u = wrap01(z) * n_x;
  const int j = static_cast<int>(std::floor(u)) % n_x;
  const double f = u - std::floor(u);
  return (1.0 - f) * graph[j] + f * graph[(j + 1) % n_x];
}

namespace {

// int_{z-t}^{z+t} K((z-w)/t) g(w) dw / t, split at grid cells; g linear per cell.
template <class Kern, class Cell>
double cell_integral(int n_x, double z, double t, Kern kern, Cell cell_value) {
  const double a = z - t, b = z + t;
  const double h = 1.0 / n_x;
  double acc = 0.0;
  int c0 = static_cast<int>(std::floor(a / h));
  for (int c = c0; c * h < b; ++c) {
    const double lo = std::max(a, c * h), hi = std::min(b, (c + 1) * h);
    if (hi <= lo) continue;
    const double mid = 0.5 * (lo + hi), half = 0.5 * (hi - lo);
    for (int q = 0; q < 5; ++q) {
      const double w = mid + half * kGL5x[q];
      acc += kGL5w[q] * half * kern((z - w) / t) * cell_value(c, w);
    }
  }
  return acc / t;
}

}  // namespace

double HalfSpaceExtension::T(double z, double t) const {
  if (t <= 0.0) return graph_at(z);
  return cell_integral(n_x, z, t, mollifier, [&](int, double w) { return graph_at(w); });
}

double HalfSpaceExtension::dT_dz(double z, double t) const {
  auto slope = [&](int c, double) {
    const int j = ((c % n_x) + n_x) % n_x;
    return (graph[(j + 1) % n_x] - graph[j]) * n_x;
  };
  if (t <= 0.0) return slope(static_cast<int>(std::floor(z * n_x)), z);
  return cell_integral(n_x, z, t, mollifier, slope);
}

double HalfSpaceExtension::dT_dt(double z, double t) const {
  if (t <= 0.0) return 0.0;
  auto slope = [&](int c, double) {
    const int j = ((c % n_x) + n_x) % n_x;
    return (graph[(j + 1) % n_x] - graph[j]) * n_x;
  };
  return -cell_integral(n_x, z, t, [](double u) { return mollifier(u) * u; }, slope);
}

Vec2 HalfSpaceExtension::Phi(double z, double zn) const { return Vec2(z, zn + T(z, zn / N)); }

HalfSpaceExtension build_half_space_extension(const std::vector<double>& graph, double K_lip, double N, int n_zn) {
  HalfSpaceExtension H;
  H.graph = graph;
  H.n_x = static_cast<int>(graph.size());
  H.n_zn = n_zn;
  H.K_lip = K_lip;
  H.N = N;
  double sup_d = 0.0;
  for (int j = 0; j <= 100000; ++j) sup_d = std::max(sup_d, std::abs(mollifier_d(-1.0 + 2.0 * j / 100000)));
  H.c_zeta = sup_d + 1.0;
  H.precondition_met = N >= H.c_zeta * K_lip + 1.0;
  H.det.resize(n_zn, H.n_x);
  for (int i = 0; i < n_zn; ++i)
    for (int j = 0; j < H.n_x; ++j) H.det(i, j) = 1.0 + H.dT_dt(double(j) / H.n_x, H.z_n(i) / N) / N;
  H.det_min = H.det.minCoeff();
  H.det_max = H.det.maxCoeff();
  const double r = K_lip / N;
  if (H.det_min < 1.0 - r - 1e-12 || H.det_max > 1.0 + r + 1e-12 || H.det_min <= 0.0)
    throw Error(ErrorCode::ScaleTooSmall, "det grad Phi leaves [1 - K/N, 1 + K/N]");
  return H;
}

}  // namespace fsi
