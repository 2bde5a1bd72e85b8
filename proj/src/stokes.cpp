#include "fsi/stokes.hpp"

#include <Eigen/SparseLU>
#include <cmath>

namespace fsi {

using Trip = Eigen::Triplet<double>;

namespace {

Eigen::Matrix<double, 3, 2> p1_gradients(const Eigen::Matrix<double, 6, 2>& dN) {
  Eigen::Matrix<double, 3, 2> dL;
  dL.row(0) = dN.row(0) + 0.5 * (dN.row(3) + dN.row(5));
  dL.row(1) = dN.row(1) + 0.5 * (dN.row(3) + dN.row(4));
  dL.row(2) = dN.row(2) + 0.5 * (dN.row(4) + dN.row(5));
  return dL;
}

void add_block(std::vector<Trip>& t, const SpMat& M, int r0, int c0, double scale, bool transpose = false) {
  for (int k = 0; k < M.outerSize(); ++k)
    for (SpMat::InnerIterator it(M, k); it; ++it) {
      const int r = static_cast<int>(transpose ? it.col() : it.row());
      const int c = static_cast<int>(transpose ? it.row() : it.col());
      t.emplace_back(r0 + r, c0 + c, scale * it.value());
    }
}

SpMat restriction(const MixedSpace& s) {
  SpMat R(s.n_vel(), s.n_int());
  std::vector<Trip> t;
  for (int j = 0; j < s.n_int(); ++j) t.emplace_back(s.interior_dofs[j], j, 1.0);
  R.setFromTriplets(t.begin(), t.end());
  return R;
}

}  // namespace

double boundary_flux(const MixedSpace& s, const VectorXd& u) {
  static const double gx[5] = {0.0469100770306680, 0.2307653449471585, 0.5, 0.7692346550528415, 0.9530899229693320};
  static const double gw[5] = {0.1184634425280945, 0.2393143352496832, 0.2844444444444444, 0.2393143352496832,
                               0.1184634425280945};
  double flux = 0.0;
  for (const auto& el : s.elements)
    for (int k = 0; k < 3; ++k) {
      const int a = el[k], b = el[(k + 1) % 3], m = el[3 + k];
      if (s.node_boundary[m] < 0) continue;
      const Vec2 xa = s.nodes[a], xb = s.nodes[b], xm = s.nodes[m];
      const Vec2 ua(u(2 * a), u(2 * a + 1)), ub(u(2 * b), u(2 * b + 1)), um(u(2 * m), u(2 * m + 1));
      for (int q = 0; q < 5; ++q) {
        const double t = gx[q];
        const double Na = (1 - t) * (1 - 2 * t), Nb = t * (2 * t - 1), Nm = 4 * t * (1 - t);
        const double dNa = 4 * t - 3, dNb = 4 * t - 1, dNm = 4 - 8 * t;
        const Vec2 dx = dNa * xa + dNb * xb + dNm * xm;
        const Vec2 uv = Na * ua + Nb * ub + Nm * um;
        flux += gw[q] * uv.dot(rot_cw(dx));
      }
    }
  return flux;
}

StokesSolution solve_steady(const AssembledOperators& ops, const VectorXd& F, const VectorXd& u_B_in,
                            const VectorXd& hvec_in, const StokesOptions& opt) {
  const MixedSpace& s = *ops.space;
  const int ni = s.n_int(), np = s.n_pre(), n = ni + np + 1;
  VectorXd u_B = VectorXd::Zero(s.n_vel());
  if (u_B_in.size()) {
    if (u_B_in.size() != s.n_vel()) throw Error(ErrorCode::ConfigError, "boundary data has wrong size");
    for (int i : s.boundary_nodes) u_B.segment<2>(2 * i) = u_B_in.segment<2>(2 * i);
  }
  const VectorXd hvec = hvec_in.size() ? hvec_in : VectorXd::Zero(np);

  const VectorXd DuB = ops.divergence * u_B;
  const double defect = DuB.sum() - hvec.sum();
  const double scale = std::max(1.0, DuB.cwiseAbs().sum() + hvec.cwiseAbs().sum());
  if (std::abs(defect) > opt.compat_tol * scale)
    throw Error(ErrorCode::IncompatibleBoundaryData,
                "boundary flux minus prescribed divergence is " + std::to_string(defect));

  const SpMat R = restriction(s);
  const SpMat KII = SpMat(R.transpose() * ops.stiffness * R);
  const SpMat DI = ops.divergence * R;
  const VectorXd w = divergence_rhs_from_qp(s, ops.coeff.J);

  std::vector<Trip> t;
  t.reserve(KII.nonZeros() + 2 * DI.nonZeros() + 2 * np);
  add_block(t, KII, 0, 0, opt.mu);
  add_block(t, DI, 0, ni, -1.0, true);
  add_block(t, DI, ni, 0, -1.0);
  for (int i = 0; i < np; ++i) {
    t.emplace_back(ni + i, n - 1, w(i));
    t.emplace_back(n - 1, ni + i, w(i));
  }
  SpMat A(n, n);
  A.setFromTriplets(t.begin(), t.end());

  VectorXd rhs(n);
  rhs.head(ni) = R.transpose() * (F - opt.mu * (ops.stiffness * u_B));
  rhs.segment(ni, np) = DuB - hvec;
  rhs(n - 1) = 0.0;

  Eigen::SparseLU<SpMat> lu;
  lu.analyzePattern(A);
  lu.factorize(A);
  if (lu.info() != Eigen::Success) throw Error(ErrorCode::LinearSolveFailure, "Stokes factorisation failed");
  const VectorXd x = lu.solve(rhs);
  if (lu.info() != Eigen::Success || !x.allFinite())
    throw Error(ErrorCode::LinearSolveFailure, "Stokes solve failed");

  StokesSolution sol;
  sol.u = u_B + R * x.head(ni);
  sol.p = x.segment(ni, np);
  sol.lambda = x(n - 1);
  const double bn = rhs.norm();
  sol.residual = (A * x - rhs).norm() / (bn > 0 ? bn : 1.0);
  sol.div_residual = (ops.divergence * sol.u - hvec).norm();
  return sol;
}

VectorXd bogovskii_lift(const AssembledOperators& ops, const std::vector<double>& h_qp, double tol) {
  const MixedSpace& s = *ops.space;
  if (static_cast<int>(h_qp.size()) != s.n_qp()) throw Error(ErrorCode::QuadratureMismatch, "h not at quadrature points");
  double mean = 0.0, mag = 0.0;
  for (int q = 0; q < s.n_qp(); ++q) {
    mean += s.qp_w[q] * h_qp[q];
    mag += s.qp_w[q] * std::abs(h_qp[q]);
  }
  if (std::abs(mean) > tol * std::max(1.0, mag)) throw Error(ErrorCode::IncompatibleMean, "int h = " + std::to_string(mean));
  const VectorXd hvec = divergence_rhs_from_qp(s, h_qp);
  if (hvec.cwiseAbs().maxCoeff() == 0.0) return VectorXd::Zero(s.n_vel());
  StokesOptions opt;
  opt.compat_tol = std::max(tol, 1e-10);
  return solve_steady(ops, VectorXd::Zero(s.n_vel()), VectorXd(), hvec, opt).u;
}

VectorXd pressure_poisson(const MixedSpace& s, const std::vector<Vec2>& g) {
  if (static_cast<int>(g.size()) != s.n_qp()) throw Error(ErrorCode::QuadratureMismatch, "g not at quadrature points");
  const int np = s.n_pre();
  VectorXd rhs = VectorXd::Zero(np + 1);
  for (int e = 0; e < s.n_elements(); ++e) {
    const auto& el = s.elements[e];
    for (int k = 0; k < 7; ++k) {
      const int q = 7 * e + k;
      const auto dL = p1_gradients(s.qp_dN[q]);
      for (int l = 0; l < 3; ++l) rhs(el[l]) += s.qp_w[q] * dL.row(l).dot(g[q].transpose());
    }
  }
  if (rhs.cwiseAbs().maxCoeff() == 0.0) return VectorXd::Zero(np);
  std::vector<Trip> t;
  add_block(t, s.p_laplace, 0, 0, 1.0);
  for (int i = 0; i < np; ++i) {
    t.emplace_back(i, np, s.p_weights(i));
    t.emplace_back(np, i, s.p_weights(i));
  }
  SpMat A(np + 1, np + 1);
  A.setFromTriplets(t.begin(), t.end());
  Eigen::SparseLU<SpMat> lu(A);
  if (lu.info() != Eigen::Success) throw Error(ErrorCode::LinearSolveFailure, "pressure Poisson factorisation");
  const VectorXd x = lu.solve(rhs);
  if (lu.info() != Eigen::Success || !x.allFinite()) throw Error(ErrorCode::LinearSolveFailure, "pressure Poisson solve");
  return x.head(np);
}

double regularity_ratio(const MixedSpace& s, const StokesSolution& sol, const std::vector<Vec2>& f) {
  double fl2 = 0.0;
  for (int q = 0; q < s.n_qp(); ++q) fl2 += s.qp_w[q] * f[q].squaredNorm();
  if (!(fl2 > 0.0)) throw Error(ErrorCode::ZeroLoad, "regularity ratio needs a nonzero load");
  const VectorXd& u = sol.u;
  const double l2 = u.dot(s.mass * u), h1 = l2 + u.dot(s.laplace * u);
  const double h2 = h1 + u.dot(s.hessian_gram * u);
  const double ph1 = sol.p.dot(s.p_mass * sol.p) + sol.p.dot(s.p_laplace * sol.p);
  return (std::sqrt(h1) + std::sqrt(h2) + std::sqrt(ph1)) / std::sqrt(fl2);
}

ErrorNorms stokes_errors(const MixedSpace& s, const StokesSolution& sol, const std::function<Vec2(const Vec2&)>& u,
                         const std::function<Mat2(const Vec2&)>& grad_u, const std::function<double(const Vec2&)>& p) {
  std::vector<Vec2> uh;
  std::vector<Mat2> gh;
  s.velocity_at_qp(sol.u, uh, gh);
  const std::vector<double> ph = s.pressure_at_qp(sol.p);
  double shift = 0.0;
  for (int q = 0; q < s.n_qp(); ++q) shift += s.qp_w[q] * (ph[q] - p(s.qp_x[q]));
  shift /= s.area;
  ErrorNorms e;
  for (int q = 0; q < s.n_qp(); ++q) {
    const Vec2& x = s.qp_x[q];
    const double w = s.qp_w[q];
    e.u_l2 += w * (uh[q] - u(x)).squaredNorm();
    e.u_h1 += w * (gh[q] - grad_u(x)).squaredNorm();
    const double dp = ph[q] - shift - p(x);
    e.p_l2 += w * dp * dp;
  }
  e.u_l2 = std::sqrt(e.u_l2);
  e.u_h1 = std::sqrt(e.u_h1);
  e.p_l2 = std::sqrt(e.p_l2);
  return e;
}

}  // namespace fsi
