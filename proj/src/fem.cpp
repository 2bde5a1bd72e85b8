#include "fsi/fem.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SparseCholesky>
#include <Eigen/SparseLU>
#include <cmath>
#include <map>

namespace fsi {

using Trip = Eigen::Triplet<double>;

const std::array<Vec2, 7>& TriangleRule::points() {
  static const std::array<Vec2, 7> p = [] {
    const double a1 = 0.059715871789770, b1 = 0.470142064105115;
    const double a2 = 0.797426985353087, b2 = 0.101286507323456;
    return std::array<Vec2, 7>{Vec2(1.0 / 3, 1.0 / 3), Vec2(b1, b1), Vec2(a1, b1), Vec2(b1, a1),
                               Vec2(b2, b2), Vec2(a2, b2), Vec2(b2, a2)};
  }();
  return p;
}

const std::array<double, 7>& TriangleRule::weights() {
  static const std::array<double, 7> w = [] {
    const double w0 = 0.225, w1 = 0.132394152788506, w2 = 0.125939180544827;
    return std::array<double, 7>{0.5 * w0, 0.5 * w1, 0.5 * w1, 0.5 * w1, 0.5 * w2, 0.5 * w2, 0.5 * w2};
  }();
  return w;
}

void p2_shape(const Vec2& xi, double N[6], double dN[6][2]) {
  const double s = xi.x(), t = xi.y(), l = 1.0 - s - t;
  N[0] = l * (2 * l - 1);
  N[1] = s * (2 * s - 1);
  N[2] = t * (2 * t - 1);
  N[3] = 4 * l * s;
  N[4] = 4 * s * t;
  N[5] = 4 * t * l;
  dN[0][0] = -(4 * l - 1), dN[0][1] = -(4 * l - 1);
  dN[1][0] = 4 * s - 1, dN[1][1] = 0.0;
  dN[2][0] = 0.0, dN[2][1] = 4 * t - 1;
  dN[3][0] = 4 * (l - s), dN[3][1] = -4 * s;
  dN[4][0] = 4 * t, dN[4][1] = 4 * s;
  dN[5][0] = -4 * t, dN[5][1] = 4 * (l - t);
}

const std::array<Mat2, 6>& p2_hessians() {
  static const std::array<Mat2, 6> H = [] {
    std::array<Mat2, 6> h;
    h[0] << 4, 4, 4, 4;
    h[1] << 4, 0, 0, 0;
    h[2] << 0, 0, 0, 4;
    h[3] << -8, -4, -4, 0;
    h[4] << 0, 4, 4, 0;
    h[5] << 0, -4, -4, -8;
    return h;
  }();
  return H;
}

double beam_basis(int m, double y, int deriv) {
  if (m == 0) return deriv == 0 ? 1.0 : 0.0;
  const int k = (m + 1) / 2;
  const double w = kTwoPi * k;
  // d^j/dy^j of cos/sin is a phase shift by j*pi/2
  const double ph = w * y + deriv * 0.5 * kPi;
  const double amp = std::pow(w, deriv);
  return (m % 2 == 1) ? amp * std::cos(ph) : amp * std::sin(ph);
}

// ---------------------------------------------------------------- space

MixedSpace::MixedSpace(const ReferenceGeometry& g, const Mesh& m, int beam_modes)
    : geom_(&g), mesh_(m), K_(beam_modes) {
  if (4 * K_ > static_cast<int>(m.boundary_vertices.size()))
    throw Error(ErrorCode::ConfigError, "beam modes exceed boundary vertex count / 4");
  build_nodes();
  build_quadrature();
  build_interface();
  build_grams();
  build_locator();
}

void MixedSpace::build_nodes() {
  const int nv = n_vertices();
  const int nb = static_cast<int>(mesh_.boundary_vertices.size());
  nodes = mesh_.vertices;
  node_boundary.assign(nv, -1);
  for (int i = 0; i < nb; ++i) {
    node_boundary[mesh_.boundary_vertices[i]] = static_cast<int>(boundary_nodes.size());
    boundary_nodes.push_back(mesh_.boundary_vertices[i]);
    boundary_node_params.push_back(mesh_.boundary_params[i]);
  }
  std::map<std::pair<int, int>, int> edge_node;
  elements.resize(mesh_.triangles.size());
  curved.assign(mesh_.triangles.size(), false);
  static const int ep[3][2] = {{0, 1}, {1, 2}, {2, 0}};
  for (size_t e = 0; e < mesh_.triangles.size(); ++e) {
    const auto& t = mesh_.triangles[e];
    for (int k = 0; k < 3; ++k) elements[e][k] = t[k];
    for (int k = 0; k < 3; ++k) {
      const int a = t[ep[k][0]], b = t[ep[k][1]];
      const auto key = std::make_pair(std::min(a, b), std::max(a, b));
      const int ia = mesh_.boundary_index[a], ib = mesh_.boundary_index[b];
      const bool bnd = ia >= 0 && ib >= 0 && ((ia + 1) % nb == ib || (ib + 1) % nb == ia);
      if (bnd) curved[e] = true;
      auto it = edge_node.find(key);
      if (it != edge_node.end()) {
        elements[e][3 + k] = it->second;
        continue;
      }
      const int id = static_cast<int>(nodes.size());
      if (bnd) {
        const int first = ((ia + 1) % nb == ib) ? ia : ib;
        const double ys = mesh_.boundary_params[first];
        double ye = mesh_.boundary_params[(first + 1) % nb];
        if (ye <= ys) ye += 1.0;
        const double ym = wrap01(0.5 * (ys + ye));
        nodes.push_back(geom_->point(ym));
        node_boundary.push_back(static_cast<int>(boundary_nodes.size()));
        boundary_nodes.push_back(id);
        boundary_node_params.push_back(ym);
      } else {
        nodes.push_back(0.5 * (mesh_.vertices[a] + mesh_.vertices[b]));
        node_boundary.push_back(-1);
      }
      edge_node.emplace(key, id);
      elements[e][3 + k] = id;
    }
  }
}

void MixedSpace::build_quadrature() {
  const auto& xi = TriangleRule::points();
  const auto& wr = TriangleRule::weights();
  double dNr[7][6][2];
  for (int k = 0; k < 7; ++k) {
    double N[6];
    p2_shape(xi[k], N, dNr[k]);
    for (int i = 0; i < 6; ++i) ref_N[k][i] = N[i];
    ref_L[k] = {1.0 - xi[k].x() - xi[k].y(), xi[k].x(), xi[k].y()};
  }
  const int ne = n_elements();
  qp_x.resize(7 * ne);
  qp_w.resize(7 * ne);
  qp_dN.resize(7 * ne);
  for (int e = 0; e < ne; ++e) {
    for (int k = 0; k < 7; ++k) {
      Mat2 G = Mat2::Zero();
      Vec2 x = Vec2::Zero();
      for (int i = 0; i < 6; ++i) {
        const Vec2& X = nodes[elements[e][i]];
        x += ref_N[k][i] * X;
        G.col(0) += dNr[k][i][0] * X;
        G.col(1) += dNr[k][i][1] * X;
      }
      const double det = G.determinant();
      if (!(det > 0.0)) throw Error(ErrorCode::MeshingFailure, "inverted isoparametric element");
      const Mat2 GinvT = G.inverse().transpose();
      const int q = 7 * e + k;
      qp_x[q] = x;
      qp_w[q] = wr[k] * det;
      for (int i = 0; i < 6; ++i) qp_dN[q].row(i) = (GinvT * Vec2(dNr[k][i][0], dNr[k][i][1])).transpose();
    }
  }
  frames = fiber_frames(*geom_, qp_x);
}

void MixedSpace::build_interface() {
  const int nb = n_beam();
  std::vector<Trip> t;
  for (size_t b = 0; b < boundary_nodes.size(); ++b) {
    const double y = boundary_node_params[b];
    const Vec2 n = geom_->normal(y);
    for (int m = 0; m < nb; ++m) {
      const double v = beam_basis(m, y);
      for (int c = 0; c < 2; ++c) t.emplace_back(2 * boundary_nodes[b] + c, m, v * n(c));
    }
  }
  E.resize(n_vel(), nb);
  E.setFromTriplets(t.begin(), t.end());

  reduced_index.assign(n_vel(), -1);
  interior_dofs.clear();
  for (int i = 0; i < n_nodes(); ++i) {
    if (node_boundary[i] >= 0) continue;
    for (int c = 0; c < 2; ++c) {
      reduced_index[2 * i + c] = static_cast<int>(interior_dofs.size());
      interior_dofs.push_back(2 * i + c);
    }
  }
  std::vector<Trip> pt;
  for (size_t j = 0; j < interior_dofs.size(); ++j) pt.emplace_back(interior_dofs[j], static_cast<int>(j), 1.0);
  for (int k = 0; k < E.outerSize(); ++k)
    for (SpMat::InnerIterator it(E, k); it; ++it) pt.emplace_back(it.row(), n_int() + it.col(), it.value());
  P.resize(n_vel(), n_int() + nb);
  P.setFromTriplets(pt.begin(), pt.end());

  beam_m0.resize(nb);
  beam_m1.resize(nb);
  beam_m2.resize(nb);
  beam_m3.resize(nb);
  for (int m = 0; m < nb; ++m) {
    const double w = kTwoPi * ((m + 1) / 2);
    const double base = m == 0 ? 1.0 : 0.5;
    beam_m0(m) = base;
    beam_m1(m) = m == 0 ? 0.0 : base * w * w;
    beam_m2(m) = m == 0 ? 0.0 : base * std::pow(w, 4);
    beam_m3(m) = m == 0 ? 0.0 : base * std::pow(w, 6);
  }
}

std::array<Mat2, 6> MixedSpace::shape_hessians(int e, const Vec2& xi) const {
  double N[6], dN[6][2];
  p2_shape(xi, N, dN);
  const auto& H = p2_hessians();
  Mat2 G = Mat2::Zero(), X2[2] = {Mat2::Zero(), Mat2::Zero()};
  for (int i = 0; i < 6; ++i) {
    const Vec2& X = nodes[elements[e][i]];
    G.col(0) += dN[i][0] * X;
    G.col(1) += dN[i][1] * X;
    X2[0] += X.x() * H[i];
    X2[1] += X.y() * H[i];
  }
  const Mat2 Gi = G.inverse();
  std::array<Mat2, 6> out;
  for (int i = 0; i < 6; ++i) {
    const Vec2 g = Gi.transpose() * Vec2(dN[i][0], dN[i][1]);
    out[i] = Gi.transpose() * (H[i] - g.x() * X2[0] - g.y() * X2[1]) * Gi;
  }
  return out;
}

void MixedSpace::build_grams() {
  std::vector<Trip> tm, tl, th, tpm, tpl;
  p_weights = VectorXd::Zero(n_pre());
  area = 0.0;
  const auto& xi = TriangleRule::points();
  for (int e = 0; e < n_elements(); ++e) {
    const auto& el = elements[e];
    // affine P1 gradients through the isoparametric map at each qp
    for (int k = 0; k < 7; ++k) {
      const int q = 7 * e + k;
      const double w = qp_w[q];
      area += w;
      const auto Hs = shape_hessians(e, xi[k]);
      for (int i = 0; i < 6; ++i)
        for (int j = 0; j < 6; ++j) {
          const double m = w * ref_N[k][i] * ref_N[k][j];
          const double l = w * qp_dN[q].row(i).dot(qp_dN[q].row(j));
          const double h = w * (Hs[i].cwiseProduct(Hs[j])).sum();
          for (int c = 0; c < 2; ++c) {
            tm.emplace_back(2 * el[i] + c, 2 * el[j] + c, m);
            tl.emplace_back(2 * el[i] + c, 2 * el[j] + c, l);
            th.emplace_back(2 * el[i] + c, 2 * el[j] + c, h);
          }
        }
      // P1 gradient: combination of the P2 gradients (lambda_0 = N0 + (N3 + N5)/2, ...)
      Eigen::Matrix<double, 3, 2> dL;
      dL.row(0) = qp_dN[q].row(0) + 0.5 * (qp_dN[q].row(3) + qp_dN[q].row(5));
      dL.row(1) = qp_dN[q].row(1) + 0.5 * (qp_dN[q].row(3) + qp_dN[q].row(4));
      dL.row(2) = qp_dN[q].row(2) + 0.5 * (qp_dN[q].row(4) + qp_dN[q].row(5));
      for (int i = 0; i < 3; ++i) {
        p_weights(el[i]) += w * ref_L[k][i];
        for (int j = 0; j < 3; ++j) {
          tpm.emplace_back(el[i], el[j], w * ref_L[k][i] * ref_L[k][j]);
          tpl.emplace_back(el[i], el[j], w * dL.row(i).dot(dL.row(j)));
        }
      }
    }
  }
  auto build = [](SpMat& M, int r, int c, std::vector<Trip>& t) {
    M.resize(r, c);
    M.setFromTriplets(t.begin(), t.end());
  };
  build(mass, n_vel(), n_vel(), tm);
  build(laplace, n_vel(), n_vel(), tl);
  build(hessian_gram, n_vel(), n_vel(), th);
  build(p_mass, n_pre(), n_pre(), tpm);
  build(p_laplace, n_pre(), n_pre(), tpl);
}

void MixedSpace::velocity_at_qp(const VectorXd& U, std::vector<Vec2>& u, std::vector<Mat2>& grad) const {
  u.assign(n_qp(), Vec2::Zero());
  grad.assign(n_qp(), Mat2::Zero());
  for (int e = 0; e < n_elements(); ++e) {
    const auto& el = elements[e];
    for (int k = 0; k < 7; ++k) {
      const int q = 7 * e + k;
      for (int i = 0; i < 6; ++i) {
        const Vec2 Ui(U(2 * el[i]), U(2 * el[i] + 1));
        u[q] += ref_N[k][i] * Ui;
        grad[q] += Ui * qp_dN[q].row(i);
      }
    }
  }
}

std::vector<double> MixedSpace::pressure_at_qp(const VectorXd& p) const {
  std::vector<double> out(n_qp(), 0.0);
  for (int e = 0; e < n_elements(); ++e)
    for (int k = 0; k < 7; ++k)
      for (int i = 0; i < 3; ++i) out[7 * e + k] += ref_L[k][i] * p(elements[e][i]);
  return out;
}

VectorXd MixedSpace::interpolate(const std::function<Vec2(const Vec2&)>& f) const {
  VectorXd U(n_vel());
  for (int i = 0; i < n_nodes(); ++i) {
    const Vec2 v = f(nodes[i]);
    U(2 * i) = v.x();
    U(2 * i + 1) = v.y();
  }
  return U;
}

VectorXd MixedSpace::interpolate_pressure(const std::function<double(const Vec2&)>& f) const {
  VectorXd p(n_pre());
  for (int i = 0; i < n_pre(); ++i) p(i) = f(nodes[i]);
  return p;
}

Vec2 MixedSpace::map_point(int e, const Vec2& xi) const {
  double N[6], dN[6][2];
  p2_shape(xi, N, dN);
  Vec2 x = Vec2::Zero();
  for (int i = 0; i < 6; ++i) x += N[i] * nodes[elements[e][i]];
  return x;
}

void MixedSpace::build_locator() {
  box_lo_ = nodes[0];
  box_hi_ = nodes[0];
  for (const auto& p : nodes) box_lo_ = box_lo_.cwiseMin(p), box_hi_ = box_hi_.cwiseMax(p);
  const int ne = n_elements();
  const int nside = std::max(1, static_cast<int>(std::sqrt(double(ne) / 2.0)));
  nbx_ = nby_ = nside;
  box_lo_ -= Vec2::Constant(1e-9);
  box_hi_ += Vec2::Constant(1e-9);
  buckets_.assign(nbx_ * nby_, {});
  const Vec2 ext = box_hi_ - box_lo_;
  for (int e = 0; e < ne; ++e) {
    Vec2 lo = nodes[elements[e][0]], hi = lo;
    for (int i = 1; i < 6; ++i) lo = lo.cwiseMin(nodes[elements[e][i]]), hi = hi.cwiseMax(nodes[elements[e][i]]);
    const double pad = 0.1 * (hi - lo).maxCoeff();
    lo -= Vec2::Constant(pad);
    hi += Vec2::Constant(pad);
    const int i0 = std::clamp(int((lo.x() - box_lo_.x()) / ext.x() * nbx_), 0, nbx_ - 1);
    const int i1 = std::clamp(int((hi.x() - box_lo_.x()) / ext.x() * nbx_), 0, nbx_ - 1);
    const int j0 = std::clamp(int((lo.y() - box_lo_.y()) / ext.y() * nby_), 0, nby_ - 1);
    const int j1 = std::clamp(int((hi.y() - box_lo_.y()) / ext.y() * nby_), 0, nby_ - 1);
    for (int i = i0; i <= i1; ++i)
      for (int j = j0; j <= j1; ++j) buckets_[i * nby_ + j].push_back(e);
  }
}

PointLocation MixedSpace::locate(const Vec2& x) const {
  const Vec2 ext = box_hi_ - box_lo_;
  const int bi = std::clamp(int((x.x() - box_lo_.x()) / ext.x() * nbx_), 0, nbx_ - 1);
  const int bj = std::clamp(int((x.y() - box_lo_.y()) / ext.y() * nby_), 0, nby_ - 1);
  PointLocation best;
  best.violation = 1e300;
  auto try_element = [&](int e) {
    Vec2 xi(1.0 / 3, 1.0 / 3);
    for (int it = 0; it < 30; ++it) {
      double N[6], dN[6][2];
      p2_shape(xi, N, dN);
      Vec2 r = -x;
      Mat2 G = Mat2::Zero();
      for (int i = 0; i < 6; ++i) {
        const Vec2& X = nodes[elements[e][i]];
        r += N[i] * X;
        G.col(0) += dN[i][0] * X;
        G.col(1) += dN[i][1] * X;
      }
      const Vec2 d = G.lu().solve(r);
      xi -= d;
      if (d.norm() < 1e-15) break;
    }
    const double v = std::max({0.0, -xi.x(), -xi.y(), xi.x() + xi.y() - 1.0});
    if (v < best.violation) best = {e, xi, v};
  };
  for (int ring = 0; ring <= std::max(nbx_, nby_); ++ring) {
    for (int i = bi - ring; i <= bi + ring; ++i)
      for (int j = bj - ring; j <= bj + ring; ++j) {
        if (i < 0 || j < 0 || i >= nbx_ || j >= nby_) continue;
        if (std::max(std::abs(i - bi), std::abs(j - bj)) != ring) continue;
        for (int e : buckets_[i * nby_ + j]) try_element(e);
      }
    if (best.violation <= 1e-12 || (ring >= 1 && best.element >= 0)) break;
  }
  return best;
}

Vec2 MixedSpace::eval_velocity(const VectorXd& U, const PointLocation& loc) const {
  double N[6], dN[6][2];
  p2_shape(loc.xi, N, dN);
  Vec2 u = Vec2::Zero();
  for (int i = 0; i < 6; ++i) {
    const int n = elements[loc.element][i];
    u += N[i] * Vec2(U(2 * n), U(2 * n + 1));
  }
  return u;
}

// ---------------------------------------------------------------- assembly

AssembledOperators assemble(const MixedSpace& s, const HanzawaField& c, const BoundaryDisplacement& eta0) {
  if (static_cast<int>(c.size()) != s.n_qp())
    throw Error(ErrorCode::QuadratureMismatch, "coefficient field not sampled at this space's quadrature points");
  AssembledOperators ops;
  ops.space = &s;
  ops.eta0 = eta0;
  ops.coeff = c;
  std::vector<Trip> tm, tk, td;
  tm.reserve(s.n_qp() * 72);
  tk.reserve(s.n_qp() * 72);
  td.reserve(s.n_qp() * 36);
  for (int e = 0; e < s.n_elements(); ++e) {
    const auto& el = s.elements[e];
    for (int k = 0; k < 7; ++k) {
      const int q = 7 * e + k;
      const double w = s.qp_w[q];
      const auto& dN = s.qp_dN[q];
      const Mat2& A = c.A[q];
      const Mat2& B = c.B[q];
      for (int i = 0; i < 6; ++i) {
        const Vec2 Adi = A * dN.row(i).transpose();
        for (int j = 0; j < 6; ++j) {
          const double m = w * c.J[q] * s.ref_N[k][i] * s.ref_N[k][j];
          const double st = w * dN.row(j).dot(Adi.transpose());
          for (int cc = 0; cc < 2; ++cc) {
            tm.emplace_back(2 * el[i] + cc, 2 * el[j] + cc, m);
            tk.emplace_back(2 * el[i] + cc, 2 * el[j] + cc, st);
          }
        }
        const Vec2 Bd = B * dN.row(i).transpose();  // (B : grad(N_i e_c)) = (B dN_i)_c
        for (int l = 0; l < 3; ++l)
          for (int cc = 0; cc < 2; ++cc) td.emplace_back(el[l], 2 * el[i] + cc, w * s.ref_L[k][l] * Bd(cc));
      }
    }
  }
  ops.mass_J.resize(s.n_vel(), s.n_vel());
  ops.mass_J.setFromTriplets(tm.begin(), tm.end());
  ops.stiffness.resize(s.n_vel(), s.n_vel());
  ops.stiffness.setFromTriplets(tk.begin(), tk.end());
  ops.divergence.resize(s.n_pre(), s.n_vel());
  ops.divergence.setFromTriplets(td.begin(), td.end());
  return ops;
}

AssembledOperators assemble(const MixedSpace& s, const BoundaryDisplacement& eta0) {
  return assemble(s, coefficient_fields(s.geometry(), eta0, s.frames), eta0);
}

VectorXd load_from_qp(const MixedSpace& s, const std::vector<Vec2>& f, const std::vector<Mat2>* H) {
  VectorXd F = VectorXd::Zero(s.n_vel());
  for (int e = 0; e < s.n_elements(); ++e) {
    const auto& el = s.elements[e];
    for (int k = 0; k < 7; ++k) {
      const int q = 7 * e + k;
      const double w = s.qp_w[q];
      for (int i = 0; i < 6; ++i) {
        Vec2 v = s.ref_N[k][i] * f[q];
        if (H) v += (*H)[q] * s.qp_dN[q].row(i).transpose();
        F(2 * el[i]) += w * v.x();
        F(2 * el[i] + 1) += w * v.y();
      }
    }
  }
  return F;
}

VectorXd divergence_rhs_from_qp(const MixedSpace& s, const std::vector<double>& h) {
  VectorXd r = VectorXd::Zero(s.n_pre());
  for (int e = 0; e < s.n_elements(); ++e)
    for (int k = 0; k < 7; ++k)
      for (int l = 0; l < 3; ++l) r(s.elements[e][l]) += s.qp_w[7 * e + k] * s.ref_L[k][l] * h[7 * e + k];
  return r;
}

double piola_residual(const AssembledOperators& ops) {
  const MixedSpace& s = *ops.space;
  const VectorXd r_full = ops.divergence.transpose() * VectorXd::Ones(s.n_pre());
  const int ni = s.n_int();
  VectorXd r(ni);
  for (int j = 0; j < ni; ++j) r(j) = r_full(s.interior_dofs[j]);
  std::vector<Trip> t;
  for (int k = 0; k < s.laplace.outerSize(); ++k)
    for (SpMat::InnerIterator it(s.laplace, k); it; ++it) {
      const int a = s.reduced_index[it.row()], b = s.reduced_index[it.col()];
      if (a >= 0 && b >= 0) t.emplace_back(a, b, it.value());
    }
  SpMat K(ni, ni);
  K.setFromTriplets(t.begin(), t.end());
  Eigen::SimplicialLDLT<SpMat> ldlt(K);
  if (ldlt.info() != Eigen::Success) throw Error(ErrorCode::LinearSolveFailure, "Piola residual: Laplace factorisation");
  return std::sqrt(std::max(0.0, r.dot(ldlt.solve(r))));
}

double inf_sup_constant(const MixedSpace& s) {
  const AssembledOperators ops = assemble(s, HanzawaField::identity(s.n_qp()));
  const int ni = s.n_int();
  SpMat R(s.n_vel(), ni);
  {
    std::vector<Trip> t;
    for (int j = 0; j < ni; ++j) t.emplace_back(s.interior_dofs[j], j, 1.0);
    R.setFromTriplets(t.begin(), t.end());
  }
  SpMat S = R.transpose() * s.laplace * R;
  SpMat D = ops.divergence * R;
  Eigen::SparseLU<SpMat> lu(S);
  if (lu.info() != Eigen::Success) throw Error(ErrorCode::LinearSolveFailure, "inf-sup: stiffness factorisation");
  Eigen::MatrixXd DT = Eigen::MatrixXd(D.transpose());
  Eigen::MatrixXd X = lu.solve(DT);
  Eigen::MatrixXd Schur = Eigen::MatrixXd(D) * X;
  Schur = 0.5 * (Schur + Schur.transpose());
  Eigen::MatrixXd M = Eigen::MatrixXd(s.p_mass);
  Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> es(Schur, M, Eigen::EigenvaluesOnly);
  const auto& ev = es.eigenvalues();
  // ev(0) is the constant-pressure mode
  return std::sqrt(std::max(0.0, ev(1)));
}

}  // namespace fsi
