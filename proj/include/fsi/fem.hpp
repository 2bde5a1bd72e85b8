#pragma once

#include <Eigen/Sparse>
#include <array>
#include <functional>
#include <vector>

#include "fsi/geometry.hpp"
#include "fsi/mesh.hpp"

namespace fsi {

using SpMat = Eigen::SparseMatrix<double>;
using Eigen::VectorXd;

/// 7-point degree-5 rule on the reference triangle (0,0),(1,0),(0,1); weights sum to 1/2.
struct TriangleRule {
  static constexpr int n = 7;
  static const std::array<Vec2, 7>& points();
  static const std::array<double, 7>& weights();
};

/// P2 shape functions on the reference triangle. Local nodes: 3 vertices, then
/// midpoints of edges (0,1), (1,2), (2,0).
void p2_shape(const Vec2& xi, double N[6], double dN[6][2]);
/// Constant reference Hessians of the P2 shapes, d2N[i] = [[N_xx, N_xy], [N_xy, N_yy]].
const std::array<Mat2, 6>& p2_hessians();

/// Beam basis on omega: index 0 -> 1, 2k-1 -> cos(2 pi k y), 2k -> sin(2 pi k y).
double beam_basis(int m, double y, int deriv = 0);

struct PointLocation {
  int element = -1;
  Vec2 xi = Vec2::Zero();
  double violation = 0.0;  // 0 when inside the (curved) element
};

/// Isoparametric Taylor-Hood P2/P1 space on the reference mesh plus the beam Fourier space.
class MixedSpace {
 public:
  MixedSpace(const ReferenceGeometry& g, const Mesh& m, int beam_modes);

  const ReferenceGeometry& geometry() const { return *geom_; }
  const Mesh& mesh() const { return mesh_; }

  int n_elements() const { return static_cast<int>(elements.size()); }
  int n_nodes() const { return static_cast<int>(nodes.size()); }
  int n_vertices() const { return static_cast<int>(mesh_.vertices.size()); }
  int n_vel() const { return 2 * n_nodes(); }
  int n_pre() const { return n_vertices(); }
  int beam_modes() const { return K_; }
  int n_beam() const { return 2 * K_ + 1; }
  int n_int() const { return static_cast<int>(interior_dofs.size()); }
  int n_qp() const { return n_elements() * TriangleRule::n; }

  std::vector<std::array<int, 6>> elements;
  std::vector<Vec2> nodes;
  std::vector<int> node_boundary;             // index into boundary_nodes or -1
  std::vector<int> boundary_nodes;            // P2 nodes on the curve
  std::vector<double> boundary_node_params;   // their parameters y
  std::vector<bool> curved;                   // element has a curved edge

  // quadrature cache, element-major: q = 7 e + k
  std::vector<Vec2> qp_x;
  std::vector<double> qp_w;                          // includes |det G|
  std::vector<Eigen::Matrix<double, 6, 2>> qp_dN;    // physical gradients
  std::array<std::array<double, 6>, 7> ref_N{};      // P2 values
  std::array<std::array<double, 3>, 7> ref_L{};      // P1 values
  std::vector<FiberFrame> frames;                    // tube data at qp_x

  // interface and prolongation
  SpMat E;                       // n_vel x n_beam: boundary velocity = (w n)(y)
  std::vector<int> interior_dofs;
  std::vector<int> reduced_index;  // full velocity dof -> interior index or -1
  SpMat P;                         // n_vel x (n_int + n_beam)

  // eta-independent Gram matrices
  SpMat mass, laplace, hessian_gram;  // velocity: int u.v, int grad u : grad v, broken int D2u : D2v
  SpMat p_mass, p_laplace;
  VectorXd p_weights;                 // int lambda_q
  double area = 0.0;

  // beam diagonal multipliers: int b_m^2, int (b_m')^2, int (b_m'')^2, int (b_m''')^2
  VectorXd beam_m0, beam_m1, beam_m2, beam_m3;

  /// Velocity field from the interior/beam split (P applied).
  VectorXd prolong(const VectorXd& x) const { return P * x; }
  VectorXd interface_trace(const VectorXd& w) const { return E * w; }

  void velocity_at_qp(const VectorXd& U, std::vector<Vec2>& u, std::vector<Mat2>& grad) const;
  std::vector<double> pressure_at_qp(const VectorXd& p) const;

  /// Nodal interpolation of a vector field (exact P2 dofs at nodes).
  VectorXd interpolate(const std::function<Vec2(const Vec2&)>& f) const;
  VectorXd interpolate_pressure(const std::function<double(const Vec2&)>& f) const;

  PointLocation locate(const Vec2& x) const;
  Vec2 eval_velocity(const VectorXd& U, const PointLocation& loc) const;
  Vec2 map_point(int e, const Vec2& xi) const;

  /// Physical Hessians of the 6 element shapes at a reference point.
  std::array<Mat2, 6> shape_hessians(int e, const Vec2& xi) const;

 private:
  const ReferenceGeometry* geom_;
  Mesh mesh_;
  int K_;
  // bucket grid for point location
  Vec2 box_lo_, box_hi_;
  int nbx_ = 1, nby_ = 1;
  std::vector<std::vector<int>> buckets_;

  void build_nodes();
  void build_quadrature();
  void build_interface();
  void build_grams();
  void build_locator();
};

/// Variable-coefficient blocks frozen at eta0.
struct AssembledOperators {
  const MixedSpace* space = nullptr;
  BoundaryDisplacement eta0;
  HanzawaField coeff;
  SpMat mass_J;      // int J u.v
  SpMat stiffness;   // int grad u A : grad v
  SpMat divergence;  // (q, u) -> int q B : grad u
  /// Interface load rows: the beam-mode test functions lifted to the fluid, int ... : grad(E e_m).
  const SpMat& interface_rows() const { return space->E; }
};

AssembledOperators assemble(const MixedSpace& space, const HanzawaField& coeff,
                            const BoundaryDisplacement& eta0 = {});
AssembledOperators assemble(const MixedSpace& space, const BoundaryDisplacement& eta0);

/// Load vector int f . v from values at quadrature points.
VectorXd load_from_qp(const MixedSpace& s, const std::vector<Vec2>& f, const std::vector<Mat2>* H = nullptr);
/// Pressure-space vector int q h from values at quadrature points.
VectorXd divergence_rhs_from_qp(const MixedSpace& s, const std::vector<double>& h);

/// H^{-1} norm of v -> int B : grad v over zero-trace velocities: the discrete defect of
/// the Piola identity div B = 0 at quadrature order.
double piola_residual(const AssembledOperators& ops);

/// Smallest nonzero generalised eigenvalue sqrt of D S^{-1} D^T against the pressure mass.
double inf_sup_constant(const MixedSpace& s);

}  // namespace fsi
