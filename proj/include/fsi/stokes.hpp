#pragma once

#include <functional>
#include <vector>

#include "fsi/fem.hpp"

namespace fsi {

struct StokesSolution {
  VectorXd u;   // full P2 velocity (boundary values included)
  VectorXd p;   // P1 pressure, int p = 0 (J-weighted)
  double lambda = 0.0;         // multiplier of the mean constraint: D u - h = lambda w
  double residual = 0.0;       // relative residual of the saddle-point system
  double div_residual = 0.0;   // || D u - h ||_2
};

struct StokesOptions {
  double mu = 1.0;
  double compat_tol = 1e-10;  // on |1^T (D u_B - h)| relative to max(1, |D| |u_B|)
};

/// mu int grad u A : grad v - int p B : grad v = <F, v>,  int q B : grad u = <hvec, q>,
/// u = u_B on the boundary dofs (interior entries of u_B are ignored). Pressure gauge int J p = 0.
StokesSolution solve_steady(const AssembledOperators& ops, const VectorXd& F, const VectorXd& u_B,
                            const VectorXd& hvec = VectorXd(), const StokesOptions& opt = {});

/// Zero-trace v with B : grad v = h in the P1-weak sense; h sampled at quadrature points.
VectorXd bogovskii_lift(const AssembledOperators& ops, const std::vector<double>& h_qp, double tol = 1e-10);

/// P1 h with int grad h . grad q = int g . grad q for all q, int h = 0.
VectorXd pressure_poisson(const MixedSpace& space, const std::vector<Vec2>& g_qp);

/// (|u|_{H1} + |u|_{H2, broken} + |p|_{H1}) / |f|_{L2}, all full norms on the reference mesh.
double regularity_ratio(const MixedSpace& space, const StokesSolution& sol, const std::vector<Vec2>& f_qp);

/// Boundary flux of a P2 field along the isoparametric boundary edges, int u . n ds.
double boundary_flux(const MixedSpace& space, const VectorXd& u);

/// Error norms of a discrete solution against exact fields on the reference mesh.
struct ErrorNorms {
  double u_l2 = 0.0, u_h1 = 0.0, p_l2 = 0.0;  // h1 = seminorm
};
ErrorNorms stokes_errors(const MixedSpace& space, const StokesSolution& sol,
                         const std::function<Vec2(const Vec2&)>& u, const std::function<Mat2(const Vec2&)>& grad_u,
                         const std::function<double(const Vec2&)>& p);

}  // namespace fsi
