#include "fsi/coupled.hpp"

#include <Eigen/SparseLU>
#include <cmath>

namespace fsi {

using Trip = Eigen::Triplet<double>;

CoupledState CoupledState::zero(const MixedSpace& s) {
  CoupledState z;
  z.u = VectorXd::Zero(s.n_vel());
  z.pi0 = VectorXd::Zero(s.n_pre());
  z.eta = VectorXd::Zero(s.n_beam());
  z.w = VectorXd::Zero(s.n_beam());
  z.w_prev = VectorXd::Zero(s.n_beam());
  return z;
}

double CoupledState::interface_defect(const MixedSpace& s) const {
  const VectorXd b = s.E * w;
  double d = 0.0;
  for (int i : s.boundary_nodes) d = std::max(d, (u.segment<2>(2 * i) - b.segment<2>(2 * i)).cwiseAbs().maxCoeff());
  return d;
}

SourceBundle SourceBundle::zero(const MixedSpace& s) {
  SourceBundle z;
  z.g = VectorXd::Zero(s.n_beam());
  return z;
}

VectorXd SourceBundle::load(const MixedSpace& s) const {
  if (bfh.empty() && H.empty()) return VectorXd::Zero(s.n_vel());
  if ((!bfh.empty() && static_cast<int>(bfh.size()) != s.n_qp()) || (!H.empty() && static_cast<int>(H.size()) != s.n_qp()))
    throw Error(ErrorCode::QuadratureMismatch, "source fields not at quadrature points");
  const std::vector<Vec2> f = bfh.empty() ? std::vector<Vec2>(s.n_qp(), Vec2::Zero()) : bfh;
  return load_from_qp(s, f, H.empty() ? nullptr : &H);
}

VectorXd SourceBundle::divergence(const MixedSpace& s) const {
  VectorXd r = h.empty() ? VectorXd::Zero(s.n_pre()) : divergence_rhs_from_qp(s, h);
  if (h_shift != 0.0) r += h_shift * s.p_weights;
  return r;
}

VectorXd SourceBundle::beam(const MixedSpace& s) const {
  if (g.size() == 0) return VectorXd::Zero(s.n_beam());
  if (g.size() != s.n_beam()) throw Error(ErrorCode::ConfigError, "beam load has wrong size");
  return s.beam_m0.cwiseProduct(g);
}

SourceBundle compatibility_project(const SourceBundle& src, const CoupledState& state, const AssembledOperators& ops) {
  const MixedSpace& s = *ops.space;
  const double flux = (ops.divergence * (s.E * state.w)).sum();
  const double total = src.divergence(s).sum();
  SourceBundle out = src;
  out.h_shift += (flux - total) / s.area;
  return out;
}

// ---------------------------------------------------------------- stepper

struct CoupledStepper::Factor {
  Eigen::SparseLU<SpMat> lu;
};

namespace {

void add_block(std::vector<Trip>& t, const SpMat& M, int r0, int c0, double scale, bool transpose = false) {
  for (int k = 0; k < M.outerSize(); ++k)
    for (SpMat::InnerIterator it(M, k); it; ++it) {
      const int r = static_cast<int>(transpose ? it.col() : it.row());
      const int c = static_cast<int>(transpose ? it.row() : it.col());
      t.emplace_back(r0 + r, c0 + c, scale * it.value());
    }
}

}  // namespace

CoupledStepper::CoupledStepper(const AssembledOperators& ops, const CoupledParams& par, double dt)
    : ops_(ops), par_(par), dt_(dt), lu_(std::make_unique<Factor>()) {
  if (!(dt > 0.0)) throw Error(ErrorCode::ConfigError, "time step must be positive");
  const MixedSpace& s = *ops.space;
  const int nx = s.n_int() + s.n_beam(), np = s.n_pre();
  const SpMat Mf = par.rho_f / dt * ops.mass_J + par.mu * ops.stiffness;
  S_ = SpMat(s.P.transpose() * Mf * s.P);
  beam_diag_ = par.rho_s / dt * s.beam_m0 + par.gamma * s.beam_m1 + dt * par.alpha * s.beam_m2;
  for (int m = 0; m < s.n_beam(); ++m) S_.coeffRef(s.n_int() + m, s.n_int() + m) += beam_diag_(m);
  C_ = ops.divergence * s.P;
  d1_ = C_.col(s.n_int()).sum();

  std::vector<Trip> t;
  t.reserve(S_.nonZeros() + 2 * C_.nonZeros());
  add_block(t, S_, 0, 0, 1.0);
  add_block(t, C_, 0, nx, -1.0, true);
  add_block(t, C_, nx, 0, -1.0);
  system_.resize(nx + np, nx + np);
  system_.setFromTriplets(t.begin(), t.end());
  lu_->lu.analyzePattern(system_);
  lu_->lu.factorize(system_);
  if (lu_->lu.info() != Eigen::Success) throw Error(ErrorCode::LinearSolveFailure, "coupled factorisation failed");
}

CoupledStepper::~CoupledStepper() = default;

VectorXd CoupledStepper::rhs_x(const CoupledState& st, const SourceBundle& src) const {
  const MixedSpace& s = *ops_.space;
  VectorXd r = s.P.transpose() * (par_.rho_f / dt_ * (ops_.mass_J * st.u) + src.load(s));
  r.tail(s.n_beam()) +=
      par_.rho_s / dt_ * s.beam_m0.cwiseProduct(st.w) - par_.alpha * s.beam_m2.cwiseProduct(st.eta) + src.beam(s);
  return r;
}

CoupledState CoupledStepper::step(const CoupledState& st, const SourceBundle& src) const {
  const MixedSpace& s = *ops_.space;
  const int nx = s.n_int() + s.n_beam(), np = s.n_pre();
  VectorXd rhs(nx + np);
  rhs.head(nx) = rhs_x(st, src);
  const VectorXd hvec = src.divergence(s);
  rhs.tail(np) = -hvec;
  const VectorXd sol = lu_->lu.solve(rhs);
  if (lu_->lu.info() != Eigen::Success || !sol.allFinite())
    throw Error(ErrorCode::LinearSolveFailure, "coupled solve failed");

  CoupledState nx_state;
  nx_state.t = st.t + dt_;
  nx_state.u = s.P * sol.head(nx);
  nx_state.w = sol.segment(s.n_int(), s.n_beam());
  nx_state.eta = st.eta + dt_ * nx_state.w;
  nx_state.w_prev = st.w;
  const VectorXd pi = sol.tail(np);

  const double defect = (ops_.divergence * nx_state.u).sum() - hvec.sum();
  if (std::abs(defect) > par_.compat_tol * std::max(1.0, hvec.cwiseAbs().sum()))
    throw Error(ErrorCode::CompatibilityViolation, "divergence data and boundary flux differ by " + std::to_string(defect));

  const PressureSplit ps = pressure_split(st, nx_state, pi, src);
  nx_state.pi0 = ps.pi0;
  nx_state.c_pi = ps.c_pi;
  nx_state.c_pi_residual = ps.residual;
  return nx_state;
}

PressureSplit CoupledStepper::pressure_split(const CoupledState& prev, const CoupledState& next, const VectorXd& pi,
                                             const SourceBundle& src) const {
  const MixedSpace& s = *ops_.space;
  PressureSplit out;
  const VectorXd wJ = divergence_rhs_from_qp(s, ops_.coeff.J);
  const double mean = wJ.dot(pi) / wJ.sum();
  out.pi0 = pi.array() - mean;

  out.denominator = d1_;
  if (!(d1_ > par_.denom_threshold * s.geometry().perimeter()))
    throw Error(ErrorCode::DegenerateDenominator, "flux weight of the constant beam mode is " + std::to_string(d1_));

  // beam mode 0 row with the pressure split into pi0 + c
  const VectorXd v1 = s.E.col(0);
  const VectorXd Dv1 = ops_.divergence * v1;
  const double t_inertia = par_.rho_f / dt_ * v1.dot(ops_.mass_J * (next.u - prev.u));
  const double t_visc = par_.mu * v1.dot(ops_.stiffness * next.u);
  const double t_load = v1.dot(src.load(s));
  const double t_pi0 = Dv1.dot(out.pi0);
  const double t_beam = par_.rho_s * s.beam_m0(0) * (next.w(0) - prev.w(0)) / dt_;
  const double t_g = src.beam(s)(0);
  const double rhs = t_inertia + t_visc - t_load - t_pi0 + t_beam - t_g;
  out.c_pi = mean;
  const double lhs = mean * d1_;
  const double scale = std::abs(t_inertia) + std::abs(t_visc) + std::abs(t_load) + std::abs(t_pi0) + std::abs(t_beam) +
                       std::abs(t_g) + std::abs(lhs);
  out.residual = std::abs(lhs - rhs) / (scale > 0 ? scale : 1.0);
  return out;
}

double CoupledStepper::momentum_residual(const CoupledState& prev, const CoupledState& next, const VectorXd& pi,
                                         const SourceBundle& src) const {
  const MixedSpace& s = *ops_.space;
  VectorXd x(s.n_int() + s.n_beam());
  for (int j = 0; j < s.n_int(); ++j) x(j) = next.u(s.interior_dofs[j]);
  x.tail(s.n_beam()) = next.w;
  const VectorXd r0 = rhs_x(prev, src);
  const VectorXd r = S_ * x - C_.transpose() * pi - r0;
  return r.norm() / std::max(1.0, r0.norm());
}

// ---------------------------------------------------------------- energy

double coupled_energy(const AssembledOperators& ops, const CoupledParams& par, const CoupledState& st) {
  const MixedSpace& s = *ops.space;
  return 0.5 * par.rho_f * st.u.dot(ops.mass_J * st.u) + 0.5 * par.rho_s * st.w.dot(s.beam_m0.cwiseProduct(st.w)) +
         0.5 * par.alpha * st.eta.dot(s.beam_m2.cwiseProduct(st.eta));
}

double coupled_dissipation(const AssembledOperators& ops, const CoupledParams& par, const CoupledState& st) {
  const MixedSpace& s = *ops.space;
  return par.mu * st.u.dot(ops.stiffness * st.u) + par.gamma * st.w.dot(s.beam_m1.cwiseProduct(st.w));
}

std::vector<EnergyRow> energy_report(const AssembledOperators& ops, const CoupledParams& par,
                                     const std::vector<CoupledState>& states, const std::vector<SourceBundle>& sources,
                                     double dt) {
  const MixedSpace& s = *ops.space;
  std::vector<EnergyRow> rows;
  if (states.size() < 2) return rows;
  EnergyRow r0;
  r0.t = states[0].t;
  r0.E = coupled_energy(ops, par, states[0]);
  r0.D = coupled_dissipation(ops, par, states[0]);
  r0.c_pi = states[0].c_pi;
  rows.push_back(r0);
  for (size_t n = 0; n + 1 < states.size(); ++n) {
    const CoupledState& a = states[n];
    const CoupledState& b = states[n + 1];
    const SourceBundle src = n < sources.size() ? sources[n] : SourceBundle();
    EnergyRow r;
    r.t = b.t;
    r.E = coupled_energy(ops, par, b);
    r.D = coupled_dissipation(ops, par, b);
    r.work_f = src.load(s).dot(b.u) + src.divergence(s).dot(b.pressure());
    r.work_g = src.beam(s).dot(b.w);
    r.residual = r.E - coupled_energy(ops, par, a) + dt * r.D - dt * (r.work_f + r.work_g);
    r.c_pi = b.c_pi;
    rows.push_back(r);
  }
  return rows;
}

}  // namespace fsi
