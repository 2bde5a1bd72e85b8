#include "fsi/bench.hpp"

#include <atomic>
#include <exception>
#include <mutex>
#include <thread>

#include "fsi/spaces.hpp"
#include "fsi/stokes.hpp"

namespace fsi {

void parallel_for(int n, int threads, const std::function<void(int)>& f) {
  threads = std::clamp(threads, 1, std::max(1, n));
  if (threads == 1) {
    for (int i = 0; i < n; ++i) f(i);
    return;
  }
  std::atomic<int> next{0};
  std::exception_ptr err;
  std::mutex mu;
  std::vector<std::thread> pool;
  for (int t = 0; t < threads; ++t)
    pool.emplace_back([&] {
      for (int i; (i = next++) < n;) {
        try {
          f(i);
        } catch (...) {
          std::lock_guard<std::mutex> lk(mu);
          if (!err) err = std::current_exception();
        }
      }
    });
  for (auto& th : pool) th.join();
  if (err) std::rethrow_exception(err);
}

namespace {

Vec2 mms_u(const Vec2& x) {
  const double a = 1.0 - x.squaredNorm();
  return Vec2(-4.0 * x.y() * a, 4.0 * x.x() * a);
}
Mat2 mms_grad(const Vec2& x) {
  const double a = 1.0 - x.squaredNorm();
  Mat2 G;
  G << 8.0 * x.x() * x.y(), -4.0 * a + 8.0 * x.y() * x.y(), 4.0 * a - 8.0 * x.x() * x.x(), -8.0 * x.x() * x.y();
  return G;
}
Vec2 mms_f(const Vec2& x) { return Vec2(-31.0 * x.y(), 33.0 * x.x()); }
double mms_p(const Vec2& x) { return x.x() * x.y(); }

Vec2 family_load(const Vec2& x) { return Vec2(1.0 + x.y(), std::sin(2.0 * x.x())); }

PeriodicField family_eta(int m, double amplitude, double exponent) {
  std::vector<double> a(m, 0.0);
  a[m - 1] = amplitude / std::pow(m, exponent);
  return PeriodicField::from_cos_sin(0.0, a, std::vector<double>(m, 0.0));
}

/// Regularity ratio of the boundary family member m on a given space.
double family_ratio(const MixedSpace& s, int m, double amplitude, double exponent) {
  const PeriodicField eta = family_eta(m, amplitude, exponent);
  const HanzawaField c = coefficient_fields(s.geometry(), BoundaryDisplacement(eta), s.frames);
  const AssembledOperators ops = assemble(s, c, BoundaryDisplacement(eta));
  std::vector<Vec2> f(s.n_qp());
  for (int q = 0; q < s.n_qp(); ++q) f[q] = c.J[q] * family_load(c.psi[q]);
  const StokesSolution sol = solve_steady(ops, load_from_qp(s, f), VectorXd());
  return regularity_ratio(s, sol, f);
}

void check_modes(const std::vector<int>& modes) {
  if (modes.empty()) throw Error(ErrorCode::ConfigError, "family needs at least one mode");
  for (int m : modes)
    if (m < 1) throw Error(ErrorCode::ConfigError, "family modes must be positive");
}

void check_meshes(const std::vector<double>& hs) {
  if (hs.empty()) throw Error(ErrorCode::ConfigError, "mesh list is empty");
  for (double h : hs)
    if (!(h > 0.0)) throw Error(ErrorCode::ConfigError, "mesh sizes must be positive");
}

}  // namespace

std::vector<StokesBenchRow> stokes_bench(const StokesBenchSpec& spec, int threads) {
  check_meshes(spec.meshes);
  const ReferenceGeometry g = make_geometry(spec.geometry);
  const int nh = static_cast<int>(spec.meshes.size());
  if (spec.family == "manufactured") {
    if (spec.geometry.type != "circle" || std::abs(spec.geometry.radius - 1.0) > 1e-14)
      throw Error(ErrorCode::ConfigError, "the manufactured family needs the unit circle");
    std::vector<StokesBenchRow> rows(nh);
    parallel_for(nh, threads, [&](int i) {
      const MixedSpace s(g, build_mesh(g, spec.meshes[i]), 4);
      const AssembledOperators ops = assemble(s, BoundaryDisplacement());
      std::vector<Vec2> f(s.n_qp());
      for (int q = 0; q < s.n_qp(); ++q) f[q] = mms_f(s.qp_x[q]);
      const StokesSolution sol = solve_steady(ops, load_from_qp(s, f), VectorXd());
      const ErrorNorms e = stokes_errors(s, sol, mms_u, mms_grad, mms_p);
      rows[i] = {0.0, spec.meshes[i], regularity_ratio(s, sol, f), e.u_h1, e.p_l2};
    });
    return rows;
  }
  if (spec.family != "boundary") throw Error(ErrorCode::ConfigError, "unknown family '" + spec.family + "'");
  check_modes(spec.modes);
  const int nm = static_cast<int>(spec.modes.size());
  std::vector<StokesBenchRow> rows(nm * nh);
  parallel_for(nh, threads, [&](int i) {
    const MixedSpace s(g, build_mesh(g, spec.meshes[i]), 4);
    for (int j = 0; j < nm; ++j) {
      StokesBenchRow& r = rows[j * nh + i];
      r.family_param = spec.modes[j];
      r.h = spec.meshes[i];
      r.ratio = family_ratio(s, spec.modes[j], spec.amplitude, spec.exponent);
    }
  });
  return rows;
}

std::vector<RegularityRow> regularity_sweep(const RegularitySpec& spec, int threads) {
  check_meshes(spec.meshes);
  check_modes(spec.modes);
  if (spec.families.empty()) throw Error(ErrorCode::ConfigError, "no families given");
  const ReferenceGeometry g = make_geometry(spec.geometry);
  const int nh = static_cast<int>(spec.meshes.size()), nm = static_cast<int>(spec.modes.size());
  const int nf = static_cast<int>(spec.families.size());
  std::vector<RegularityRow> rows(nf * nm * nh);
  parallel_for(nh, threads, [&](int i) {
    const MixedSpace s(g, build_mesh(g, spec.meshes[i]), 4);
    for (int f = 0; f < nf; ++f)
      for (int j = 0; j < nm; ++j) {
        RegularityRow& r = rows[(f * nm + j) * nh + i];
        r.family = spec.families[f].name;
        r.exponent = spec.families[f].exponent;
        r.m = spec.modes[j];
        r.h = spec.meshes[i];
        r.ratio = family_ratio(s, r.m, spec.amplitude, r.exponent);
      }
  });
  return rows;
}

std::vector<ChartRow> charts(const ChartSpec& spec) {
  const ReferenceGeometry g = make_geometry(spec.geometry);
  const PeriodicField eta = spec.eta.field(spec.beam_modes);
  if (sup_norm(g, eta) >= g.alpha()) throw Error(ErrorCode::ConfigError, "eta exceeds alpha");
  if (!(spec.radius > 0.0)) throw Error(ErrorCode::ConfigError, "chart radius must be positive");
  std::vector<ChartRow> rows;
  for (double y : spec.points) {
    const Chart c = local_chart(g, eta, wrap01(y), spec.radius);
    ChartRow r;
    r.y = wrap01(y);
    r.x0 = c.x0;
    for (double v : c.values) r.graph_max = std::max(r.graph_max, std::abs(v));
    r.lipschitz = chart_lipschitz(c);
    rows.push_back(r);
  }
  return rows;
}

std::vector<NormRow> norms(const NormSpec& spec) {
  if (spec.modes < 1) throw Error(ErrorCode::ConfigError, "modes must be positive");
  const PeriodicField f = spec.field.field(spec.modes);
  std::vector<NormRow> rows;
  for (double s : spec.s) {
    NormRow r;
    r.s = s;
    r.norm = fractional_norm(f, s);
    if (spec.multiplier_K > 0 && s >= 1.0) r.multiplier = multiplier_norm_estimate(f, s, spec.multiplier_K);
    rows.push_back(r);
  }
  return rows;
}

}  // namespace fsi
