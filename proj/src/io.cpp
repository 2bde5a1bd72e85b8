#include "fsi/io.hpp"

#include <filesystem>
#include <fstream>
#include <iomanip>
#include <set>
#include <sstream>

#ifndef FSI_VERSION
#define FSI_VERSION "unknown"
#endif

namespace fsi {

namespace fs = std::filesystem;

const char* code_version() { return FSI_VERSION; }

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::ConfigError, "cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Json read_json_file(const std::string& path) {
  const std::string text = read_file(path);
  try {
    return Json::parse(text);
  } catch (const Json::parse_error& e) {
    std::string msg = e.what();
    std::replace(msg.begin(), msg.end(), '\n', ' ');
    throw Error(ErrorCode::ConfigError, "'" + path + "' is not valid JSON: " + msg);
  }
}

uint64_t fnv1a64(const std::string& bytes) {
  uint64_t h = 14695981039346656037ull;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

std::string hex64(uint64_t v) {
  std::ostringstream ss;
  ss << std::hex << std::setw(16) << std::setfill('0') << v;
  return ss.str();
}

// ---------------------------------------------------------------- schema

namespace {

[[noreturn]] void schema_error(const std::string& msg) { throw Error(ErrorCode::ConfigError, msg); }

/// Object reader that remembers visited keys and rejects the rest in done().
class Obj {
 public:
  Obj(const Json& j, std::string path) : j_(j), path_(std::move(path)) {
    if (!j.is_object()) schema_error("'" + label() + "' must be an object");
  }

  bool has(const std::string& k) {
    seen_.insert(k);
    return j_.contains(k);
  }
  std::string key(const std::string& k) const { return path_.empty() ? k : path_ + "." + k; }

  const Json& at(const std::string& k) {
    if (!has(k)) schema_error("missing required key '" + key(k) + "'");
    return j_.at(k);
  }

  double num(const std::string& k, double def) { return has(k) ? as_num(j_.at(k), key(k)) : def; }
  double req_num(const std::string& k) { return as_num(at(k), key(k)); }
  int integer(const std::string& k, int def) { return has(k) ? as_int(j_.at(k), key(k)) : def; }
  bool boolean(const std::string& k, bool def) {
    if (!has(k)) return def;
    if (!j_.at(k).is_boolean()) schema_error("'" + key(k) + "' must be true or false");
    return j_.at(k).get<bool>();
  }
  std::string str(const std::string& k, const std::string& def) {
    if (!has(k)) return def;
    if (!j_.at(k).is_string()) schema_error("'" + key(k) + "' must be a string");
    return j_.at(k).get<std::string>();
  }
  std::vector<double> nums(const std::string& k, std::vector<double> def) {
    if (!has(k)) return def;
    const Json& a = j_.at(k);
    if (!a.is_array()) schema_error("'" + key(k) + "' must be an array of numbers");
    std::vector<double> v;
    for (size_t i = 0; i < a.size(); ++i) v.push_back(as_num(a[i], key(k) + "[" + std::to_string(i) + "]"));
    return v;
  }
  std::vector<int> ints(const std::string& k, std::vector<int> def) {
    if (!has(k)) return def;
    const Json& a = j_.at(k);
    if (!a.is_array()) schema_error("'" + key(k) + "' must be an array of integers");
    std::vector<int> v;
    for (size_t i = 0; i < a.size(); ++i) v.push_back(as_int(a[i], key(k) + "[" + std::to_string(i) + "]"));
    return v;
  }

  void done() const {
    for (auto it = j_.begin(); it != j_.end(); ++it)
      if (!seen_.count(it.key())) schema_error("unknown key '" + key(it.key()) + "'");
  }

  static double as_num(const Json& v, const std::string& k) {
    if (!v.is_number()) schema_error("'" + k + "' must be a number");
    return v.get<double>();
  }
  static int as_int(const Json& v, const std::string& k) {
    if (!v.is_number_integer()) schema_error("'" + k + "' must be an integer");
    return v.get<int>();
  }

 private:
  std::string label() const { return path_.empty() ? "config" : path_; }
  const Json& j_;
  std::string path_;
  std::set<std::string> seen_;
};

GeometrySpec parse_geometry(const Json& j, const std::string& path) {
  Obj o(j, path);
  GeometrySpec g;
  g.type = o.str("type", "");
  if (g.type.empty()) schema_error("missing required key '" + o.key("type") + "'");
  if (g.type != "circle" && g.type != "ellipse" && g.type != "horseshoe")
    schema_error("'" + o.key("type") + "' must be circle, ellipse or horseshoe");
  g.radius = o.num("radius", g.radius);
  g.a = o.num("a", g.a);
  g.b = o.num("b", g.b);
  g.half_width = o.num("half_width", g.half_width);
  g.gap = o.num("gap", g.gap);
  g.modes = o.integer("modes", g.modes);
  g.L = o.num("L", g.L);
  g.alpha_fraction = o.num("alpha_fraction", g.alpha_fraction);
  o.done();
  return g;
}

std::vector<std::pair<int, double>> parse_mode_list(const Json& a, const std::string& path) {
  if (!a.is_array()) schema_error("'" + path + "' must be an array of [k, value] pairs");
  std::vector<std::pair<int, double>> out;
  for (size_t i = 0; i < a.size(); ++i) {
    const std::string p = path + "[" + std::to_string(i) + "]";
    if (!a[i].is_array() || a[i].size() != 2) schema_error("'" + p + "' must be a [k, value] pair");
    out.emplace_back(Obj::as_int(a[i][0], p + "[0]"), Obj::as_num(a[i][1], p + "[1]"));
  }
  return out;
}

BeamSpec parse_beam(const Json& j, const std::string& path) {
  Obj o(j, path);
  BeamSpec b;
  b.mean = o.num("mean", 0.0);
  if (o.has("cos")) b.cos = parse_mode_list(j.at("cos"), o.key("cos"));
  if (o.has("sin")) b.sin = parse_mode_list(j.at("sin"), o.key("sin"));
  if (o.has("bumps")) {
    const Json& a = j.at("bumps");
    if (!a.is_array()) schema_error("'" + o.key("bumps") + "' must be an array");
    for (size_t i = 0; i < a.size(); ++i) {
      Obj bo(a[i], o.key("bumps") + "[" + std::to_string(i) + "]");
      BeamSpec::Bump bp;
      bp.y = bo.req_num("y");
      bp.amplitude = bo.req_num("amplitude");
      bp.width = bo.num("width", bp.width);
      bo.done();
      b.bumps.push_back(bp);
    }
  }
  o.done();
  return b;
}

TimeProfile parse_time_profile(const Json& j, const std::string& path) {
  Obj o(j, path);
  TimeProfile t;
  t.kind = o.str("kind", t.kind);
  if (t.kind != "constant" && t.kind != "ramp" && t.kind != "sine")
    schema_error("'" + o.key("kind") + "' must be constant, ramp or sine");
  t.ramp = o.num("ramp", t.ramp);
  t.omega = o.num("omega", t.omega);
  o.done();
  return t;
}

FluidForcing parse_fluid_forcing(const Json& j, const std::string& path) {
  Obj o(j, path);
  FluidForcing f;
  if (o.has("c")) {
    const std::vector<double> c = o.nums("c", {});
    if (c.size() != 2) schema_error("'" + o.key("c") + "' must have 2 entries");
    f.c = Vec2(c[0], c[1]);
  }
  if (o.has("M")) {
    const Json& m = j.at("M");
    if (!m.is_array() || m.size() != 2 || !m[0].is_array() || !m[1].is_array() || m[0].size() != 2 || m[1].size() != 2)
      schema_error("'" + o.key("M") + "' must be a 2x2 array");
    for (int r = 0; r < 2; ++r)
      for (int c = 0; c < 2; ++c) f.M(r, c) = Obj::as_num(m[r][c], o.key("M"));
  }
  f.scale = o.num("scale", 1.0);
  if (o.has("time")) f.time = parse_time_profile(j.at("time"), o.key("time"));
  o.done();
  return f;
}

BeamForcing parse_beam_forcing(const Json& j, const std::string& path) {
  Obj o(j, path);
  BeamForcing g;
  if (o.has("shape")) g.shape = parse_beam(j.at("shape"), o.key("shape"));
  g.scale = o.num("scale", 1.0);
  if (o.has("time")) g.time = parse_time_profile(j.at("time"), o.key("time"));
  o.done();
  return g;
}

}  // namespace

RunConfig parse_run_config(const Json& j) {
  Obj o(j, "");
  RunConfig c;
  o.str("description", "");
  c.geometry = parse_geometry(o.at("geometry"), "geometry");
  if (o.has("mesh")) {
    Obj m(j.at("mesh"), "mesh");
    c.mesh_h = m.num("h", c.mesh_h);
    m.done();
  }
  c.beam_modes = o.integer("beam_modes", c.beam_modes);
  if (o.has("constants")) {
    Obj k(j.at("constants"), "constants");
    c.constants.rho_f = k.num("rho_f", 1.0);
    c.constants.mu = k.num("mu", 1.0);
    c.constants.rho_s = k.num("rho_s", 1.0);
    c.constants.gamma = k.num("gamma", 1.0);
    c.constants.alpha = k.num("alpha", 1.0);
    k.done();
  }
  if (o.has("initial")) {
    Obj in(j.at("initial"), "initial");
    if (in.has("eta0")) c.eta0 = parse_beam(j.at("initial").at("eta0"), "initial.eta0");
    if (in.has("eta1")) c.eta1 = parse_beam(j.at("initial").at("eta1"), "initial.eta1");
    if (in.has("u0")) {
      Obj u(j.at("initial").at("u0"), "initial.u0");
      c.u0 = u.str("type", c.u0);
      if (c.u0 != "extension" && c.u0 != "rotation") schema_error("'initial.u0.type' must be extension or rotation");
      c.u0_amplitude = u.num("amplitude", 0.0);
      u.done();
    }
    in.done();
  }
  if (o.has("forcing")) {
    Obj fo(j.at("forcing"), "forcing");
    if (fo.has("f")) c.f = parse_fluid_forcing(j.at("forcing").at("f"), "forcing.f");
    if (fo.has("g")) c.g = parse_beam_forcing(j.at("forcing").at("g"), "forcing.g");
    fo.done();
  }
  {
    Obj t(o.at("time"), "time");
    c.T = t.req_num("T");
    c.t_star = t.num("t_star", std::min(c.t_star, c.T));
    c.dt = t.num("dt", c.dt);
    c.max_halvings = t.integer("max_halvings", c.max_halvings);
    t.done();
  }
  if (o.has("picard")) {
    Obj p(j.at("picard"), "picard");
    c.picard_tol = p.num("tol", c.picard_tol);
    c.theta_max = p.num("theta_max", c.theta_max);
    c.max_iter = p.integer("max_iter", c.max_iter);
    p.done();
  }
  if (o.has("monitors")) {
    Obj m(j.at("monitors"), "monitors");
    c.degeneracy.speed_fraction = m.num("speed_fraction", c.degeneracy.speed_fraction);
    c.degeneracy.alignment = m.num("alignment", c.degeneracy.alignment);
    c.degeneracy.displacement_fraction = m.num("displacement_fraction", c.degeneracy.displacement_fraction);
    c.displacement_guard = m.num("displacement_guard", c.displacement_guard);
    m.done();
  }
  if (o.has("output")) {
    Obj out(j.at("output"), "output");
    c.vtk_every = out.integer("vtk_every", 0);
    out.done();
  }
  if (o.has("seed")) c.seed = static_cast<unsigned>(o.integer("seed", 0));
  o.done();
  return c;
}

StokesBenchSpec parse_stokes_bench(const Json& j) {
  Obj o(j, "");
  StokesBenchSpec s;
  o.str("description", "");
  s.geometry = parse_geometry(o.at("geometry"), "geometry");
  s.family = o.str("family", s.family);
  if (s.family != "manufactured" && s.family != "boundary") schema_error("'family' must be manufactured or boundary");
  s.meshes = o.nums("meshes", s.meshes);
  s.modes = o.ints("modes", s.modes);
  s.amplitude = o.num("amplitude", s.amplitude);
  s.exponent = o.num("exponent", s.exponent);
  o.done();
  return s;
}

RegularitySpec parse_regularity(const Json& j) {
  Obj o(j, "");
  RegularitySpec s;
  o.str("description", "");
  s.geometry = parse_geometry(o.at("geometry"), "geometry");
  s.meshes = o.nums("meshes", s.meshes);
  s.modes = o.ints("modes", s.modes);
  s.amplitude = o.num("amplitude", s.amplitude);
  if (o.has("families")) {
    const Json& a = j.at("families");
    if (!a.is_array()) schema_error("'families' must be an array");
    s.families.clear();
    for (size_t i = 0; i < a.size(); ++i) {
      Obj f(a[i], "families[" + std::to_string(i) + "]");
      RegularityFamily fam;
      fam.name = f.str("name", "family" + std::to_string(i));
      fam.exponent = f.req_num("exponent");
      f.done();
      s.families.push_back(fam);
    }
  }
  o.done();
  return s;
}

ChartSpec parse_charts(const Json& j) {
  Obj o(j, "");
  ChartSpec s;
  o.str("description", "");
  s.geometry = parse_geometry(o.at("geometry"), "geometry");
  if (o.has("eta")) s.eta = parse_beam(j.at("eta"), "eta");
  s.beam_modes = o.integer("beam_modes", s.beam_modes);
  s.points = o.nums("points", s.points);
  s.radius = o.num("radius", s.radius);
  o.done();
  return s;
}

NormSpec parse_norms(const Json& j) {
  Obj o(j, "");
  NormSpec s;
  o.str("description", "");
  s.field = parse_beam(o.at("field"), "field");
  s.modes = o.integer("modes", s.modes);
  s.s = o.nums("s", s.s);
  s.multiplier_K = o.integer("multiplier_K", s.multiplier_K);
  o.done();
  return s;
}

// ---------------------------------------------------------------- CSV

namespace {

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::ConfigError, "cannot write '" + path + "'");
  out << std::setprecision(17);
  return out;
}

void cell(std::ostream& os, double v) {
  if (std::isnan(v)) os << "nan";
  else os << v;
}

}  // namespace

void write_ledger_csv(const std::string& path, const std::vector<EnergyRow>& rows) {
  auto out = open_out(path);
  out << "t,E,D,work_f,work_g,residual,c_pi\n";
  for (const auto& r : rows)
    out << r.t << ',' << r.E << ',' << r.D << ',' << r.work_f << ',' << r.work_g << ',' << r.residual << ',' << r.c_pi << '\n';
}

void write_iterations_csv(const std::string& path, const std::vector<IterationRow>& rows) {
  auto out = open_out(path);
  out << "iter,distance,theta,slab,t0,t_star\n";
  for (const auto& r : rows)
    out << r.iter << ',' << r.distance << ',' << r.theta << ',' << r.slab << ',' << r.t0 << ',' << r.t_star << '\n';
}

void write_slabs_csv(const std::string& path, const std::vector<SlabRecord>& rows) {
  auto out = open_out(path);
  out << "slab,t0,t1,t_star,dt,iterations,max_theta,halvings\n";
  for (size_t i = 0; i < rows.size(); ++i) {
    const auto& r = rows[i];
    out << i << ',' << r.t0 << ',' << r.t1 << ',' << r.t_star << ',' << r.dt << ',' << r.iterations << ',' << r.max_theta
        << ',' << r.halvings << '\n';
  }
}

void write_beam_csv(const std::string& path, const PeriodicField& eta) {
  auto out = open_out(path);
  out << "k,Re,Im\n";
  for (int k = 0; k <= eta.max_mode(); ++k) out << k << ',' << eta.coeff(k).real() << ',' << eta.coeff(k).imag() << '\n';
}

void write_acceleration_csv(const std::string& path, const RunResult& r) {
  auto out = open_out(path);
  out << "scope,first_level,last_level,sup_grad_u,sum_fluid,sup_beam,sum_beam,data_u0,data_beam,data_g,lhs,rhs,ratio\n";
  auto row = [&](const std::string& scope, int a, int b) {
    const AccelerationTable t = acceleration_diagnostics(r, a, b);
    out << scope << ',' << a << ',' << b << ',' << t.sup_grad_u << ',' << t.sum_fluid << ',' << t.sup_beam << ','
        << t.sum_beam << ',' << t.data_u0 << ',' << t.data_beam << ',' << t.data_g << ',' << t.lhs() << ',' << t.rhs()
        << ',' << t.ratio() << '\n';
  };
  row("global", 0, static_cast<int>(r.states.size()) - 1);
  for (size_t i = 0; i < r.slabs.size(); ++i) row("slab" + std::to_string(i), r.slabs[i].first_level, r.slabs[i].last_level);
}

void write_stokes_csv(const std::string& path, const std::vector<StokesBenchRow>& rows) {
  auto out = open_out(path);
  out << "family_param,h,ratio,h1_err,l2_err\n";
  for (const auto& r : rows) {
    out << r.family_param << ',' << r.h << ',' << r.ratio << ',';
    cell(out, r.h1_err);
    out << ',';
    cell(out, r.l2_err);
    out << '\n';
  }
}

void write_regularity_csv(const std::string& path, const std::vector<RegularityRow>& rows) {
  auto out = open_out(path);
  out << "family,exponent,m,h,ratio\n";
  for (const auto& r : rows) out << r.family << ',' << r.exponent << ',' << r.m << ',' << r.h << ',' << r.ratio << '\n';
}

void write_charts_csv(const std::string& path, const std::vector<ChartRow>& rows) {
  auto out = open_out(path);
  out << "y,x0,y0,graph_max,lipschitz\n";
  for (const auto& r : rows) out << r.y << ',' << r.x0.x() << ',' << r.x0.y() << ',' << r.graph_max << ',' << r.lipschitz << '\n';
}

void write_norms_csv(const std::string& path, const std::vector<NormRow>& rows) {
  auto out = open_out(path);
  out << "s,norm,multiplier\n";
  for (const auto& r : rows) {
    out << r.s << ',' << r.norm << ',';
    cell(out, r.multiplier);
    out << '\n';
  }
}

// ---------------------------------------------------------------- VTK

void write_vtk(const std::string& path, const MixedSpace& s, const CoupledState& st) {
  auto out = open_out(path);
  const ReferenceGeometry& g = s.geometry();
  const PeriodicField eta = PeriodicField::from_real_vector(st.eta);
  const int nn = s.n_nodes();
  out << "# vtk DataFile Version 3.0\nfsi state t=" << st.t << "\nASCII\nDATASET UNSTRUCTURED_GRID\n";
  out << "POINTS " << nn << " double\n";
  for (int i = 0; i < nn; ++i) {
    const Vec2 x = eta.is_zero() ? s.nodes[i] : hanzawa(g, eta, s.nodes[i]);
    out << x.x() << ' ' << x.y() << " 0\n";
  }
  const int ne = s.n_elements();
  out << "CELLS " << ne << ' ' << 7 * ne << '\n';
  for (const auto& el : s.elements) {
    out << 6;
    for (int k = 0; k < 6; ++k) out << ' ' << el[k];
    out << '\n';
  }
  out << "CELL_TYPES " << ne << '\n';
  for (int e = 0; e < ne; ++e) out << "22\n";

  std::vector<double> p(nn, 0.0);
  const VectorXd pv = st.pressure();
  for (int i = 0; i < s.n_vertices(); ++i) p[i] = pv(i);
  static const int ep[3][2] = {{0, 1}, {1, 2}, {2, 0}};
  for (const auto& el : s.elements)
    for (int k = 0; k < 3; ++k) p[el[3 + k]] = 0.5 * (pv(el[ep[k][0]]) + pv(el[ep[k][1]]));
  out << "POINT_DATA " << nn << "\nVECTORS velocity double\n";
  for (int i = 0; i < nn; ++i) out << st.u(2 * i) << ' ' << st.u(2 * i + 1) << " 0\n";
  out << "SCALARS pressure double 1\nLOOKUP_TABLE default\n";
  for (int i = 0; i < nn; ++i) out << p[i] << '\n';
}

// ---------------------------------------------------------------- plots

CsvTable read_csv(const std::string& path) {
  std::istringstream in(read_file(path));
  CsvTable t;
  std::string line;
  auto split = [](const std::string& l) {
    std::vector<std::string> v;
    std::stringstream ss(l);
    std::string c;
    while (std::getline(ss, c, ',')) v.push_back(c);
    return v;
  };
  if (!std::getline(in, line)) throw Error(ErrorCode::ConfigError, "'" + path + "' is empty");
  t.header = split(line);
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<double> row;
    for (const auto& c : split(line)) {
      char* end = nullptr;
      const double v = std::strtod(c.c_str(), &end);
      row.push_back(end != c.c_str() && *end == '\0' ? v : std::nan(""));
    }
    t.rows.push_back(row);
  }
  return t;
}

std::string emit_plot_script(const std::string& csv_path, const std::string& out_dir) {
  const CsvTable t = read_csv(csv_path);
  if (t.header.size() < 2) throw Error(ErrorCode::ConfigError, "'" + csv_path + "' needs at least two columns");
  const fs::path src(csv_path);
  const std::string name = src.filename().string();
  const std::string stem = src.stem().string();
  fs::create_directories(out_dir);
  const fs::path dst = fs::path(out_dir) / name;
  if (!fs::exists(dst) || !fs::equivalent(src, dst)) fs::copy_file(src, dst, fs::copy_options::overwrite_existing);
  const std::string script = (fs::path(out_dir) / (stem + "_plot.py")).string();
  std::ofstream py(script);
  if (!py) throw Error(ErrorCode::ConfigError, "cannot write '" + script + "'");
  py << "#!/usr/bin/env python3\n"
        "# Plots every column of " << name << " against its first column into " << stem << ".png.\n"
        "import csv\n"
        "import math\n"
        "import os\n"
        "\n"
        "import matplotlib\n"
        "matplotlib.use(\"Agg\")\n"
        "import matplotlib.pyplot as plt\n"
        "\n"
        "HERE = os.path.dirname(os.path.abspath(__file__))\n"
        "\n"
        "\n"
        "def num(v):\n"
        "    try:\n"
        "        return float(v)\n"
        "    except ValueError:\n"
        "        return math.nan\n"
        "\n"
        "\n"
        "with open(os.path.join(HERE, \"" << name << "\"), newline=\"\") as fh:\n"
        "    rows = list(csv.reader(fh))\n"
        "header, data = rows[0], [[num(v) for v in r] for r in rows[1:] if r]\n"
        "cols = list(zip(*data)) if data else [[] for _ in header]\n"
        "fig, ax = plt.subplots(figsize=(7, 4.5))\n"
        "for i in range(1, len(header)):\n"
        "    if any(not math.isnan(v) for v in cols[i]):\n"
        "        ax.plot(cols[0], cols[i], marker=\"o\", ms=3, label=header[i])\n"
        "ax.set_xlabel(header[0])\n"
        "ax.legend()\n"
        "ax.grid(alpha=0.3)\n"
        "fig.tight_layout()\n"
        "fig.savefig(os.path.join(HERE, \"" << stem << ".png\"), dpi=120)\n";
  return script;
}

}  // namespace fsi
