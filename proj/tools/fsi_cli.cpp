// fsi: command line front end. Exit codes: 0 ok, 2 configuration error, 3 run terminated early,
// 1 anything else.
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>

#include "CLI11.hpp"
#include "fsi/io.hpp"

using namespace fsi;
namespace fs = std::filesystem;

namespace {

struct Common {
  std::string config, out = "out";
  int threads = 1;
  unsigned seed = 0;
  bool seed_given = false;
};

Json load(const Common& c) {
  if (c.config.empty()) throw Error(ErrorCode::ConfigError, "--config is required");
  return read_json_file(c.config);
}

void write_manifest(const Common& c, const std::string& command, const std::vector<std::string>& outputs,
                    const Json& extra = Json::object()) {
  Json m;
  m["command"] = command;
  m["config_path"] = c.config;
  m["config_hash"] = "fnv1a64:" + hex64(fnv1a64(read_file(c.config)));
  m["code_version"] = code_version();
  m["seed"] = c.seed;
  m["threads"] = c.threads;
  m["outputs"] = outputs;
  m["reproducibility"] = {{"csv_relative_tolerance", 1e-9}, {"deterministic_with_threads", 1}};
  for (auto it = extra.begin(); it != extra.end(); ++it) m[it.key()] = it.value();
  std::ofstream out(fs::path(c.out) / "manifest.json");
  out << m.dump(2) << '\n';
}

std::string in_out(const Common& c, const std::string& name) { return (fs::path(c.out) / name).string(); }

int cmd_run(const Common& c) {
  RunConfig cfg = parse_run_config(load(c));
  if (c.seed_given) cfg.seed = c.seed;
  fs::create_directories(c.out);
  const RunResult r = run(cfg);
  const MixedSpace& s = *r.disc->space;
  std::vector<std::string> outputs = {"ledger.csv", "iterations.csv", "slabs.csv", "beam.csv", "acceleration.csv", "final.vtk"};
  write_ledger_csv(in_out(c, "ledger.csv"), r.ledger);
  write_iterations_csv(in_out(c, "iterations.csv"), r.iterations);
  write_slabs_csv(in_out(c, "slabs.csv"), r.slabs);
  write_beam_csv(in_out(c, "beam.csv"), PeriodicField::from_real_vector(r.states.back().eta));
  write_acceleration_csv(in_out(c, "acceleration.csv"), r);
  write_vtk(in_out(c, "final.vtk"), s, r.states.back());
  if (cfg.vtk_every > 0)
    for (size_t n = 0; n < r.states.size(); n += cfg.vtk_every) {
      const std::string name = "state_" + std::to_string(n) + ".vtk";
      write_vtk(in_out(c, name), s, r.states[n]);
      outputs.push_back(name);
    }
  Common cc = c;
  cc.seed = cfg.seed;
  write_manifest(cc, "run", outputs,
                 {{"termination", to_string(r.termination)}, {"t_end", r.t_end}, {"levels", r.states.size()}});
  std::cout << "termination " << to_string(r.termination) << ", t_end " << r.t_end << ", levels " << r.states.size()
            << ", slabs " << r.slabs.size() << '\n';
  if (r.termination != Termination::Horizon) {
    std::cerr << "terminated early: " << to_string(r.termination) << ": " << r.message << '\n';
    return 3;
  }
  return 0;
}

int cmd_stokes(const Common& c) {
  const StokesBenchSpec spec = parse_stokes_bench(load(c));
  fs::create_directories(c.out);
  const auto rows = stokes_bench(spec, c.threads);
  write_stokes_csv(in_out(c, "stokes.csv"), rows);
  write_manifest(c, "stokes-bench", {"stokes.csv"});
  for (const auto& r : rows)
    std::cout << "param " << r.family_param << " h " << r.h << " ratio " << r.ratio << " h1_err " << r.h1_err << " l2_err "
              << r.l2_err << '\n';
  return 0;
}

int cmd_regularity(const Common& c) {
  const RegularitySpec spec = parse_regularity(load(c));
  fs::create_directories(c.out);
  const auto rows = regularity_sweep(spec, c.threads);
  write_regularity_csv(in_out(c, "regularity.csv"), rows);
  write_manifest(c, "regularity-sweep", {"regularity.csv"});
  for (const auto& r : rows) std::cout << r.family << " m " << r.m << " h " << r.h << " ratio " << r.ratio << '\n';
  return 0;
}

int cmd_charts(const Common& c) {
  const ChartSpec spec = parse_charts(load(c));
  fs::create_directories(c.out);
  const auto rows = charts(spec);
  write_charts_csv(in_out(c, "charts.csv"), rows);
  write_manifest(c, "charts", {"charts.csv"});
  for (const auto& r : rows) std::cout << "y " << r.y << " lipschitz " << r.lipschitz << '\n';
  return 0;
}

int cmd_norms(const Common& c) {
  const NormSpec spec = parse_norms(load(c));
  fs::create_directories(c.out);
  const auto rows = norms(spec);
  write_norms_csv(in_out(c, "norms.csv"), rows);
  write_manifest(c, "norms", {"norms.csv"});
  for (const auto& r : rows) std::cout << "s " << r.s << " norm " << r.norm << " multiplier " << r.multiplier << '\n';
  return 0;
}

int cmd_plot(const Common& c, const std::string& csv) {
  const std::string path = csv.empty() ? c.config : csv;
  if (path.empty()) throw Error(ErrorCode::ConfigError, "plot-emit needs a CSV path");
  if (!fs::exists(path)) throw Error(ErrorCode::ConfigError, "cannot open '" + path + "'");
  std::cout << emit_plot_script(path, c.out) << '\n';
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"fluid-beam interaction solver"};
  app.require_subcommand(1);
  Common c;
  std::string csv;
  const std::vector<std::pair<std::string, std::string>> cmds = {
      {"run", "chained Picard slabs over [0, T]"},
      {"stokes-bench", "steady Stokes convergence / regularity benchmark"},
      {"regularity-sweep", "regularity ratio over boundary families"},
      {"charts", "local graph charts of a deformed boundary"},
      {"norms", "fractional and multiplier norms of a beam profile"},
      {"plot-emit", "plotting script for a produced CSV"}};
  std::map<std::string, CLI::App*> sub;
  for (const auto& [name, help] : cmds) {
    CLI::App* s = app.add_subcommand(name, help);
    s->add_option("--config", c.config, name == "plot-emit" ? "CSV file" : "JSON configuration");
    s->add_option("--out", c.out, "output directory");
    s->add_option("--threads", c.threads, "worker threads for sweeps")->check(CLI::PositiveNumber);
    s->add_option("--seed", c.seed, "seed recorded in the manifest");
    if (name == "plot-emit") s->add_option("csv", csv, "CSV file");
    sub[name] = s;
  }
  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::string msg = e.what();
    std::replace(msg.begin(), msg.end(), '\n', ' ');
    std::cerr << "usage error: " << msg << '\n';
    return 2;
  }
  for (const auto& [name, s] : sub)
    if (s->parsed() && s->count("--seed")) c.seed_given = true;

  try {
    if (sub["run"]->parsed()) return cmd_run(c);
    if (sub["stokes-bench"]->parsed()) return cmd_stokes(c);
    if (sub["regularity-sweep"]->parsed()) return cmd_regularity(c);
    if (sub["charts"]->parsed()) return cmd_charts(c);
    if (sub["norms"]->parsed()) return cmd_norms(c);
    if (sub["plot-emit"]->parsed()) return cmd_plot(c, csv);
  } catch (const Error& e) {
    std::string msg = e.what();
    std::replace(msg.begin(), msg.end(), '\n', ' ');
    if (e.code() == ErrorCode::ConfigError) {
      std::cerr << "config error: " << msg << '\n';
      return 2;
    }
    std::cerr << "error: " << msg << '\n';
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 1;
}
