#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "fsi/bench.hpp"
#include "json.hpp"

namespace fsi {

using Json = nlohmann::json;

/// Reads a JSON file; ConfigError on I/O or syntax errors.
Json read_json_file(const std::string& path);

// Schema-checked conversions. Unknown keys, wrong types and missing required keys raise
// ConfigError with a one-line message naming the offending key path.
RunConfig parse_run_config(const Json& j);
StokesBenchSpec parse_stokes_bench(const Json& j);
RegularitySpec parse_regularity(const Json& j);
ChartSpec parse_charts(const Json& j);
NormSpec parse_norms(const Json& j);

// CSV writers; columns are listed in docs/output-schema.md.
void write_ledger_csv(const std::string& path, const std::vector<EnergyRow>& rows);
void write_iterations_csv(const std::string& path, const std::vector<IterationRow>& rows);
void write_slabs_csv(const std::string& path, const std::vector<SlabRecord>& rows);
void write_beam_csv(const std::string& path, const PeriodicField& eta);
void write_acceleration_csv(const std::string& path, const RunResult& r);
void write_stokes_csv(const std::string& path, const std::vector<StokesBenchRow>& rows);
void write_regularity_csv(const std::string& path, const std::vector<RegularityRow>& rows);
void write_charts_csv(const std::string& path, const std::vector<ChartRow>& rows);
void write_norms_csv(const std::string& path, const std::vector<NormRow>& rows);

/// Legacy VTK ASCII unstructured grid of a state on the deformed domain: quadratic triangles
/// (cell type 22), velocity as POINT_DATA vectors, pressure as scalars (P1, edge midpoints averaged).
void write_vtk(const std::string& path, const MixedSpace& s, const CoupledState& st);

/// Minimal CSV reader: header and numeric rows (non-numeric cells become NaN).
struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<double>> rows;
};
CsvTable read_csv(const std::string& path);

/// Writes a standalone matplotlib script that plots every column of `csv_path` against the first.
/// The script references only the CSV file name. Returns the script path.
std::string emit_plot_script(const std::string& csv_path, const std::string& out_dir);

uint64_t fnv1a64(const std::string& bytes);
std::string hex64(uint64_t v);
std::string read_file(const std::string& path);

/// Code version recorded in manifests.
const char* code_version();

}  // namespace fsi
