#pragma once

#include <string>
#include <vector>

#include "fsi/driver.hpp"

namespace fsi {

/// Runs f(0..n-1) on up to `threads` workers. Results must be written by index.
void parallel_for(int n, int threads, const std::function<void(int)>& f);

/// Steady Stokes on a fixed boundary: either the manufactured disk solution
///   u = curl (1 - |x|^2)^2, pi = x1 x2 (unit circle only)
/// or the boundary family eta = amplitude m^-exponent cos(2 pi m y) with the load J (1 + x2, sin 2 x1).
struct StokesBenchSpec {
  GeometrySpec geometry;
  std::string family = "manufactured";  // manufactured | boundary
  std::vector<double> meshes = {0.1, 0.05, 0.025};
  std::vector<int> modes;               // boundary family: m values
  double amplitude = 0.12;
  double exponent = 1.1;
};

struct StokesBenchRow {
  double family_param = 0.0, h = 0.0, ratio = 0.0;
  double h1_err = std::nan(""), l2_err = std::nan("");  // manufactured family only
};

std::vector<StokesBenchRow> stokes_bench(const StokesBenchSpec& spec, int threads = 1);

/// Regularity ratio of the boundary families: one row per (family, m, h).
struct RegularityFamily {
  std::string name;
  double exponent = 1.1;
};
struct RegularitySpec {
  GeometrySpec geometry;
  std::vector<double> meshes = {0.05};
  std::vector<RegularityFamily> families = {{"rough", 1.1}, {"smooth", 1.6}};
  std::vector<int> modes = {4, 8, 16};
  double amplitude = 0.12;
};
struct RegularityRow {
  std::string family;
  double exponent = 0.0;
  int m = 0;
  double h = 0.0, ratio = 0.0;
};
std::vector<RegularityRow> regularity_sweep(const RegularitySpec& spec, int threads = 1);

/// Local charts of the deformed boundary at given parameters.
struct ChartSpec {
  GeometrySpec geometry;
  BeamSpec eta;
  int beam_modes = 8;
  std::vector<double> points = {0.0, 0.25, 0.5, 0.75};
  double radius = 0.2;
};
struct ChartRow {
  double y = 0.0;
  Vec2 x0 = Vec2::Zero();
  double graph_max = 0.0, lipschitz = 0.0;
};
std::vector<ChartRow> charts(const ChartSpec& spec);

/// Fractional norms of a beam profile and, optionally, the multiplier norm of its derivative.
struct NormSpec {
  BeamSpec field;
  int modes = 16;
  std::vector<double> s = {0.0, 0.5, 1.0, 1.5, 2.0};
  int multiplier_K = 0;  // 0: skip
};
struct NormRow {
  double s = 0.0, norm = 0.0, multiplier = std::nan("");
};
std::vector<NormRow> norms(const NormSpec& spec);

}  // namespace fsi
