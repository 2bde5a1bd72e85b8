#pragma once

#include <array>
#include <iosfwd>
#include <vector>

#include "fsi/common.hpp"
#include "fsi/geometry.hpp"

namespace fsi {

/// Conforming triangulation of the reference domain with boundary vertices on phi.
struct Mesh {
  std::vector<Vec2> vertices;
  std::vector<std::array<int, 3>> triangles;  // counter-clockwise
  std::vector<int> boundary_vertices;         // ordered along phi
  std::vector<double> boundary_params;        // y of each boundary vertex
  std::vector<int> boundary_index;            // per vertex: position in boundary_vertices or -1
  double h = 0.0;                             // longest edge
  double min_angle_deg = 0.0;

  /// Consecutive pairs of boundary_vertices (closing pair included).
  std::vector<std::array<int, 2>> boundary_edges() const;
  double area() const;
  void update_quality();
};

struct MeshOptions {
  double interior_clearance = 0.6;  // lattice points kept at >= this * h from the boundary
  int smoothing_rounds = 3;
  unsigned seed = 1;
};

Mesh build_mesh(const ReferenceGeometry& g, double h_target, const MeshOptions& opt = {});

/// Delaunay triangulation (Bowyer-Watson) of a point set; returns CCW triangles.
std::vector<std::array<int, 3>> delaunay(const std::vector<Vec2>& pts);

/// Parameters y_j with equal arclength spacing, y_0 = 0.
std::vector<double> arclength_params(const ReferenceGeometry& g, int n);

/// Largest distance between the boundary polyline and the curve (sampled on each edge).
double boundary_geometric_error(const ReferenceGeometry& g, const Mesh& m);

void write_mesh(std::ostream& os, const Mesh& m);
Mesh read_mesh(std::istream& is);

}  // namespace fsi
