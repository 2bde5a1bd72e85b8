#include "fsi/mesh.hpp"

#include <cmath>
#include <istream>
#include <map>
#include <ostream>
#include <random>
#include <string>
#include <unordered_map>

namespace fsi {

namespace {

double tri_area(const Vec2& a, const Vec2& b, const Vec2& c) {
  return 0.5 * ((b - a).x() * (c - a).y() - (b - a).y() * (c - a).x());
}

double min_angle(const Vec2& a, const Vec2& b, const Vec2& c) {
  auto ang = [](const Vec2& p, const Vec2& q, const Vec2& r) {
    const Vec2 u = q - p, v = r - p;
    return std::acos(std::clamp(u.dot(v) / (u.norm() * v.norm()), -1.0, 1.0));
  };
  return std::min({ang(a, b, c), ang(b, c, a), ang(c, a, b)}) * 180.0 / kPi;
}

bool inside_polygon(const std::vector<Vec2>& poly, const Vec2& p) {
  bool in = false;
  const size_t n = poly.size();
  for (size_t i = 0, j = n - 1; i < n; j = i++) {
    const Vec2 &a = poly[i], &b = poly[j];
    if ((a.y() > p.y()) != (b.y() > p.y()) &&
        p.x() < (b.x() - a.x()) * (p.y() - a.y()) / (b.y() - a.y()) + a.x())
      in = !in;
  }
  return in;
}

double dist_to_polyline(const std::vector<Vec2>& poly, const Vec2& p) {
  double d = 1e300;
  const size_t n = poly.size();
  for (size_t i = 0; i < n; ++i) {
    const Vec2 &a = poly[i], &b = poly[(i + 1) % n];
    const Vec2 ab = b - a;
    const double t = std::clamp((p - a).dot(ab) / ab.squaredNorm(), 0.0, 1.0);
    d = std::min(d, (a + t * ab - p).squaredNorm());
  }
  return std::sqrt(d);
}

struct DTri {
  std::array<int, 3> v;
  Vec2 cc;
  double r2;
};

DTri make_tri(const std::vector<Vec2>& P, int a, int b, int c) {
  const Vec2 &A = P[a], &B = P[b], &C = P[c];
  const double d = 2.0 * (A.x() * (B.y() - C.y()) + B.x() * (C.y() - A.y()) + C.x() * (A.y() - B.y()));
  const double a2 = A.squaredNorm(), b2 = B.squaredNorm(), c2 = C.squaredNorm();
  Vec2 cc((a2 * (B.y() - C.y()) + b2 * (C.y() - A.y()) + c2 * (A.y() - B.y())) / d,
          (a2 * (C.x() - B.x()) + b2 * (A.x() - C.x()) + c2 * (B.x() - A.x())) / d);
  return {{a, b, c}, cc, (A - cc).squaredNorm()};
}

}  // namespace

std::vector<std::array<int, 3>> delaunay(const std::vector<Vec2>& pts_in) {
  std::vector<Vec2> P = pts_in;
  const int n = static_cast<int>(P.size());
  Vec2 lo = P[0], hi = P[0];
  for (const auto& p : P) lo = lo.cwiseMin(p), hi = hi.cwiseMax(p);
  const Vec2 c = 0.5 * (lo + hi);
  const double d = std::max((hi - lo).maxCoeff(), 1e-12);
  // break exact cocircularity (equispaced points on a circle)
  std::mt19937 rng(12345);
  std::uniform_real_distribution<double> jit(-1e-9 * d, 1e-9 * d);
  for (auto& p : P) p += Vec2(jit(rng), jit(rng));
  P.push_back(c + Vec2(-20 * d, -20 * d));
  P.push_back(c + Vec2(20 * d, -20 * d));
  P.push_back(c + Vec2(0.0, 20 * d));
  std::vector<DTri> tris{make_tri(P, n, n + 1, n + 2)};
  std::vector<int> bad;
  std::unordered_map<long long, std::pair<int, int>> edges;  // key -> (count, packed oriented edge)
  for (int i = 0; i < n; ++i) {
    const Vec2& p = P[i];
    bad.clear();
    for (int t = 0; t < static_cast<int>(tris.size()); ++t)
      if ((p - tris[t].cc).squaredNorm() < tris[t].r2) bad.push_back(t);
    if (bad.empty()) continue;
    edges.clear();
    std::vector<std::array<int, 2>> oriented;
    for (int t : bad)
      for (int k = 0; k < 3; ++k) {
        const int a = tris[t].v[k], b = tris[t].v[(k + 1) % 3];
        const long long key = static_cast<long long>(std::min(a, b)) * (n + 3) + std::max(a, b);
        auto it = edges.find(key);
        if (it == edges.end()) {
          edges.emplace(key, std::make_pair(1, static_cast<int>(oriented.size())));
          oriented.push_back({a, b});
        } else {
          it->second.first++;
        }
      }
    // remove bad triangles (indices ascending, swap-pop from the back)
    for (auto it = bad.rbegin(); it != bad.rend(); ++it) {
      tris[*it] = tris.back();
      tris.pop_back();
    }
    for (const auto& kv : edges) {
      if (kv.second.first != 1) continue;
      const auto& e = oriented[kv.second.second];
      tris.push_back(make_tri(P, e[0], e[1], i));
    }
  }
  std::vector<std::array<int, 3>> out;
  for (const auto& t : tris) {
    if (t.v[0] >= n || t.v[1] >= n || t.v[2] >= n) continue;
    std::array<int, 3> v = t.v;
    if (tri_area(pts_in[v[0]], pts_in[v[1]], pts_in[v[2]]) < 0) std::swap(v[1], v[2]);
    out.push_back(v);
  }
  return out;
}

std::vector<double> arclength_params(const ReferenceGeometry& g, int n) {
  const int M = 16384;
  std::vector<double> cum(M + 1, 0.0), sp(M + 1);
  for (int j = 0; j <= M; ++j) sp[j] = g.tangent(double(j) / M).norm();
  for (int j = 0; j < M; ++j) cum[j + 1] = cum[j] + 0.5 * (sp[j] + sp[j + 1]) / M;
  const double total = cum[M];
  std::vector<double> y(n);
  int k = 0;
  for (int i = 0; i < n; ++i) {
    const double target = total * i / n;
    while (k < M - 1 && cum[k + 1] < target) ++k;
    const double t = (target - cum[k]) / (cum[k + 1] - cum[k]);
    y[i] = (k + t) / M;
  }
  return y;
}

std::vector<std::array<int, 2>> Mesh::boundary_edges() const {
  std::vector<std::array<int, 2>> e;
  const size_t nb = boundary_vertices.size();
  for (size_t i = 0; i < nb; ++i) e.push_back({boundary_vertices[i], boundary_vertices[(i + 1) % nb]});
  return e;
}

double Mesh::area() const {
  double a = 0.0;
  for (const auto& t : triangles) a += tri_area(vertices[t[0]], vertices[t[1]], vertices[t[2]]);
  return a;
}

void Mesh::update_quality() {
  h = 0.0;
  min_angle_deg = 180.0;
  for (const auto& t : triangles) {
    for (int k = 0; k < 3; ++k) h = std::max(h, (vertices[t[k]] - vertices[t[(k + 1) % 3]]).norm());
    min_angle_deg = std::min(min_angle_deg, min_angle(vertices[t[0]], vertices[t[1]], vertices[t[2]]));
  }
}

Mesh build_mesh(const ReferenceGeometry& g, double h, const MeshOptions& opt) {
  if (!(h > 0.0)) throw Error(ErrorCode::MeshingFailure, "mesh size must be positive");
  const int nb = std::max(8, static_cast<int>(std::ceil(g.perimeter() / h)));
  const std::vector<double> params = arclength_params(g, nb);
  std::vector<Vec2> bpoly(nb);
  for (int i = 0; i < nb; ++i) bpoly[i] = g.point(params[i]);
  std::vector<Vec2> dense(g.n_check());
  for (size_t j = 0; j < dense.size(); ++j) dense[j] = g.point(double(j) / dense.size());

  Vec2 lo = bpoly[0], hi = bpoly[0];
  for (const auto& p : dense) lo = lo.cwiseMin(p), hi = hi.cwiseMax(p);

  std::mt19937 rng(opt.seed);
  std::uniform_real_distribution<double> jit(-0.01 * h, 0.01 * h);
  std::vector<Vec2> pts = bpoly;
  const double dy = h * std::sqrt(3.0) / 2.0;
  int row = 0;
  for (double yy = lo.y() + 0.5 * dy; yy < hi.y(); yy += dy, ++row) {
    for (double xx = lo.x() + (row % 2 ? 0.5 * h : 0.0); xx < hi.x(); xx += h) {
      Vec2 p(xx + jit(rng), yy + jit(rng));
      if (!inside_polygon(dense, p)) continue;
      if (dist_to_polyline(dense, p) < opt.interior_clearance * h) continue;
      pts.push_back(p);
    }
  }

  auto triangulate = [&](const std::vector<Vec2>& P) {
    std::vector<std::array<int, 3>> tris;
    for (const auto& t : delaunay(P)) {
      const Vec2 c = (P[t[0]] + P[t[1]] + P[t[2]]) / 3.0;
      if (!inside_polygon(bpoly, c)) continue;
      if (tri_area(P[t[0]], P[t[1]], P[t[2]]) <= 1e-14 * h * h) continue;
      tris.push_back(t);
    }
    return tris;
  };

  std::vector<std::array<int, 3>> tris = triangulate(pts);
  for (int round = 0; round < opt.smoothing_rounds; ++round) {
    std::vector<std::vector<int>> nbr(pts.size());
    for (const auto& t : tris)
      for (int k = 0; k < 3; ++k) {
        nbr[t[k]].push_back(t[(k + 1) % 3]);
        nbr[t[k]].push_back(t[(k + 2) % 3]);
      }
    for (int sweep = 0; sweep < 4; ++sweep) {
      std::vector<Vec2> next = pts;
      for (size_t i = nb; i < pts.size(); ++i) {
        if (nbr[i].empty()) continue;
        Vec2 avg = Vec2::Zero();
        for (int j : nbr[i]) avg += pts[j];
        avg /= double(nbr[i].size());
        if (inside_polygon(dense, avg) && dist_to_polyline(dense, avg) > 0.35 * h) next[i] = avg;
      }
      pts.swap(next);
    }
    tris = triangulate(pts);
  }

  // compact unused vertices
  std::vector<int> used(pts.size(), -1);
  Mesh m;
  for (int i = 0; i < nb; ++i) {
    used[i] = i;
    m.vertices.push_back(pts[i]);
  }
  for (auto& t : tris)
    for (int& v : t) {
      if (used[v] < 0) {
        used[v] = static_cast<int>(m.vertices.size());
        m.vertices.push_back(pts[v]);
      }
      v = used[v];
    }
  m.triangles = tris;
  m.boundary_vertices.resize(nb);
  for (int i = 0; i < nb; ++i) m.boundary_vertices[i] = i;
  m.boundary_params = params;
  m.boundary_index.assign(m.vertices.size(), -1);
  for (int i = 0; i < nb; ++i) m.boundary_index[i] = i;

  std::map<std::pair<int, int>, int> edge_count;
  for (const auto& t : m.triangles)
    for (int k = 0; k < 3; ++k) {
      int a = t[k], b = t[(k + 1) % 3];
      edge_count[{std::min(a, b), std::max(a, b)}]++;
    }
  for (const auto& e : m.boundary_edges()) {
    auto it = edge_count.find({std::min(e[0], e[1]), std::max(e[0], e[1])});
    if (it == edge_count.end() || it->second != 1)
      throw Error(ErrorCode::MeshingFailure, "boundary edge not recovered by the triangulation");
  }
  for (const auto& kv : edge_count) {
    if (kv.second == 1 && !(m.boundary_index[kv.first.first] >= 0 && m.boundary_index[kv.first.second] >= 0))
      throw Error(ErrorCode::MeshingFailure, "triangulation has a hole");
  }
  m.update_quality();
  if (m.min_angle_deg < 20.0)
    throw Error(ErrorCode::MeshingFailure, "minimum angle " + std::to_string(m.min_angle_deg) + " below 20 degrees");
  return m;
}

double boundary_geometric_error(const ReferenceGeometry& g, const Mesh& m) {
  double err = 0.0;
  const size_t nb = m.boundary_vertices.size();
  for (size_t i = 0; i < nb; ++i) {
    const double ya = m.boundary_params[i];
    double yb = m.boundary_params[(i + 1) % nb];
    if (yb <= ya) yb += 1.0;
    const Vec2 a = m.vertices[m.boundary_vertices[i]], b = m.vertices[m.boundary_vertices[(i + 1) % nb]];
    for (int k = 1; k < 10; ++k) {
      const Vec2 p = g.point(ya + (yb - ya) * k / 10.0);
      const Vec2 ab = b - a;
      const double t = std::clamp((p - a).dot(ab) / ab.squaredNorm(), 0.0, 1.0);
      err = std::max(err, (a + t * ab - p).norm());
    }
  }
  return err;
}

void write_mesh(std::ostream& os, const Mesh& m) {
  os.precision(17);
  os << "# fsi-mesh v1\n";
  os << "vertices " << m.vertices.size() << "\n";
  for (const auto& v : m.vertices) os << v.x() << " " << v.y() << "\n";
  os << "triangles " << m.triangles.size() << "\n";
  for (const auto& t : m.triangles) os << t[0] << " " << t[1] << " " << t[2] << "\n";
  os << "boundary " << m.boundary_vertices.size() << "\n";
  for (size_t i = 0; i < m.boundary_vertices.size(); ++i)
    os << m.boundary_vertices[i] << " " << m.boundary_params[i] << "\n";
}

Mesh read_mesh(std::istream& is) {
  Mesh m;
  std::string tok;
  size_t n;
  auto expect = [&](const char* key) {
    while (is >> tok && tok[0] == '#') std::getline(is, tok);
    if (tok != key || !(is >> n)) throw Error(ErrorCode::ConfigError, std::string("mesh file: expected ") + key);
  };
  expect("vertices");
  m.vertices.resize(n);
  for (auto& v : m.vertices) is >> v.x() >> v.y();
  expect("triangles");
  m.triangles.resize(n);
  for (auto& t : m.triangles) is >> t[0] >> t[1] >> t[2];
  expect("boundary");
  m.boundary_vertices.resize(n);
  m.boundary_params.resize(n);
  for (size_t i = 0; i < n; ++i) is >> m.boundary_vertices[i] >> m.boundary_params[i];
  if (!is) throw Error(ErrorCode::ConfigError, "mesh file truncated");
  m.boundary_index.assign(m.vertices.size(), -1);
  for (size_t i = 0; i < n; ++i) m.boundary_index[m.boundary_vertices[i]] = static_cast<int>(i);
  m.update_quality();
  return m;
}

}  // namespace fsi
