#pragma once

#include <Eigen/Core>
#include <array>
#include <cmath>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "kinn/common/check.hpp"

namespace kinn {

enum class RegionTag { domain, boundary, interface_line };

// Weighted sample set. For area-true schemes the weights sum to the measure
// of the region they cover.
struct PointSet {
  Eigen::MatrixXd points;  // n x dim (dim 1 or 2)
  Eigen::VectorXd weights;
  RegionTag tag = RegionTag::domain;

  Eigen::Index size() const { return points.rows(); }
  int dim() const { return static_cast<int>(points.cols()); }
  double measure() const { return weights.sum(); }

  void validate() const {
    require(points.rows() == weights.size(), "PointSet: weight/point mismatch");
    for (Eigen::Index i = 0; i < weights.size(); ++i)
      require(weights[i] > 0.0, "PointSet: nonpositive weight");
  }
};

struct TriangleMesh {
  Eigen::MatrixXd vertices;               // n x 2
  std::vector<std::array<int, 3>> tris;   // CCW vertex triples
  Eigen::MatrixXd centroids;              // derived, n_tri x 2
  Eigen::VectorXd areas;                  // derived, n_tri

  void finalize() {
    const auto n = static_cast<Eigen::Index>(tris.size());
    centroids.resize(n, 2);
    areas.resize(n);
    for (Eigen::Index t = 0; t < n; ++t) {
      const auto& tri = tris[static_cast<std::size_t>(t)];
      const Eigen::Vector2d a = vertices.row(tri[0]);
      const Eigen::Vector2d b = vertices.row(tri[1]);
      const Eigen::Vector2d c = vertices.row(tri[2]);
      centroids.row(t) = (a + b + c) / 3.0;
      areas[t] = 0.5 * ((b.x() - a.x()) * (c.y() - a.y()) - (c.x() - a.x()) * (b.y() - a.y()));
      require(areas[t] > 0.0, "TriangleMesh: nonpositive area (orientation?)");
    }
  }

  Eigen::Index size() const { return areas.size(); }
  double total_area() const { return areas.sum(); }

  PointSet as_pointset() const {
    PointSet ps;
    ps.points = centroids;
    ps.weights = areas;
    ps.tag = RegionTag::domain;
    return ps;
  }
};

// Structured triangulation of [x0,x1]x[y0,y1], two triangles per cell. Grid
// lines land exactly on cell boundaries, so a slit along a grid line is never
// straddled.
inline TriangleMesh structured_rect_mesh(double x0, double x1, double y0, double y1, int nx,
                                         int ny) {
  require(nx >= 1 && ny >= 1, "structured_rect_mesh: need at least one cell");
  TriangleMesh m;
  m.vertices.resize((nx + 1) * (ny + 1), 2);
  for (int j = 0; j <= ny; ++j)
    for (int i = 0; i <= nx; ++i) {
      m.vertices(j * (nx + 1) + i, 0) = x0 + (x1 - x0) * i / nx;
      m.vertices(j * (nx + 1) + i, 1) = y0 + (y1 - y0) * j / ny;
    }
  auto vid = [nx](int i, int j) { return j * (nx + 1) + i; };
  for (int j = 0; j < ny; ++j)
    for (int i = 0; i < nx; ++i) {
      m.tris.push_back({vid(i, j), vid(i + 1, j), vid(i + 1, j + 1)});
      m.tris.push_back({vid(i, j), vid(i + 1, j + 1), vid(i, j + 1)});
    }
  m.finalize();
  return m;
}

// Structured triangulation of the image of [0,1]^2 under a smooth mapping
// (used for blended/polar regions such as the quarter plate with a hole).
template <class F>
TriangleMesh mapped_mesh(F&& map, int ns, int nt) {
  TriangleMesh m;
  m.vertices.resize((ns + 1) * (nt + 1), 2);
  for (int j = 0; j <= nt; ++j)
    for (int i = 0; i <= ns; ++i) {
      const Eigen::Vector2d p = map(static_cast<double>(i) / ns, static_cast<double>(j) / nt);
      m.vertices.row(j * (ns + 1) + i) = p;
    }
  auto vid = [ns](int i, int j) { return j * (ns + 1) + i; };
  for (int j = 0; j < nt; ++j)
    for (int i = 0; i < ns; ++i) {
      m.tris.push_back({vid(i, j), vid(i + 1, j), vid(i + 1, j + 1)});
      m.tris.push_back({vid(i, j), vid(i + 1, j + 1), vid(i, j + 1)});
    }
  m.finalize();
  return m;
}

// Parametric boundary piece with the source point at its parametric center.
// Arclength parameter t in [-a, a].
struct BoundarySegment {
  enum class Kind { line, arc };
  Kind kind = Kind::line;
  Eigen::Vector2d p0{0, 0}, p1{0, 0};  // line endpoints
  Eigen::Vector2d normal{0, 0};        // line outward normal (unit)
  Eigen::Vector2d arc_center{0, 0};
  double arc_radius = 0.0;
  double ang0 = 0.0, ang1 = 0.0;  // arc angle range (CCW if ang1 > ang0)
  double normal_sign = 1.0;       // arc: +1 radial outward, -1 inward

  static BoundarySegment line(const Eigen::Vector2d& a, const Eigen::Vector2d& b,
                              const Eigen::Vector2d& outward_normal) {
    BoundarySegment s;
    s.kind = Kind::line;
    s.p0 = a;
    s.p1 = b;
    s.normal = outward_normal.normalized();
    return s;
  }

  static BoundarySegment arc(const Eigen::Vector2d& center, double radius, double a0, double a1,
                             double normal_sign) {
    require(radius > 0.0, "BoundarySegment::arc: radius <= 0");
    BoundarySegment s;
    s.kind = Kind::arc;
    s.arc_center = center;
    s.arc_radius = radius;
    s.ang0 = a0;
    s.ang1 = a1;
    s.normal_sign = normal_sign;
    return s;
  }

  double length() const {
    return kind == Kind::line ? (p1 - p0).norm() : arc_radius * std::abs(ang1 - ang0);
  }
  double half_length() const { return 0.5 * length(); }

  Eigen::Vector2d source_point() const { return point_at(0.0); }

  Eigen::Vector2d point_at(double t) const {
    if (kind == Kind::line) {
      const double s = 0.5 + t / length();
      return p0 + s * (p1 - p0);
    }
    const double ang = angle_at(t);
    return arc_center + arc_radius * Eigen::Vector2d(std::cos(ang), std::sin(ang));
  }

  Eigen::Vector2d normal_at(double t) const {
    if (kind == Kind::line) return normal;
    const double ang = angle_at(t);
    return normal_sign * Eigen::Vector2d(std::cos(ang), std::sin(ang));
  }

  double angle_at(double t) const {
    const double dir = ang1 > ang0 ? 1.0 : -1.0;
    return 0.5 * (ang0 + ang1) + dir * t / arc_radius;
  }

  // signed curvature seen by the in-domain side (0 for lines)
  double curvature() const {
    if (kind == Kind::line) return 0.0;
    return normal_sign / arc_radius;
  }
};

// -- delimited text import/export: "x y [w]" per row ---------------------------

inline void write_pointset(std::ostream& os, const PointSet& ps) {
  os.precision(17);
  for (Eigen::Index i = 0; i < ps.size(); ++i) {
    for (int d = 0; d < ps.dim(); ++d) os << (d ? " " : "") << ps.points(i, d);
    os << ' ' << ps.weights[i] << '\n';
  }
}

inline PointSet read_pointset(std::istream& is, int dim = 2, RegionTag tag = RegionTag::domain) {
  std::vector<double> vals;
  std::string lne;
  int rows = 0;
  while (std::getline(is, lne)) {
    if (lne.empty() || lne[0] == '#') continue;
    std::istringstream ls(lne);
    double v;
    int got = 0;
    while (ls >> v) {
      vals.push_back(v);
      ++got;
    }
    require(got == dim || got == dim + 1, "read_pointset: malformed row");
    if (got == dim) vals.push_back(1.0);
    ++rows;
  }
  PointSet ps;
  ps.tag = tag;
  ps.points.resize(rows, dim);
  ps.weights.resize(rows);
  for (int i = 0; i < rows; ++i) {
    for (int d = 0; d < dim; ++d) ps.points(i, d) = vals[static_cast<std::size_t>(i) * (dim + 1) + d];
    ps.weights[i] = vals[static_cast<std::size_t>(i) * (dim + 1) + dim];
  }
  return ps;
}

}  // namespace kinn
