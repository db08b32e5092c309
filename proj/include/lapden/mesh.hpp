#pragma once

#include <Eigen/Core>
#include <Eigen/Geometry>

#include <array>
#include <cmath>
#include <cstdint>
#include <map>
#include <numbers>
#include <ostream>
#include <stdexcept>
#include <utility>
#include <vector>

namespace lapden {

inline constexpr double kPi = std::numbers::pi;

enum class ManifoldKind { Sphere, Hemisphere, Torus };

/// Triangulated surface. Sphere/hemisphere meshes live on the unit sphere in
/// R^3; torus meshes are periodic grids on [0,2pi)^2 stored with z = 0.
struct Mesh {
  ManifoldKind kind = ManifoldKind::Sphere;
  Eigen::Matrix<double, Eigen::Dynamic, 3> vertices;
  Eigen::Matrix<int, Eigen::Dynamic, 3> triangles;
  Eigen::VectorXd vertex_areas;    // barycentric lumped area per vertex
  Eigen::VectorXd triangle_areas;
  bool periodic = false;
  bool has_boundary = false;
  double period = 0.0;  // torus only

  int vertex_count() const { return static_cast<int>(vertices.rows()); }
  int triangle_count() const { return static_cast<int>(triangles.rows()); }
  double total_area() const { return triangle_areas.sum(); }

  double analytic_area() const {
    switch (kind) {
      case ManifoldKind::Sphere: return 4.0 * kPi;
      case ManifoldKind::Hemisphere: return 2.0 * kPi;
      case ManifoldKind::Torus: return 4.0 * kPi * kPi;
    }
    return 0.0;
  }

  /// Triangle corner positions. On the torus the second and third corners are
  /// unwrapped to the periodic image nearest the first corner.
  std::array<Eigen::Vector3d, 3> corners(int t) const {
    std::array<Eigen::Vector3d, 3> p;
    for (int k = 0; k < 3; ++k) p[k] = vertices.row(triangles(t, k));
    if (periodic) {
      for (int k = 1; k < 3; ++k)
        for (int c = 0; c < 2; ++c) {
          double d = p[k][c] - p[0][c];
          if (d > 0.5 * period) p[k][c] -= period;
          if (d < -0.5 * period) p[k][c] += period;
        }
    }
    return p;
  }

  double max_edge_length() const {
    double m = 0.0;
    for (int t = 0; t < triangle_count(); ++t) {
      auto p = corners(t);
      for (int k = 0; k < 3; ++k)
        m = std::max(m, (p[k] - p[(k + 1) % 3]).norm());
    }
    return m;
  }
};

namespace detail {

inline void compute_areas(Mesh& mesh) {
  const int nt = mesh.triangle_count();
  mesh.triangle_areas.resize(nt);
  mesh.vertex_areas = Eigen::VectorXd::Zero(mesh.vertex_count());
  for (int t = 0; t < nt; ++t) {
    auto p = mesh.corners(t);
    double a = 0.5 * (p[1] - p[0]).cross(p[2] - p[0]).norm();
    if (!(a > 0.0))
      throw std::runtime_error("mesh has a degenerate triangle: " +
                               std::to_string(t));
    mesh.triangle_areas[t] = a;
    for (int k = 0; k < 3; ++k)
      mesh.vertex_areas[mesh.triangles(t, k)] += a / 3.0;
  }
}

// Orient every face so its normal points away from the origin (closed
// surfaces centered at the origin).
inline void orient_outward(std::vector<std::array<int, 3>>& faces,
                           const std::vector<Eigen::Vector3d>& verts) {
  for (auto& f : faces) {
    Eigen::Vector3d a = verts[f[0]], b = verts[f[1]], c = verts[f[2]];
    if ((b - a).cross(c - a).dot(a + b + c) < 0.0) std::swap(f[1], f[2]);
  }
}

inline void subdivide_project(std::vector<Eigen::Vector3d>& verts,
                              std::vector<std::array<int, 3>>& faces) {
  std::map<std::pair<int, int>, int> midpoint;
  auto mid = [&](int i, int j) {
    auto key = std::minmax(i, j);
    auto it = midpoint.find(key);
    if (it != midpoint.end()) return it->second;
    Eigen::Vector3d m = (verts[i] + verts[j]).normalized();
    int idx = static_cast<int>(verts.size());
    verts.push_back(m);
    midpoint.emplace(key, idx);
    return idx;
  };
  std::vector<std::array<int, 3>> out;
  out.reserve(4 * faces.size());
  for (const auto& f : faces) {
    int ab = mid(f[0], f[1]), bc = mid(f[1], f[2]), ca = mid(f[2], f[0]);
    out.push_back({f[0], ab, ca});
    out.push_back({f[1], bc, ab});
    out.push_back({f[2], ca, bc});
    out.push_back({ab, bc, ca});
  }
  faces = std::move(out);
}

inline Mesh finish_sphere_mesh(std::vector<Eigen::Vector3d> verts,
                               std::vector<std::array<int, 3>> faces,
                               ManifoldKind kind, bool has_boundary) {
  Mesh mesh;
  mesh.kind = kind;
  mesh.has_boundary = has_boundary;
  mesh.vertices.resize(static_cast<int>(verts.size()), 3);
  for (size_t i = 0; i < verts.size(); ++i)
    mesh.vertices.row(static_cast<int>(i)) = verts[i];
  mesh.triangles.resize(static_cast<int>(faces.size()), 3);
  for (size_t i = 0; i < faces.size(); ++i)
    mesh.triangles.row(static_cast<int>(i)) =
        Eigen::RowVector3i(faces[i][0], faces[i][1], faces[i][2]);
  compute_areas(mesh);
  return mesh;
}

}  // namespace detail

/// Icosphere with 20*4^level triangles, a vertex at each pole.
inline Mesh build_icosphere(int level) {
  if (level < 0) throw std::invalid_argument("icosphere level must be >= 0");
  if (level > 8) throw std::invalid_argument("icosphere level > 8 refused");

  std::vector<Eigen::Vector3d> verts;
  verts.emplace_back(0, 0, 1);
  const double zr = 1.0 / std::sqrt(5.0), rr = 2.0 / std::sqrt(5.0);
  for (int k = 0; k < 5; ++k) {
    double a = 2.0 * kPi * k / 5.0;
    verts.emplace_back(rr * std::cos(a), rr * std::sin(a), zr);
  }
  for (int k = 0; k < 5; ++k) {
    double a = 2.0 * kPi * k / 5.0 + kPi / 5.0;
    verts.emplace_back(rr * std::cos(a), rr * std::sin(a), -zr);
  }
  verts.emplace_back(0, 0, -1);

  std::vector<std::array<int, 3>> faces;
  for (int k = 0; k < 5; ++k) {
    int u0 = 1 + k, u1 = 1 + (k + 1) % 5;
    int l0 = 6 + k, l1 = 6 + (k + 1) % 5;
    faces.push_back({0, u0, u1});
    faces.push_back({u0, l0, u1});
    faces.push_back({u1, l0, l1});
    faces.push_back({11, l1, l0});
  }
  detail::orient_outward(faces, verts);
  for (int l = 0; l < level; ++l) detail::subdivide_project(verts, faces);
  return detail::finish_sphere_mesh(std::move(verts), std::move(faces),
                                    ManifoldKind::Sphere, false);
}

/// Upper half of an octahedral sphere; the equator stays exactly at z = 0, so
/// the boundary is a totally geodesic circle.
inline Mesh build_hemisphere(int level) {
  if (level < 0) throw std::invalid_argument("hemisphere level must be >= 0");
  if (level > 8) throw std::invalid_argument("hemisphere level > 8 refused");
  std::vector<Eigen::Vector3d> verts = {
      {0, 0, 1}, {1, 0, 0}, {0, 1, 0}, {-1, 0, 0}, {0, -1, 0}};
  std::vector<std::array<int, 3>> faces = {
      {0, 1, 2}, {0, 2, 3}, {0, 3, 4}, {0, 4, 1}};
  detail::orient_outward(faces, verts);
  for (int l = 0; l < level; ++l) detail::subdivide_project(verts, faces);
  return detail::finish_sphere_mesh(std::move(verts), std::move(faces),
                                    ManifoldKind::Hemisphere, true);
}

/// N x N periodic grid on [0,2pi)^2, each cell split into two triangles.
inline Mesh build_torus_grid(int N) {
  if (N < 8) throw std::invalid_argument("torus grid N must be >= 8");
  if (N % 2 != 0) throw std::invalid_argument("torus grid N must be even");

  Mesh mesh;
  mesh.kind = ManifoldKind::Torus;
  mesh.periodic = true;
  mesh.period = 2.0 * kPi;
  const double step = 2.0 * kPi / N;

  mesh.vertices.resize(N * N, 3);
  for (int i = 0; i < N; ++i)
    for (int j = 0; j < N; ++j)
      mesh.vertices.row(i + N * j) = Eigen::RowVector3d(i * step, j * step, 0);

  mesh.triangles.resize(2 * N * N, 3);
  int t = 0;
  auto idx = [N](int i, int j) { return ((i + N) % N) + N * ((j + N) % N); };
  for (int i = 0; i < N; ++i)
    for (int j = 0; j < N; ++j) {
      mesh.triangles.row(t++) =
          Eigen::RowVector3i(idx(i, j), idx(i + 1, j), idx(i + 1, j + 1));
      mesh.triangles.row(t++) =
          Eigen::RowVector3i(idx(i, j), idx(i + 1, j + 1), idx(i, j + 1));
    }
  detail::compute_areas(mesh);
  return mesh;
}

/// Great-circle distance on the unit sphere.
inline double geodesic_distance(const Eigen::Vector3d& p,
                                const Eigen::Vector3d& q) {
  if (std::abs(p.norm() - 1.0) > 1e-9 || std::abs(q.norm() - 1.0) > 1e-9)
    throw std::invalid_argument("geodesic_distance requires unit vectors");
  double c = p.dot(q);
  return std::acos(std::clamp(c, -1.0, 1.0));
}

struct RadialHessian {
  double radial;      // f''(r)
  double tangential;  // f'(r) cot r
};

/// Hessian eigenvalues of a radial function f(d(x0, .)) on the unit sphere:
/// f''(r) in the radial direction, f'(r) cot r in any tangential direction.
inline RadialHessian radial_hessian_sphere(double f_prime, double f_second,
                                           double r) {
  if (r < 1e-6 || r > kPi - 1e-6)
    throw std::invalid_argument(
        "radial_hessian_sphere: r too close to 0 or the cut locus");
  return {f_second, f_prime / std::tan(r)};
}

/// Analytic Ricci data for the two model surfaces.
struct CurvatureData {
  ManifoldKind kind;
  double kappa;  // Ricci lower bound

  // Ric(v, v) at point p for tangent v.
  double ricci(const Eigen::Vector3d& p, const Eigen::Vector3d& v) const {
    (void)p;
    if (kind == ManifoldKind::Torus) return 0.0;
    return v.squaredNorm();  // unit sphere: Ric = g
  }
};

inline CurvatureData curvature_data(ManifoldKind kind) {
  return {kind, kind == ManifoldKind::Torus ? 0.0 : 1.0};
}

inline void write_off(const Mesh& mesh, std::ostream& os) {
  os << "OFF\n"
     << mesh.vertex_count() << ' ' << mesh.triangle_count() << " 0\n";
  for (int v = 0; v < mesh.vertex_count(); ++v)
    os << mesh.vertices(v, 0) << ' ' << mesh.vertices(v, 1) << ' '
       << mesh.vertices(v, 2) << '\n';
  for (int t = 0; t < mesh.triangle_count(); ++t)
    os << "3 " << mesh.triangles(t, 0) << ' ' << mesh.triangles(t, 1) << ' '
       << mesh.triangles(t, 2) << '\n';
}

}  // namespace lapden
