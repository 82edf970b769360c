#include "emscat/mesh.hpp"

#include <cmath>
#include <cstdint>
#include <map>
#include <ostream>
#include <utility>

namespace emscat {

namespace {

void refresh_derived(SurfaceMesh& mesh) {
  const auto nf = mesh.faces.size();
  mesh.normals.resize(nf);
  mesh.areas.resize(nf);
  mesh.centroids.resize(nf);
  double signed_volume = 0.0;
  for (std::size_t f = 0; f < nf; ++f) {
    const Vec3& v0 = mesh.vertices[mesh.faces[f][0]];
    const Vec3& v1 = mesh.vertices[mesh.faces[f][1]];
    const Vec3& v2 = mesh.vertices[mesh.faces[f][2]];
    const Vec3 cross = (v1 - v0).cross(v2 - v0);
    const double area2 = cross.norm();
    mesh.areas[f] = 0.5 * area2;
    mesh.normals[f] = cross / area2;
    mesh.centroids[f] = (v0 + v1 + v2) / 3.0;
    signed_volume += v0.cross(v1).dot(v2);
  }
  signed_volume /= 6.0;
  if (signed_volume < 0.0) {
    // inward winding; flip every face once and recompute
    for (auto& face : mesh.faces) std::swap(face[1], face[2]);
    refresh_derived(mesh);
    return;
  }
  mesh.volume = signed_volume;
}

SurfaceMesh unit_icosphere(int refinement) {
  if (refinement < 0) throw ConfigError("icosphere: refinement must be >= 0");
  if (refinement > 8) throw ConfigError("icosphere: refinement > 8 exceeds mesh-size guard");

  const double t = (1.0 + std::sqrt(5.0)) / 2.0;
  SurfaceMesh mesh;
  mesh.vertices = {
      {-1, t, 0}, {1, t, 0},  {-1, -t, 0}, {1, -t, 0}, {0, -1, t},  {0, 1, t},
      {0, -1, -t}, {0, 1, -t}, {t, 0, -1}, {t, 0, 1},  {-t, 0, -1}, {-t, 0, 1}};
  mesh.faces = {{0, 11, 5}, {0, 5, 1},  {0, 1, 7},   {0, 7, 10}, {0, 10, 11},
                {1, 5, 9},  {5, 11, 4}, {11, 10, 2}, {10, 7, 6}, {7, 1, 8},
                {3, 9, 4},  {3, 4, 2},  {3, 2, 6},   {3, 6, 8},  {3, 8, 9},
                {4, 9, 5},  {2, 4, 11}, {6, 2, 10},  {8, 6, 7},  {9, 8, 1}};
  for (auto& v : mesh.vertices) v.normalize();

  for (int level = 0; level < refinement; ++level) {
    std::map<std::pair<int, int>, int> midpoint;
    auto mid = [&](int i, int j) {
      const auto key = std::minmax(i, j);
      auto it = midpoint.find(key);
      if (it != midpoint.end()) return it->second;
      const int idx = static_cast<int>(mesh.vertices.size());
      mesh.vertices.push_back((mesh.vertices[i] + mesh.vertices[j]).normalized());
      midpoint.emplace(key, idx);
      return idx;
    };
    std::vector<std::array<int, 3>> refined;
    refined.reserve(mesh.faces.size() * 4);
    for (const auto& f : mesh.faces) {
      const int a = mid(f[0], f[1]), b = mid(f[1], f[2]), c = mid(f[2], f[0]);
      refined.push_back({f[0], a, c});
      refined.push_back({f[1], b, a});
      refined.push_back({f[2], c, b});
      refined.push_back({a, b, c});
    }
    mesh.faces = std::move(refined);
  }
  return mesh;
}

}  // namespace

double SurfaceMesh::surface_area() const {
  double s = 0.0;
  for (double area : areas) s += area;
  return s;
}

SurfaceMesh make_icosphere(double a, int refinement) {
  if (!(a > 0.0)) throw ConfigError("icosphere: radius must be > 0");
  SurfaceMesh mesh = unit_icosphere(refinement);
  for (auto& v : mesh.vertices) v *= a;
  mesh.a = a;
  refresh_derived(mesh);
  return mesh;
}

SurfaceMesh make_ellipsoid(const Vec3& semi_axes, int refinement) {
  if (!(semi_axes.minCoeff() > 0.0))
    throw ConfigError("ellipsoid: all semi-axes must be > 0");
  SurfaceMesh mesh = unit_icosphere(refinement);
  for (auto& v : mesh.vertices) v = v.cwiseProduct(semi_axes);
  mesh.a = semi_axes.maxCoeff();
  refresh_derived(mesh);
  return mesh;
}

SurfaceMesh scaled(const SurfaceMesh& mesh, double factor) {
  if (!(factor > 0.0)) throw ConfigError("mesh scaling factor must be > 0");
  SurfaceMesh out = mesh;
  for (auto& v : out.vertices) v *= factor;
  out.a = mesh.a * factor;
  refresh_derived(out);
  return out;
}

double half_diameter(const SurfaceMesh& mesh) {
  double max2 = 0.0;
  const auto n = mesh.vertices.size();
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      max2 = std::max(max2, (mesh.vertices[i] - mesh.vertices[j]).squaredNorm());
  return 0.5 * std::sqrt(max2);
}

void validate_closed(const SurfaceMesh& mesh) {
  std::map<std::pair<int, int>, int> directed;
  for (const auto& f : mesh.faces)
    for (int e = 0; e < 3; ++e)
      if (++directed[{f[e], f[(e + 1) % 3]}] > 1)
        throw ConfigError("mesh: duplicated directed edge (non-manifold or inconsistent winding)");
  for (const auto& [edge, count] : directed) {
    auto rev = directed.find({edge.second, edge.first});
    if (rev == directed.end())
      throw ConfigError("mesh: unmatched edge (surface not closed)");
  }
  if (!(mesh.volume > 0.0)) throw ConfigError("mesh: nonpositive enclosed volume");
  if (!(mesh.a > 0.0)) throw ConfigError("mesh: nonpositive characteristic size");
  Vec3 sum = Vec3::Zero();
  for (std::size_t f = 0; f < mesh.faces.size(); ++f)
    sum += mesh.areas[f] * mesh.normals[f];
  if (sum.norm() > 1e-10 * mesh.surface_area())
    throw ConfigError("mesh: area-weighted normals do not sum to zero");
}

void write_off(const SurfaceMesh& mesh, std::ostream& os) {
  os << "OFF\n" << mesh.vertices.size() << ' ' << mesh.faces.size() << " 0\n";
  char line[128];
  for (const auto& v : mesh.vertices) {
    std::snprintf(line, sizeof line, "%.17g %.17g %.17g\n", v.x(), v.y(), v.z());
    os << line;
  }
  for (const auto& f : mesh.faces) os << "3 " << f[0] << ' ' << f[1] << ' ' << f[2] << '\n';
}

}  // namespace emscat
