#ifndef EMSCAT_MESH_HPP
#define EMSCAT_MESH_HPP

#include <array>
#include <iosfwd>
#include <vector>

#include "emscat/types.hpp"

namespace emscat {

/// Closed triangulated surface with outward orientation.
///
/// Derived per-face data (normal, area, centroid) and the enclosed volume
/// are kept in sync by the builders. `a` is the characteristic size: half
/// the diameter of the body the mesh discretizes.
struct SurfaceMesh {
  std::vector<Vec3> vertices;
  std::vector<std::array<int, 3>> faces;
  std::vector<Vec3> normals;    // unit, outward
  std::vector<double> areas;
  std::vector<Vec3> centroids;
  double volume = 0.0;
  double a = 0.0;

  int face_count() const { return static_cast<int>(faces.size()); }
  double surface_area() const;
};

/// Geodesic sphere of radius a centered at the origin; 20 * 4^refinement
/// faces. refinement must be in [0, 8].
SurfaceMesh make_icosphere(double a, int refinement);

/// Icosphere mapped onto the axis-aligned ellipsoid with the given
/// semi-axes; a = max semi-axis.
SurfaceMesh make_ellipsoid(const Vec3& semi_axes, int refinement);

/// Uniformly scaled copy (vertices and a multiplied by factor > 0).
SurfaceMesh scaled(const SurfaceMesh& mesh, double factor);

/// Half the maximal pairwise vertex distance (measured, not nominal).
double half_diameter(const SurfaceMesh& mesh);

/// Throws ConfigError unless every directed edge is matched by its reverse
/// exactly once (closed orientable surface), volume > 0, and the
/// area-weighted normals sum to zero within 1e-10 * |S|.
void validate_closed(const SurfaceMesh& mesh);

/// OFF-format export (counts header, vertex lines, face lines).
void write_off(const SurfaceMesh& mesh, std::ostream& os);

}  // namespace emscat

#endif
