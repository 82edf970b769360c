#ifndef EMSCAT_CLOUD_HPP
#define EMSCAT_CLOUD_HPP

#include <functional>
#include <iosfwd>
#include <optional>
#include <vector>

#include "emscat/particle.hpp"
#include "emscat/shape.hpp"
#include "emscat/types.hpp"

namespace emscat {

struct BoxRegion {
  Vec3 corner = Vec3::Zero();
  Vec3 extent = Vec3::Ones();

  double volume() const { return extent.prod(); }
  Vec3 center() const { return corner + 0.5 * extent; }
};

/// Axis-aligned partition of a box into near-cubic cells of side ~ b.
struct CubePartition {
  BoxRegion box;
  std::array<int, 3> cells{1, 1, 1};
  double side = 0.0;              // nominal cube side b
  std::vector<Vec3> centers;      // cell centers x_p
  std::vector<double> volumes;    // |Delta_p|

  int count() const { return static_cast<int>(centers.size()); }
};

/// Throws ConfigError unless side divides every extent within rounding.
CubePartition make_partition(const BoxRegion& box, double side);

enum class ParticleKind { PerfectConductor, Impedance };

/// Everything needed to realize a particle cloud in a box.
struct CloudConfig {
  BoxRegion region;
  std::function<double(const Vec3&)> number_density;    // N(x) >= 0
  std::function<cplx(const Vec3&)> impedance_factor;    // h(x), Re >= 0
  double a = 0.0;
  double kappa = 0.0;
  ParticleKind kind = ParticleKind::Impedance;
  ShapeConstants shape;
  cplx c_gamma{1.0, 0.0};                // perfectly conducting clouds only
  std::optional<CMat3> tau1_override;    // impedance clouds only
  int sublattice = 0;  // per-axis points of the per-cube lattice; 0 = smallest that fits
};

struct ParticleCloud {
  CloudConfig config;
  CubePartition partition;
  std::vector<SmallParticle> particles;
  std::vector<int> cube_index;  // per particle
  double d_min = 0.0;           // true minimal pairwise center distance

  int size() const { return static_cast<int>(particles.size()); }
};

/// Partitions the region into cubes of side cube_side, computes per-cube
/// quotas  N(x_p) |Delta_p| / a^(2-kappa)  (exponent 3 for perfectly
/// conducting clouds), rounds them by largest remainder so the counts sum
/// to the global target, and places each cube's particles on a regular
/// jitter-free sub-lattice. Throws RegimeError if the lattice spacing would
/// fall to 2a or below.
ParticleCloud place_particles(const CloudConfig& cfg, double cube_side);

/// Snapshot: m, x, y, z, a, kappa, Re h, Im h.
void write_cloud_snapshot(const ParticleCloud& cloud, std::ostream& os);

}  // namespace emscat

#endif
