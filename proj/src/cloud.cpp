#include "emscat/cloud.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>

#include "emscat/csv.hpp"

namespace emscat {

CubePartition make_partition(const BoxRegion& box, double side) {
  if (!(side > 0.0)) throw ConfigError("partition: cube side must be > 0");
  CubePartition part;
  part.box = box;
  part.side = side;
  for (int axis = 0; axis < 3; ++axis) {
    const double extent = box.extent[axis];
    if (!(extent > 0.0)) throw ConfigError("partition: box extents must be > 0");
    const int n = static_cast<int>(std::lround(extent / side));
    if (n < 1 || std::abs(n * side - extent) > 1e-6 * side)
      throw ConfigError("partition: cube side must divide the box extents");
    part.cells[axis] = n;
  }
  const Vec3 cell(box.extent[0] / part.cells[0], box.extent[1] / part.cells[1],
                  box.extent[2] / part.cells[2]);
  const double cell_volume = cell.prod();
  for (int i = 0; i < part.cells[0]; ++i)
    for (int j = 0; j < part.cells[1]; ++j)
      for (int l = 0; l < part.cells[2]; ++l) {
        part.centers.push_back(box.corner +
                               Vec3((i + 0.5) * cell[0], (j + 0.5) * cell[1], (l + 0.5) * cell[2]));
        part.volumes.push_back(cell_volume);
      }
  return part;
}

namespace {

// Largest-remainder rounding: counts sum to round(sum of quotas), each
// count within one of its quota.
std::vector<long> round_quotas(const std::vector<double>& quotas) {
  std::vector<long> counts(quotas.size());
  double total = 0.0;
  for (double q : quotas) total += q;
  long target = std::lround(total);
  long assigned = 0;
  std::vector<std::pair<double, std::size_t>> remainders(quotas.size());
  for (std::size_t p = 0; p < quotas.size(); ++p) {
    counts[p] = static_cast<long>(std::floor(quotas[p]));
    assigned += counts[p];
    remainders[p] = {quotas[p] - std::floor(quotas[p]), p};
  }
  std::stable_sort(remainders.begin(), remainders.end(),
                   [](const auto& lhs, const auto& rhs) { return lhs.first > rhs.first; });
  for (std::size_t r = 0; r < remainders.size() && assigned < target; ++r, ++assigned)
    ++counts[remainders[r].second];
  return counts;
}

}  // namespace

ParticleCloud place_particles(const CloudConfig& cfg, double cube_side) {
  if (!(cfg.a > 0.0)) throw ConfigError("cloud: particle size a must be > 0");
  if (cfg.kappa < 0.0 || cfg.kappa >= 1.0) throw ConfigError("cloud: kappa must lie in [0,1)");
  if (!cfg.number_density) throw ConfigError("cloud: number density N(x) not set");

  ParticleCloud cloud;
  cloud.config = cfg;
  cloud.partition = make_partition(cfg.region, cube_side);
  const CubePartition& part = cloud.partition;

  const double exponent = cfg.kind == ParticleKind::PerfectConductor ? 3.0 : 2.0 - cfg.kappa;
  const double per_particle_measure = std::pow(cfg.a, exponent);

  std::vector<double> quotas(part.count());
  for (int p = 0; p < part.count(); ++p) {
    const double density = cfg.number_density(part.centers[p]);
    if (density < 0.0) throw ConfigError("cloud: N(x) < 0 at a cube center");
    quotas[p] = density * part.volumes[p] / per_particle_measure;
  }
  const std::vector<long> counts = round_quotas(quotas);

  const Vec3 cell(part.box.extent[0] / part.cells[0], part.box.extent[1] / part.cells[1],
                  part.box.extent[2] / part.cells[2]);
  for (int p = 0; p < part.count(); ++p) {
    const long count = counts[p];
    if (count == 0) continue;
    int lattice = 1;  // smallest lattice with room for count points
    while (static_cast<long>(lattice) * lattice * lattice < count) ++lattice;
    lattice = std::max(lattice, cfg.sublattice);
    const double spacing = cell.minCoeff() / lattice;
    if (spacing <= 2.0 * cfg.a)
      throw RegimeError("cloud: packing too dense (sub-lattice spacing <= 2a)");
    if (static_cast<long>(lattice) * lattice * lattice < count)
      throw RegimeError("cloud: per-cube count exceeds sub-lattice capacity");

    // Partial fills take lattice sites center-out so the occupied set stays
    // balanced around the cube center; a lexicographic fill would bias the
    // cube's mass toward one face and spoil the cube-reduction step.
    std::vector<std::array<int, 3>> slots;
    slots.reserve(static_cast<std::size_t>(lattice) * lattice * lattice);
    for (int i = 0; i < lattice; ++i)
      for (int j = 0; j < lattice; ++j)
        for (int l = 0; l < lattice; ++l) slots.push_back({i, j, l});
    const double mid = (lattice - 1) / 2.0;
    std::stable_sort(slots.begin(), slots.end(),
                     [mid](const std::array<int, 3>& lhs, const std::array<int, 3>& rhs) {
                       auto r2 = [mid](const std::array<int, 3>& s) {
                         double acc = 0.0;
                         for (int axis = 0; axis < 3; ++axis)
                           acc += (s[axis] - mid) * (s[axis] - mid);
                         return acc;
                       };
                       return r2(lhs) < r2(rhs);
                     });

    const Vec3 cube_corner = part.centers[p] - 0.5 * cell;
    for (long idx = 0; idx < count; ++idx) {
      const auto& slot = slots[idx];
      const Vec3 pos = cube_corner + Vec3((slot[0] + 0.5) * cell[0] / lattice,
                                          (slot[1] + 0.5) * cell[1] / lattice,
                                          (slot[2] + 0.5) * cell[2] / lattice);
      SmallParticle particle;
      particle.center = pos;
      particle.a = cfg.a;
      if (cfg.kind == ParticleKind::PerfectConductor) {
        particle.kind = PecKind{cfg.shape.c_d, cfg.c_gamma};
      } else {
        cplx h = cfg.impedance_factor ? cfg.impedance_factor(pos) : cplx(0.0);
        if (h.real() < 0.0) throw ConfigError("cloud: Re h(x) < 0 at a particle center");
        particle.kind = ImpedanceKind{h, cfg.kappa, cfg.shape.c_s, cfg.shape.tau,
                                      cfg.tau1_override};
      }
      cloud.particles.push_back(particle);
      cloud.cube_index.push_back(p);
    }
  }

  const int m = cloud.size();
  double d2_min = std::numeric_limits<double>::infinity();
  for (int i = 0; i < m; ++i)
    for (int j = i + 1; j < m; ++j)
      d2_min = std::min(d2_min,
                        (cloud.particles[i].center - cloud.particles[j].center).squaredNorm());
  cloud.d_min = m > 1 ? std::sqrt(d2_min) : std::numeric_limits<double>::infinity();
  if (m > 1 && !(cloud.d_min > 0.0)) throw ConfigError("cloud: coincident particle centers");
  return cloud;
}

void write_cloud_snapshot(const ParticleCloud& cloud, std::ostream& os) {
  os << "m,x,y,z,a,kappa,h_re,h_im\n";
  for (int m = 0; m < cloud.size(); ++m) {
    const SmallParticle& p = cloud.particles[m];
    const cplx h = p.is_pec() ? cplx(0.0) : p.impedance().h;
    const double kappa = p.is_pec() ? 0.0 : p.impedance().kappa;
    os << m << ',' << fmt(p.center.x()) << ',' << fmt(p.center.y()) << ',' << fmt(p.center.z())
       << ',' << fmt(p.a) << ',' << fmt(kappa) << ',' << fmt(h.real()) << ',' << fmt(h.imag())
       << '\n';
  }
}

}  // namespace emscat
