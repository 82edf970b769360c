#include "emscat/manybody.hpp"

#include <cmath>
#include <ostream>

#include "emscat/concurrency.hpp"
#include "emscat/csv.hpp"
#include "emscat/kernels.hpp"
#include "emscat/linalg.hpp"

namespace emscat {

DipoleSystem assemble_dipole_system(const std::vector<Vec3>& centers,
                                    const std::vector<CMat3>& moments,
                                    const WaveContext& ctx) {
  if (centers.size() != moments.size())
    throw std::invalid_argument("assemble_dipole_system: size mismatch");
  const int n = static_cast<int>(centers.size());
  validate(ctx);
  DipoleSystem sys;
  sys.centers = centers;
  sys.moments = moments;
  sys.matrix = Eigen::MatrixXcd::Identity(3 * n, 3 * n);
  sys.rhs.resize(3 * n);
  parallel_for(n, [&](std::size_t j) {
    for (int m = 0; m < n; ++m) {
      if (m == static_cast<int>(j)) continue;
      if (!((centers[j] - centers[m]).squaredNorm() > 0.0))
        throw ConfigError("assemble_dipole_system: coincident centers");
      sys.matrix.block<3, 3>(3 * j, 3 * m) =
          -double_curl_matrix(ctx.k, centers[j], centers[m]) * moments[m];
    }
    sys.rhs.segment<3>(3 * j) = plane_wave_curl(ctx, centers[j]);
  });
  return sys;
}

DipoleSystem assemble_full(const ParticleCloud& cloud, const WaveContext& ctx) {
  std::vector<Vec3> centers(cloud.size());
  std::vector<CMat3> moments(cloud.size());
  for (int m = 0; m < cloud.size(); ++m) {
    centers[m] = cloud.particles[m].center;
    moments[m] = cloud.particles[m].moment_matrix(ctx);
  }
  return assemble_dipole_system(centers, moments, ctx);
}

CMat3 cell_moment_matrix(const GridCellParams& params, cplx h, double weight,
                         const WaveContext& ctx) {
  if (params.kind == ParticleKind::PerfectConductor)
    return (-params.c_d * params.c_gamma * weight) * CMat3::Identity();
  const CMat3 tau =
      params.tau1_override ? *params.tau1_override : params.tau.cast<cplx>().eval();
  return (-h * params.c0 * weight / (iu * ctx.omega * ctx.mu)) * tau;
}

DipoleSystem reduce_to_cubes(const ParticleCloud& cloud, const WaveContext& ctx,
                             double min_side_spacing_ratio) {
  const CubePartition& part = cloud.partition;
  if (cloud.size() > 1 && part.side < min_side_spacing_ratio * cloud.d_min * (1.0 - 1e-12))
    throw RegimeError("reduce_to_cubes: cube side not large enough relative to spacing (need b/d >= " +
                      std::to_string(min_side_spacing_ratio) + ")");

  const CloudConfig& cfg = cloud.config;
  GridCellParams params;
  params.kind = cfg.kind;
  params.c0 = cfg.shape.c_s;
  params.tau = cfg.shape.tau;
  params.tau1_override = cfg.tau1_override;
  params.c_d = cfg.shape.c_d;
  params.c_gamma = cfg.c_gamma;

  std::vector<CMat3> moments(part.count());
  for (int p = 0; p < part.count(); ++p) {
    const double weight = cfg.number_density(part.centers[p]) * part.volumes[p];
    const cplx h = cfg.impedance_factor ? cfg.impedance_factor(part.centers[p]) : cplx(0.0);
    moments[p] = cell_moment_matrix(params, h, weight, ctx);
  }
  return assemble_dipole_system(part.centers, moments, ctx);
}

CloudSolution solve_system(const DipoleSystem& system, SystemLevel level,
                           double exclusion_radius) {
  CloudSolution sol;
  sol.level = level;
  sol.centers = system.centers;
  sol.moments = system.moments;
  sol.exclusion_radius = exclusion_radius;

  DenseSolution dense;
  try {
    dense = solve_dense(system.matrix, system.rhs);
  } catch (const NumericalError& e) {
    throw RegimeError(std::string("solve_system: ill-conditioned coupling system, the "
                                  "a << d regime is likely violated: ") +
                      e.what());
  }
  sol.residual = dense.residual;
  sol.rcond = dense.rcond;
  sol.a.resize(system.size());
  for (int i = 0; i < system.size(); ++i) sol.a[i] = dense.x.segment<3>(3 * i);
  return sol;
}

CVec3 evaluate_field(const CloudSolution& solution, const WaveContext& ctx, const Vec3& x) {
  CVec3 e = plane_wave(ctx, x);
  for (std::size_t i = 0; i < solution.centers.size(); ++i) {
    const double r = (x - solution.centers[i]).norm();
    if (r < solution.exclusion_radius)
      throw RegimeError("evaluate_field: probe inside the near-field exclusion radius");
    e += ccross(grad_green(ctx.k, x, solution.centers[i]), solution.dipole_moment(i));
  }
  return e;
}

CVec3 effective_field_at_particle(const CloudSolution& solution, const WaveContext& ctx,
                                  int j) {
  if (j < 0 || j >= static_cast<int>(solution.centers.size()))
    throw std::invalid_argument("effective_field_at_particle: index out of range");
  const Vec3& xj = solution.centers[j];
  CVec3 e = plane_wave(ctx, xj);
  for (std::size_t i = 0; i < solution.centers.size(); ++i) {
    if (i == static_cast<std::size_t>(j)) continue;
    e += ccross(grad_green(ctx.k, xj, solution.centers[i]), solution.dipole_moment(i));
  }
  return e;
}

CVec3 cloud_far_field(const CloudSolution& solution, const WaveContext& ctx, const Vec3& beta) {
  CVec3 amplitude = CVec3::Zero();
  for (std::size_t i = 0; i < solution.centers.size(); ++i) {
    const cplx phase = std::exp(-iu * ctx.k * cplx(beta.dot(solution.centers[i])));
    amplitude += phase * far_field_amplitude(ctx.k, solution.dipole_moment(i), beta);
  }
  return amplitude;
}

void write_field_header(std::ostream& os) {
  os << "x,y,z,ex_re,ex_im,ey_re,ey_im,ez_re,ez_im\n";
}

void write_field_row(std::ostream& os, const Vec3& x, const CVec3& e) {
  os << fmt(x.x()) << ',' << fmt(x.y()) << ',' << fmt(x.z());
  for (int c = 0; c < 3; ++c) os << ',' << fmt(e(c).real()) << ',' << fmt(e(c).imag());
  os << '\n';
}

}  // namespace emscat
