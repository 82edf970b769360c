#ifndef EMSCAT_MANYBODY_HPP
#define EMSCAT_MANYBODY_HPP

#include <iosfwd>
#include <vector>

#include "emscat/cloud.hpp"
#include "emscat/types.hpp"
#include "emscat/wave.hpp"

namespace emscat {

/// Linear system for the unknowns A_i = (curl E_e)(x_i): block rows
///   A_j - sum_{m != j} D(x_j, x_m) B_m A_m = (curl E_0)(x_j),
/// where D is the double-curl kernel matrix and Q_m = B_m A_m maps the
/// solved unknowns to dipole moments.
struct DipoleSystem {
  Eigen::MatrixXcd matrix;  // 3n x 3n
  Eigen::VectorXcd rhs;
  std::vector<Vec3> centers;
  std::vector<CMat3> moments;  // B_i

  int size() const { return static_cast<int>(centers.size()); }
};

enum class SystemLevel { Full, Reduced };

/// Solved unknowns plus everything needed to evaluate fields; the source
/// data is copied in, so the solution outlives the cloud it came from.
struct CloudSolution {
  SystemLevel level = SystemLevel::Full;
  std::vector<CVec3> a;  // (curl E_e)(x_i), or per-cube values when reduced
  std::vector<Vec3> centers;
  std::vector<CMat3> moments;
  double residual = 0.0;
  double rcond = 1.0;
  double exclusion_radius = 0.0;  // probes closer than this to a center are rejected

  CVec3 dipole_moment(int i) const { return moments[i] * a[i]; }
};

/// Shared assembly core used by the full system, the cube-reduced system,
/// and the limiting-equation collocation (they must coincide entrywise
/// whenever their inputs do).
DipoleSystem assemble_dipole_system(const std::vector<Vec3>& centers,
                                    const std::vector<CMat3>& moments,
                                    const WaveContext& ctx);

/// Per-shape data entering the cube-level coupling weights.
struct GridCellParams {
  ParticleKind kind = ParticleKind::Impedance;
  double c0 = 4.0 * pi;  // |S| / a^2 of the particle shape
  Mat3 tau = (2.0 / 3.0) * Mat3::Identity();
  std::optional<CMat3> tau1_override;
  double c_d = 4.0 * pi / 3.0;  // perfectly conducting variant
  cplx c_gamma{1.0, 0.0};       // perfectly conducting variant
};

/// Moment block of one grid cell carrying the weight N(x_p) |Delta_p|.
/// The cube-reduced system and the limiting-equation collocation both go
/// through this function so their matrices agree exactly.
CMat3 cell_moment_matrix(const GridCellParams& params, cplx h, double weight,
                         const WaveContext& ctx);

/// One block row and unknown per particle.
DipoleSystem assemble_full(const ParticleCloud& cloud, const WaveContext& ctx);

/// One block row per cube of the cloud's partition; coupling weights
/// N(x_p) |Delta_p| sampled from the cloud's density replace per-particle
/// sums. Requires cube side >> minimal spacing (side / d_min >=
/// min_side_spacing_ratio), else throws RegimeError.
DipoleSystem reduce_to_cubes(const ParticleCloud& cloud, const WaveContext& ctx,
                             double min_side_spacing_ratio = 5.0);

/// Dense direct solve with residual and condition reporting. Ill
/// conditioning is a regime symptom here (violated a << d), hence
/// RegimeError rather than NumericalError.
CloudSolution solve_system(const DipoleSystem& system, SystemLevel level,
                           double exclusion_radius);

/// E(x) = E0(x) + sum_i [grad g(x, x_i), Q_i]. Throws RegimeError for
/// probes inside the near-field exclusion of any center.
CVec3 evaluate_field(const CloudSolution& solution, const WaveContext& ctx, const Vec3& x);

/// Same sum with the j-th term omitted, evaluated at x_j.
CVec3 effective_field_at_particle(const CloudSolution& solution, const WaveContext& ctx, int j);

/// Far-field amplitude of the scattered field in direction beta:
/// (ik/4pi) sum_i exp(-ik beta.x_i) beta x Q_i.
CVec3 cloud_far_field(const CloudSolution& solution, const WaveContext& ctx, const Vec3& beta);

/// Comma-separated field table: x,y,z, Re/Im of the three components.
void write_field_row(std::ostream& os, const Vec3& x, const CVec3& e);
void write_field_header(std::ostream& os);

}  // namespace emscat

#endif
