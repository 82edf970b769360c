#ifndef EMSCAT_MEDIUM_HPP
#define EMSCAT_MEDIUM_HPP

#include <functional>
#include <iosfwd>
#include <optional>
#include <vector>

#include "emscat/cloud.hpp"
#include "emscat/manybody.hpp"
#include "emscat/types.hpp"
#include "emscat/wave.hpp"

namespace emscat {

/// Cell-centered samples of the medium data over a cube partition, plus
/// the solved limiting field once solve_limit_ie has run.
struct MediumGrid {
  CubePartition partition;
  std::vector<double> number_density;  // N(x_p) >= 0
  std::vector<cplx> impedance_factor;  // h(x_p), Re >= 0
  std::vector<CVec3> field;            // E(x_p)
  std::vector<CVec3> curl_field;       // A_p = (curl E)(x_p)
  std::vector<CVec3> weighted_curl;    // W(x_p) = tau' A_p

  int count() const { return partition.count(); }
};

MediumGrid make_medium_grid(const BoxRegion& box, double side,
                            const std::function<double(const Vec3&)>& number_density,
                            const std::function<cplx(const Vec3&)>& impedance_factor);

struct LimitSolveOptions {
  GridCellParams cell;
  // Adds the depolarization self-cell term -(1/3) W(x_q) to the coupling
  // sum (principal-value extraction over the cell). The plain collocation
  // sum has no p = q term; keep OFF unless studying that refinement.
  bool self_term = false;
};

/// Collocation system of the limiting integral equation on the grid cells;
/// identical, entry for entry, to the cube-reduced many-body system built
/// from the same samples.
DipoleSystem limit_ie_system(const MediumGrid& grid, const WaveContext& ctx,
                             const LimitSolveOptions& opts);

/// Solves the limiting equation for A_p = (curl E)(x_p), reconstructs
/// E(x_p) from the same representation, fills the grid fields, and returns
/// the solution object for field evaluation anywhere.
CloudSolution solve_limit_ie(MediumGrid& grid, const WaveContext& ctx,
                             const LimitSolveOptions& opts);

/// sqrt on the branch arg z in [0, 2pi): |z|^(1/2) exp(i arg(z)/2), so
/// arg(sqrt) lies in [0, pi).
cplx sqrt_upper_branch(cplx z);

/// n(x) = 1 / sqrt(1 + (2 c0 / (3 i omega mu)) h N) on the branch above.
cplx refraction_coefficient(cplx h, double number_density, const WaveContext& ctx, double c0);

/// mu(x) = mu / (1 + (2 c0 / (3 i omega mu)) h N).
cplx permeability(cplx h, double number_density, const WaveContext& ctx, double c0);

/// Perfectly conducting variant: mu(x) = mu / (1 + C_D N), C_D = c_d c_gamma.
cplx permeability_pec(double c_d, cplx c_gamma, double number_density, cplx mu);

struct DesignResult {
  std::vector<cplx> h;
  std::vector<bool> feasible;
  int infeasible_count = 0;
};

/// Pointwise inversion of the refraction formula: h2 = (Re z - 1)/c1,
/// h1 = -Im z / c1 with z = 1/n_target^2 and c1 = 2 c0 N/(3 omega mu).
/// A cell is infeasible when Im z > 0 (would need Re h < 0) or when
/// N = 0 with n_target != 1.
DesignResult design_h_for_n(const std::vector<cplx>& n_target,
                            const std::vector<double>& number_density,
                            const WaveContext& ctx, double c0);

/// Same inversion for a permeability target: u - iv = mu / mu_target,
/// h2 = (u - 1)/c1, h1 = v/c1; infeasible when v < 0.
DesignResult design_h_for_mu(const std::vector<cplx>& mu_target,
                             const std::vector<double>& number_density,
                             const WaveContext& ctx, double c0);

/// Max-over-interior-cells residual of the local form of the limiting
/// equation under central differences, normalized by k^2 max|E|:
///   curl curl E = k^2 E/(1+q) - c2 [grad(hN), curl E]/(1+q),
/// q = c2 h N, c2 = 2 c0/(3 i omega mu). Needs >= 5 cells per direction.
double curlcurl_residual(const MediumGrid& grid, const WaveContext& ctx, double c0);

/// Medium map rows: x,y,z, N, Re/Im h, Re/Im n, Re/Im mu_eff.
void write_medium_maps(const MediumGrid& grid, const WaveContext& ctx, double c0,
                       std::ostream& os);

}  // namespace emscat

#endif
