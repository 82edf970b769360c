#ifndef EMSCAT_BIE_HPP
#define EMSCAT_BIE_HPP

#include <iosfwd>
#include <vector>

#include "emscat/mesh.hpp"
#include "emscat/types.hpp"
#include "emscat/wave.hpp"

namespace emscat {

/// Tangential surface current at the face centroids of a mesh.
struct SurfaceCurrent {
  std::vector<CVec3> values;

  /// max_f |N_f . J_f| / |J_f| over faces with J_f != 0.
  double tangentiality_residual(const SurfaceMesh& mesh) const;
};

/// Moment Q, the singular-integral vector X and the diagonal correction
/// scalar derived from them.
struct GammaData {
  CVec3 q = CVec3::Zero();        // int_S J dt
  CVec3 x = CVec3::Zero();        // X_p = int_S Gamma_pq(t) J_q(t) dt
  cplx gamma = 0.0;               // sum conj(Q_p) X_p / sum |Q_p|^2
  cplx c_gamma = 1.0;             // 1 / (1 + gamma)
};

/// Collocation matrix of the compact operator
///   (T J)(s) = int_S ( grad_s g(s,t) (N_s.J(t)) - J(t) dg(s,t)/dN_s ) dt
/// at face centroids with centroid quadrature; 3F x 3F, F faces, the
/// weakly singular self-face entries dropped (zero diagonal blocks).
Eigen::MatrixXcd assemble_T(const SurfaceMesh& mesh, cplx k);

/// Solves (I/2 + T) J = -[N, E0] and projects each J onto its face's
/// tangent plane. Throws NumericalError on a near-singular system.
SurfaceCurrent solve_current(const SurfaceMesh& mesh, const WaveContext& ctx);

/// Q = int_S J dt by face-area weighting.
CVec3 moment(const SurfaceMesh& mesh, const SurfaceCurrent& current);

/// X via double centroid quadrature of the singular kernel
/// Gamma_pq(t) = int_S dg(s,t)/ds_p N_q(s) ds (self-face pairs excluded),
/// then gamma and c_gamma. Throws NumericalError when Q = 0 or 1+gamma = 0.
GammaData gamma_from_current(const SurfaceMesh& mesh, cplx k, const SurfaceCurrent& current);

/// Q = -c_d a^3 c_gamma curl_e0, the dipole-moment formula for a small
/// perfectly conducting body.
CVec3 q_asymptotic_pec(double c_d, double a, cplx c_gamma, const CVec3& curl_e0);

/// One row of the cross-validation of the solved moment against the
/// asymptotic formula, for a mesh centered at the origin.
struct PecValidationRow {
  double a = 0.0;
  double ka = 0.0;
  int refinement = 0;
  double q_bie = 0.0;    // |Q| from the solved current
  double q_asym = 0.0;   // |Q| from the asymptotic formula
  double rel_error = 0.0;
  cplx gamma = 0.0;
  cplx c_gamma = 1.0;
};

PecValidationRow pec_validate(const SurfaceMesh& mesh, const WaveContext& ctx, int refinement);

/// Comma-separated diagnostic table; one line per row.
void write_pec_validation(std::ostream& os, const std::vector<PecValidationRow>& rows);

}  // namespace emscat

#endif
