#ifndef EMSCAT_WAVE_HPP
#define EMSCAT_WAVE_HPP

#include "emscat/types.hpp"

namespace emscat {

/// Background medium plus the incident plane wave.
///
/// Units are whatever consistent system the caller works in; nothing here
/// converts. The wavenumber is derived, k = omega*sqrt(eps*mu), and may be
/// complex (lossy background, Re mu >= 0).
struct WaveContext {
  double omega = 1.0;              // angular frequency, > 0
  double eps = 1.0;                // permittivity, > 0
  cplx mu{1.0, 0.0};               // permeability, Re >= 0
  cplx k{1.0, 0.0};                // omega * sqrt(eps * mu)
  Vec3 incidence = Vec3::UnitZ();  // unit propagation direction
  CVec3 polarization = CVec3::UnitX();  // orthogonal to incidence

  /// Builds a context and validates it (throws ConfigError on violation of
  /// |incidence| = 1, incidence . polarization = 0, omega/eps > 0, Re mu >= 0).
  static WaveContext make(double omega, double eps, cplx mu, const Vec3& incidence,
                          const CVec3& polarization);
};

/// Throws ConfigError unless ctx satisfies the plane-wave constraints.
void validate(const WaveContext& ctx);

/// Incident field  E0(x) = pol * exp(i k incidence.x).
CVec3 plane_wave(const WaveContext& ctx, const Vec3& x);

/// curl E0(x) = i k (incidence x pol) exp(i k incidence.x).
CVec3 plane_wave_curl(const WaveContext& ctx, const Vec3& x);

}  // namespace emscat

#endif
