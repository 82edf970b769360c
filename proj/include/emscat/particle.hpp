#ifndef EMSCAT_PARTICLE_HPP
#define EMSCAT_PARTICLE_HPP

#include <optional>
#include <variant>

#include "emscat/types.hpp"
#include "emscat/wave.hpp"

namespace emscat {

/// Perfectly conducting particle: response -c_d a^3 c_gamma curl E.
struct PecKind {
  double c_d = 4.0 * pi / 3.0;
  cplx c_gamma{1.0, 0.0};
};

/// Impedance particle with surface impedance h / a^kappa.
struct ImpedanceKind {
  cplx h{0.0, 0.0};      // Re h >= 0
  double kappa = 0.0;    // in [0, 1)
  double c_s = 4.0 * pi; // |S| / a^2
  Mat3 tau = (2.0 / 3.0) * Mat3::Identity();
  std::optional<CMat3> tau1_override;  // corrected tensor, if the caller has one
};

struct SmallParticle {
  Vec3 center = Vec3::Zero();
  double a = 0.0;
  std::variant<PecKind, ImpedanceKind> kind;

  bool is_pec() const { return std::holds_alternative<PecKind>(kind); }
  const PecKind& pec() const { return std::get<PecKind>(kind); }
  const ImpedanceKind& impedance() const { return std::get<ImpedanceKind>(kind); }

  /// Throws ConfigError on Re h < 0, kappa outside [0,1), a <= 0.
  void validate() const;

  /// zeta = h / a^kappa (impedance particles only).
  cplx zeta() const;

  /// B such that Q = B * (curl E_e)(center); encapsulates both kinds.
  CMat3 moment_matrix(const WaveContext& ctx) const;
};

/// Q = -(zeta |S| / (i omega mu)) tau' curl_e  with |S| = c_s a^2 and
/// tau' = tau1_override if present, else tau. Exact algebraic map; its
/// asymptotic validity in a is a separate question from its evaluation.
CVec3 impedance_moment(const SmallParticle& p, const WaveContext& ctx, const CVec3& curl_e);

/// Q = -c_d a^3 c_gamma curl_e.
CVec3 pec_moment(const SmallParticle& p, const CVec3& curl_e);

/// Leading-order scattered field of one particle: grad g(x, center) x Q.
CVec3 dipole_field(const CVec3& q, const Vec3& center, cplx k, const Vec3& x);

/// Regime diagnostics for a particle in a cloud with minimal spacing d_min.
struct ValidityReport {
  double ka = 0.0;
  double a_over_d = 0.0;
  double kd = 0.0;
  double threshold = 0.1;
  bool small_parameter_ok = true;  // ka + a/d <= threshold
  bool subwavelength_ok = true;    // kd <= 1
  bool ok = true;
};

ValidityReport validity_report(const SmallParticle& p, const WaveContext& ctx, double d_min,
                               double threshold = 0.1);

}  // namespace emscat

#endif
