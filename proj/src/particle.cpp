#include "emscat/particle.hpp"

#include <cmath>

#include "emscat/kernels.hpp"

namespace emscat {

void SmallParticle::validate() const {
  if (!(a > 0.0)) throw ConfigError("particle: size a must be > 0");
  if (!is_pec()) {
    const auto& imp = impedance();
    if (imp.h.real() < 0.0) throw ConfigError("particle: Re h must be >= 0");
    if (imp.kappa < 0.0 || imp.kappa >= 1.0)
      throw ConfigError("particle: kappa must lie in [0, 1)");
  }
}

cplx SmallParticle::zeta() const {
  const auto& imp = impedance();
  return imp.h / std::pow(a, imp.kappa);
}

CMat3 SmallParticle::moment_matrix(const WaveContext& ctx) const {
  validate();
  if (is_pec()) {
    const auto& p = pec();
    return (-p.c_d * a * a * a * p.c_gamma) * CMat3::Identity();
  }
  const auto& imp = impedance();
  const CMat3 tau =
      imp.tau1_override ? *imp.tau1_override : imp.tau.cast<cplx>().eval();
  const cplx scale = -zeta() * imp.c_s * a * a / (iu * ctx.omega * ctx.mu);
  return scale * tau;
}

CVec3 impedance_moment(const SmallParticle& p, const WaveContext& ctx, const CVec3& curl_e) {
  if (p.is_pec()) throw ConfigError("impedance_moment: particle is perfectly conducting");
  return p.moment_matrix(ctx) * curl_e;
}

CVec3 pec_moment(const SmallParticle& p, const CVec3& curl_e) {
  if (!p.is_pec()) throw ConfigError("pec_moment: particle is not perfectly conducting");
  p.validate();
  const auto& pk = p.pec();
  return (-pk.c_d * p.a * p.a * p.a * pk.c_gamma) * curl_e;
}

CVec3 dipole_field(const CVec3& q, const Vec3& center, cplx k, const Vec3& x) {
  return ccross(grad_green(k, x, center), q);
}

ValidityReport validity_report(const SmallParticle& p, const WaveContext& ctx, double d_min,
                               double threshold) {
  if (!(d_min > 0.0)) throw ConfigError("validity_report: d_min must be > 0");
  ValidityReport r;
  const double kabs = std::abs(ctx.k);
  r.ka = kabs * p.a;
  r.a_over_d = p.a / d_min;
  r.kd = kabs * d_min;
  r.threshold = threshold;
  r.small_parameter_ok = (r.ka + r.a_over_d) <= threshold;
  r.subwavelength_ok = r.kd <= 1.0;
  r.ok = r.small_parameter_ok && r.subwavelength_ok;
  return r;
}

}  // namespace emscat
