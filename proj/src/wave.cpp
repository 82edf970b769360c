#include "emscat/wave.hpp"

#include <cmath>

namespace emscat {

WaveContext WaveContext::make(double omega, double eps, cplx mu, const Vec3& incidence,
                              const CVec3& polarization) {
  WaveContext ctx;
  ctx.omega = omega;
  ctx.eps = eps;
  ctx.mu = mu;
  ctx.k = omega * std::sqrt(cplx(eps) * mu);
  ctx.incidence = incidence;
  ctx.polarization = polarization;
  validate(ctx);
  return ctx;
}

void validate(const WaveContext& ctx) {
  if (!(ctx.omega > 0.0)) throw ConfigError("wave: omega must be > 0");
  if (!(ctx.eps > 0.0)) throw ConfigError("wave: eps must be > 0");
  if (ctx.mu.real() < 0.0) throw ConfigError("wave: Re mu must be >= 0");
  if (std::abs(ctx.incidence.norm() - 1.0) > 1e-12)
    throw ConfigError("wave: incidence direction must be a unit vector");
  const double pnorm = ctx.polarization.norm();
  if (std::abs(ctx.incidence.cast<cplx>().dot(ctx.polarization)) >
      1e-12 * std::max(1.0, pnorm))
    throw ConfigError("wave: polarization must be orthogonal to incidence");
  const cplx k2 = ctx.omega * ctx.omega * ctx.eps * ctx.mu;
  if (std::abs(ctx.k * ctx.k - k2) > 1e-12 * std::abs(k2))
    throw ConfigError("wave: k inconsistent with omega*sqrt(eps*mu)");
}

CVec3 plane_wave(const WaveContext& ctx, const Vec3& x) {
  validate(ctx);
  return ctx.polarization * std::exp(iu * ctx.k * cplx(ctx.incidence.dot(x)));
}

CVec3 plane_wave_curl(const WaveContext& ctx, const Vec3& x) {
  validate(ctx);
  const CVec3 cross = ccross(ctx.incidence.cast<cplx>(), ctx.polarization);
  return iu * ctx.k * std::exp(iu * ctx.k * cplx(ctx.incidence.dot(x))) * cross;
}

}  // namespace emscat
