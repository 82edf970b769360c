#ifndef EMSCAT_KERNELS_HPP
#define EMSCAT_KERNELS_HPP

#include "emscat/types.hpp"

namespace emscat {

/// Outgoing free-space kernel  g(x,y) = exp(ik|x-y|) / (4 pi |x-y|).
/// Throws on x == y.
cplx green(cplx k, const Vec3& x, const Vec3& y);

/// grad_x g(x,y) = g * (ik - 1/r) * (x-y)/r,  r = |x-y|.
CVec3 grad_green(cplx k, const Vec3& x, const Vec3& y);

/// Hessian of g with respect to x, in closed form:
///   H = g'' rhat rhat^T + (g'/r) (I - rhat rhat^T),
/// with g' = g (ik - 1/r),  g'' = g ((ik - 1/r)^2 + 1/r^2).
CMat3 green_hessian(cplx k, const Vec3& x, const Vec3& y);

/// Matrix D(x,y) = k^2 g I + H such that, for a constant vector A,
///   D A = curl_x [ grad_x g(x,y), A ] = curl curl (g A),   x != y.
CMat3 double_curl_matrix(cplx k, const Vec3& x, const Vec3& y);

/// curl_x [ grad_x g(x,y), A ] for constant A.
CVec3 double_curl_kernel(cplx k, const Vec3& x, const Vec3& y, const CVec3& a);

/// Far-field amplitude of the dipole field [grad g, Q] centered at the
/// origin:  A(beta) = (ik / 4 pi) beta x Q,  |beta| = 1.
CVec3 far_field_amplitude(cplx k, const CVec3& q, const Vec3& beta);

}  // namespace emscat

#endif
