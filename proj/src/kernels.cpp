#include "emscat/kernels.hpp"

#include <cmath>

namespace emscat {

namespace {

double separation(const Vec3& x, const Vec3& y) {
  const double r = (x - y).norm();
  if (!(r > 0.0)) throw std::invalid_argument("kernel evaluated at coincident points");
  return r;
}

}  // namespace

cplx green(cplx k, const Vec3& x, const Vec3& y) {
  const double r = separation(x, y);
  return std::exp(iu * k * r) / (4.0 * pi * r);
}

CVec3 grad_green(cplx k, const Vec3& x, const Vec3& y) {
  const double r = separation(x, y);
  const cplx g = std::exp(iu * k * r) / (4.0 * pi * r);
  return (g * (iu * k - 1.0 / r) / r) * (x - y).cast<cplx>();
}

CMat3 green_hessian(cplx k, const Vec3& x, const Vec3& y) {
  const double r = separation(x, y);
  const cplx g = std::exp(iu * k * r) / (4.0 * pi * r);
  const cplx s = iu * k - 1.0 / r;           // g'/g
  const cplx gpp = g * (s * s + 1.0 / (r * r));
  const cplx gp_over_r = g * s / r;
  const Vec3 rhat = (x - y) / r;
  const Mat3 proj = rhat * rhat.transpose();
  return gpp * proj.cast<cplx>() + gp_over_r * (Mat3::Identity() - proj).cast<cplx>();
}

CMat3 double_curl_matrix(cplx k, const Vec3& x, const Vec3& y) {
  return (k * k * green(k, x, y)) * CMat3::Identity() + green_hessian(k, x, y);
}

CVec3 double_curl_kernel(cplx k, const Vec3& x, const Vec3& y, const CVec3& a) {
  return double_curl_matrix(k, x, y) * a;
}

CVec3 far_field_amplitude(cplx k, const CVec3& q, const Vec3& beta) {
  return (iu * k / (4.0 * pi)) * ccross(beta.cast<cplx>(), q);
}

}  // namespace emscat
