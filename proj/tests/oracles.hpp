// Test-only numerical oracles: central-difference operators, slope fits and
// a deterministic RNG. Everything here is independent of the library's
// analytic kernel implementations on purpose.
#ifndef EMSCAT_TESTS_ORACLES_HPP
#define EMSCAT_TESTS_ORACLES_HPP

#include <functional>
#include <random>
#include <vector>

#include "emscat/types.hpp"

namespace oracles {

using emscat::cplx;
using emscat::CVec3;
using emscat::Vec3;

using ScalarField = std::function<cplx(const Vec3&)>;
using VectorField = std::function<CVec3(const Vec3&)>;

inline CVec3 fd_gradient(const ScalarField& f, const Vec3& x, double step) {
  CVec3 g;
  for (int a = 0; a < 3; ++a) {
    Vec3 dx = Vec3::Zero();
    dx[a] = step;
    g(a) = (f(x + dx) - f(x - dx)) / (2.0 * step);
  }
  return g;
}

inline cplx fd_divergence(const VectorField& f, const Vec3& x, double step) {
  cplx div = 0.0;
  for (int a = 0; a < 3; ++a) {
    Vec3 dx = Vec3::Zero();
    dx[a] = step;
    div += (f(x + dx)(a) - f(x - dx)(a)) / (2.0 * step);
  }
  return div;
}

inline CVec3 fd_curl(const VectorField& f, const Vec3& x, double step) {
  Eigen::Matrix3cd jac;  // jac(a, b) = d f_a / d x_b
  for (int b = 0; b < 3; ++b) {
    Vec3 dx = Vec3::Zero();
    dx[b] = step;
    const CVec3 plus = f(x + dx), minus = f(x - dx);
    for (int a = 0; a < 3; ++a) jac(a, b) = (plus(a) - minus(a)) / (2.0 * step);
  }
  return CVec3(jac(2, 1) - jac(1, 2), jac(0, 2) - jac(2, 0), jac(1, 0) - jac(0, 1));
}

inline cplx fd_laplacian(const ScalarField& f, const Vec3& x, double step) {
  cplx lap = 0.0;
  const cplx center = f(x);
  for (int a = 0; a < 3; ++a) {
    Vec3 dx = Vec3::Zero();
    dx[a] = step;
    lap += (f(x + dx) - 2.0 * center + f(x - dx)) / (step * step);
  }
  return lap;
}

/// Least-squares slope of y against x.
inline double fit_slope(const std::vector<double>& x, const std::vector<double>& y) {
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  const double n = static_cast<double>(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    sx += x[i];
    sy += y[i];
    sxx += x[i] * x[i];
    sxy += x[i] * y[i];
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

/// Slope of log|y| against log x.
inline double loglog_slope(const std::vector<double>& x, const std::vector<double>& y) {
  std::vector<double> lx(x.size()), ly(y.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    lx[i] = std::log(x[i]);
    ly[i] = std::log(y[i]);
  }
  return fit_slope(lx, ly);
}

struct Rng {
  std::mt19937 gen;
  explicit Rng(unsigned seed = 20240707u) : gen(seed) {}

  double uniform(double lo, double hi) {
    return std::uniform_real_distribution<double>(lo, hi)(gen);
  }
  Vec3 vec3(double lo, double hi) {
    return Vec3(uniform(lo, hi), uniform(lo, hi), uniform(lo, hi));
  }
  Vec3 unit3() {
    Vec3 v;
    do {
      v = vec3(-1.0, 1.0);
    } while (v.squaredNorm() < 1e-4);
    return v.normalized();
  }
  cplx complex(double lo, double hi) { return cplx(uniform(lo, hi), uniform(lo, hi)); }
  CVec3 cvec3(double lo, double hi) { return CVec3(complex(lo, hi), complex(lo, hi), complex(lo, hi)); }
};

}  // namespace oracles

#endif
