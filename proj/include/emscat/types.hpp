#ifndef EMSCAT_TYPES_HPP
#define EMSCAT_TYPES_HPP

#include <Eigen/Dense>
#include <complex>
#include <stdexcept>
#include <string>

namespace emscat {

using cplx = std::complex<double>;
using Vec3 = Eigen::Vector3d;
using CVec3 = Eigen::Vector3cd;
using Mat3 = Eigen::Matrix3d;
using CMat3 = Eigen::Matrix3cd;

inline constexpr cplx iu{0.0, 1.0};
inline constexpr double pi = 3.14159265358979323846;

/// Bilinear (non-conjugating) dot product. Eigen's dot() conjugates its
/// first argument, which is not what kernel contractions want.
inline cplx cdot(const CVec3& a, const CVec3& b) {
  return a(0) * b(0) + a(1) * b(1) + a(2) * b(2);
}

/// Bilinear cross product. Eigen's cross() conjugates each component for
/// complex vectors; field algebra needs the plain bilinear form.
inline CVec3 ccross(const CVec3& a, const CVec3& b) {
  return CVec3(a(1) * b(2) - a(2) * b(1), a(2) * b(0) - a(0) * b(2),
               a(0) * b(1) - a(1) * b(0));
}

/// Invalid or inconsistent user input (bad mesh parameters, violated
/// physical constraints on a configuration, malformed config files).
struct ConfigError : std::runtime_error {
  explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

/// The requested computation falls outside the validity regime of the
/// underlying asymptotics (packing too dense, cube reduction with b ~ d,
/// infeasible design target, near-field probe).
struct RegimeError : std::runtime_error {
  explicit RegimeError(const std::string& what) : std::runtime_error(what) {}
};

/// A numerical step failed (singular or hopelessly ill-conditioned matrix,
/// factorization breakdown).
struct NumericalError : std::runtime_error {
  explicit NumericalError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace emscat

#endif
