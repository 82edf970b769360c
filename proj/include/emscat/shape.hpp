#ifndef EMSCAT_SHAPE_HPP
#define EMSCAT_SHAPE_HPP

#include "emscat/mesh.hpp"
#include "emscat/types.hpp"

namespace emscat {

/// Scale-invariant constants of a particle shape.
struct ShapeConstants {
  double surface_area = 0.0;  // |S|
  double volume = 0.0;        // |D|
  double c_d = 0.0;           // |D| / a^3
  double c_s = 0.0;           // |S| / a^2
  Mat3 tau = Mat3::Zero();    // I - surface average of N N^T
};

/// tau_jp = delta_jp - (1/|S|) int_S N_j N_p dS by centroid quadrature.
/// Symmetric by construction; trace is 2 up to roundoff since |N| = 1.
Mat3 tau_tensor(const SurfaceMesh& mesh);

ShapeConstants shape_constants(const SurfaceMesh& mesh);

/// Quadrature value of -int_S dg(s,t)/dN_s ds averaged over all face
/// centroids t, the self face excluded. Tends to 1/2 as ka -> 0; the
/// departure from 1/2 is a mesh-plus-size diagnostic, not a solver input.
cplx half_identity_check(const SurfaceMesh& mesh, cplx k);

}  // namespace emscat

#endif
