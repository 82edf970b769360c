#include "emscat/shape.hpp"

#include <vector>

#include "emscat/concurrency.hpp"
#include "emscat/kernels.hpp"

namespace emscat {

Mat3 tau_tensor(const SurfaceMesh& mesh) {
  Mat3 b = Mat3::Zero();
  for (int f = 0; f < mesh.face_count(); ++f)
    b += mesh.areas[f] * (mesh.normals[f] * mesh.normals[f].transpose());
  b /= mesh.surface_area();
  return Mat3::Identity() - b;
}

ShapeConstants shape_constants(const SurfaceMesh& mesh) {
  ShapeConstants sc;
  sc.surface_area = mesh.surface_area();
  sc.volume = mesh.volume;
  sc.c_d = mesh.volume / (mesh.a * mesh.a * mesh.a);
  sc.c_s = sc.surface_area / (mesh.a * mesh.a);
  sc.tau = tau_tensor(mesh);
  return sc;
}

cplx half_identity_check(const SurfaceMesh& mesh, cplx k) {
  const int nf = mesh.face_count();
  std::vector<cplx> per_centroid(nf);
  parallel_for(nf, [&](std::size_t t) {
    cplx sum = 0.0;
    for (int s = 0; s < nf; ++s) {
      if (s == static_cast<int>(t)) continue;
      sum += mesh.areas[s] *
             cdot(grad_green(k, mesh.centroids[s], mesh.centroids[t]),
                  mesh.normals[s].cast<cplx>());
    }
    per_centroid[t] = -sum;
  });
  cplx total = 0.0;
  for (const cplx& v : per_centroid) total += v;
  return total / static_cast<double>(nf);
}

}  // namespace emscat
