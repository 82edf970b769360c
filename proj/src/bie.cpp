#include "emscat/bie.hpp"

#include <cmath>
#include <ostream>

#include "emscat/concurrency.hpp"
#include "emscat/csv.hpp"
#include "emscat/kernels.hpp"
#include "emscat/linalg.hpp"

namespace emscat {

double SurfaceCurrent::tangentiality_residual(const SurfaceMesh& mesh) const {
  double worst = 0.0;
  for (std::size_t f = 0; f < values.size(); ++f) {
    const double norm = values[f].norm();
    if (norm == 0.0) continue;
    worst = std::max(worst, std::abs(cdot(mesh.normals[f].cast<cplx>(), values[f])) / norm);
  }
  return worst;
}

Eigen::MatrixXcd assemble_T(const SurfaceMesh& mesh, cplx k) {
  const int nf = mesh.face_count();
  Eigen::MatrixXcd t = Eigen::MatrixXcd::Zero(3 * nf, 3 * nf);
  parallel_for(nf, [&](std::size_t f) {
    const Vec3& sf = mesh.centroids[f];
    const CVec3 nf_c = mesh.normals[f].cast<cplx>();
    for (int g = 0; g < nf; ++g) {
      if (g == static_cast<int>(f)) continue;  // weakly singular self term dropped
      const CVec3 grad = grad_green(k, sf, mesh.centroids[g]);
      CMat3 block = grad * nf_c.transpose();
      block -= cdot(nf_c, grad) * CMat3::Identity();
      t.block<3, 3>(3 * f, 3 * g) = mesh.areas[g] * block;
    }
  });
  return t;
}

SurfaceCurrent solve_current(const SurfaceMesh& mesh, const WaveContext& ctx) {
  const int nf = mesh.face_count();
  Eigen::MatrixXcd system = assemble_T(mesh, ctx.k);
  system.diagonal().array() += 0.5;

  Eigen::VectorXcd rhs(3 * nf);
  for (int f = 0; f < nf; ++f)
    rhs.segment<3>(3 * f) =
        -ccross(mesh.normals[f].cast<cplx>(), plane_wave(ctx, mesh.centroids[f]));

  DenseSolution sol;
  try {
    sol = solve_dense(system, rhs);
  } catch (const NumericalError& e) {
    throw NumericalError(std::string("bie: near-singular system (interior resonance or "
                                     "degenerate mesh): ") +
                         e.what());
  }

  SurfaceCurrent current;
  current.values.resize(nf);
  for (int f = 0; f < nf; ++f) {
    CVec3 j = sol.x.segment<3>(3 * f);
    const CVec3 n = mesh.normals[f].cast<cplx>();
    j -= cdot(n, j) * n;  // remove discretization leakage off the tangent plane
    current.values[f] = j;
  }
  return current;
}

CVec3 moment(const SurfaceMesh& mesh, const SurfaceCurrent& current) {
  CVec3 q = CVec3::Zero();
  for (int f = 0; f < mesh.face_count(); ++f) q += mesh.areas[f] * current.values[f];
  return q;
}

GammaData gamma_from_current(const SurfaceMesh& mesh, cplx k, const SurfaceCurrent& current) {
  const int nf = mesh.face_count();
  GammaData gd;
  gd.q = moment(mesh, current);
  if (!(gd.q.norm() > 0.0))
    throw NumericalError("gamma: degenerate moment (Q = 0)");

  std::vector<CVec3> per_target(nf);
  parallel_for(nf, [&](std::size_t g) {
    CMat3 gamma_t = CMat3::Zero();
    for (int f = 0; f < nf; ++f) {
      if (f == static_cast<int>(g)) continue;
      gamma_t += mesh.areas[f] * grad_green(k, mesh.centroids[f], mesh.centroids[g]) *
                 mesh.normals[f].transpose().cast<cplx>();
    }
    per_target[g] = mesh.areas[g] * (gamma_t * current.values[g]);
  });
  for (const CVec3& v : per_target) gd.x += v;

  gd.gamma = gd.q.dot(gd.x) / gd.q.squaredNorm();  // dot conjugates Q, as defined
  const cplx denom = 1.0 + gd.gamma;
  if (std::abs(denom) < 1e-12)
    throw NumericalError("gamma: correction singular (1 + gamma = 0)");
  gd.c_gamma = 1.0 / denom;
  return gd;
}

CVec3 q_asymptotic_pec(double c_d, double a, cplx c_gamma, const CVec3& curl_e0) {
  if (!(a > 0.0)) throw ConfigError("q_asymptotic_pec: a must be > 0");
  return (-c_d * a * a * a * c_gamma) * curl_e0;
}

PecValidationRow pec_validate(const SurfaceMesh& mesh, const WaveContext& ctx, int refinement) {
  const SurfaceCurrent current = solve_current(mesh, ctx);
  const GammaData gd = gamma_from_current(mesh, ctx.k, current);
  const double c_d = mesh.volume / (mesh.a * mesh.a * mesh.a);
  const CVec3 q_asym =
      q_asymptotic_pec(c_d, mesh.a, gd.c_gamma, plane_wave_curl(ctx, Vec3::Zero()));

  PecValidationRow row;
  row.a = mesh.a;
  row.ka = std::abs(ctx.k) * mesh.a;
  row.refinement = refinement;
  row.q_bie = gd.q.norm();
  row.q_asym = q_asym.norm();
  row.rel_error = (gd.q - q_asym).norm() / q_asym.norm();
  row.gamma = gd.gamma;
  row.c_gamma = gd.c_gamma;
  return row;
}

void write_pec_validation(std::ostream& os, const std::vector<PecValidationRow>& rows) {
  os << "ka,refinement,q_bie,q_asym,rel_error,gamma_re,gamma_im,c_gamma_re,c_gamma_im\n";
  for (const auto& r : rows)
    os << fmt(r.ka) << ',' << r.refinement << ',' << fmt(r.q_bie) << ',' << fmt(r.q_asym)
       << ',' << fmt(r.rel_error) << ',' << fmt(r.gamma.real()) << ',' << fmt(r.gamma.imag())
       << ',' << fmt(r.c_gamma.real()) << ',' << fmt(r.c_gamma.imag()) << '\n';
}

}  // namespace emscat
