#include "emscat/medium.hpp"

#include <cmath>
#include <ostream>

#include "emscat/csv.hpp"
#include "emscat/kernels.hpp"

namespace emscat {

MediumGrid make_medium_grid(const BoxRegion& box, double side,
                            const std::function<double(const Vec3&)>& number_density,
                            const std::function<cplx(const Vec3&)>& impedance_factor) {
  if (!number_density) throw ConfigError("medium grid: number density N(x) not set");
  MediumGrid grid;
  grid.partition = make_partition(box, side);
  const int p = grid.count();
  grid.number_density.resize(p);
  grid.impedance_factor.resize(p);
  for (int i = 0; i < p; ++i) {
    grid.number_density[i] = number_density(grid.partition.centers[i]);
    if (grid.number_density[i] < 0.0)
      throw ConfigError("medium grid: N(x) < 0 at a cell center");
    grid.impedance_factor[i] =
        impedance_factor ? impedance_factor(grid.partition.centers[i]) : cplx(0.0);
    if (grid.impedance_factor[i].real() < 0.0)
      throw ConfigError("medium grid: Re h(x) < 0 at a cell center");
  }
  return grid;
}

DipoleSystem limit_ie_system(const MediumGrid& grid, const WaveContext& ctx,
                             const LimitSolveOptions& opts) {
  const CubePartition& part = grid.partition;
  std::vector<CMat3> moments(part.count());
  for (int p = 0; p < part.count(); ++p) {
    const double weight = grid.number_density[p] * part.volumes[p];
    moments[p] = cell_moment_matrix(opts.cell, grid.impedance_factor[p], weight, ctx);
  }
  DipoleSystem sys = assemble_dipole_system(part.centers, moments, ctx);
  if (opts.self_term) {
    for (int p = 0; p < part.count(); ++p)
      sys.matrix.block<3, 3>(3 * p, 3 * p) += (1.0 / 3.0) * moments[p] / part.volumes[p];
  }
  return sys;
}

CloudSolution solve_limit_ie(MediumGrid& grid, const WaveContext& ctx,
                             const LimitSolveOptions& opts) {
  DipoleSystem sys = limit_ie_system(grid, ctx, opts);
  CloudSolution sol;
  try {
    sol = solve_system(sys, SystemLevel::Reduced, 0.0);
  } catch (const RegimeError& e) {
    throw RegimeError(std::string("limit equation: singular collocation matrix "
                                  "(parameter regime): ") +
                      e.what());
  }
  const int p = grid.count();
  const CMat3 tau = opts.cell.tau1_override ? *opts.cell.tau1_override
                                            : opts.cell.tau.cast<cplx>().eval();
  grid.curl_field.resize(p);
  grid.weighted_curl.resize(p);
  grid.field.resize(p);
  for (int q = 0; q < p; ++q) {
    grid.curl_field[q] = sol.a[q];
    grid.weighted_curl[q] = tau * sol.a[q];
    grid.field[q] = effective_field_at_particle(sol, ctx, q);
  }
  return sol;
}

cplx sqrt_upper_branch(cplx z) {
  double phi = std::arg(z);  // (-pi, pi]
  if (phi < 0.0) phi += 2.0 * pi;
  return std::sqrt(std::abs(z)) * std::exp(iu * (phi / 2.0));
}

namespace {

cplx coupling_term(cplx h, double number_density, const WaveContext& ctx, double c0) {
  return 2.0 * c0 * h * number_density / (3.0 * iu * ctx.omega * ctx.mu);
}

// c1 = 2 c0 N / (3 omega mu); the design recipe needs it real positive.
double design_c1(double number_density, const WaveContext& ctx, double c0) {
  if (ctx.mu.imag() != 0.0 || !(ctx.mu.real() > 0.0))
    throw ConfigError("design: background mu must be real positive");
  return 2.0 * c0 * number_density / (3.0 * ctx.omega * ctx.mu.real());
}

}  // namespace

cplx refraction_coefficient(cplx h, double number_density, const WaveContext& ctx, double c0) {
  if (h.real() < 0.0) throw ConfigError("refraction: Re h must be >= 0");
  if (number_density < 0.0) throw ConfigError("refraction: N must be >= 0");
  const cplx denom = 1.0 + coupling_term(h, number_density, ctx, c0);
  if (std::abs(denom) < 1e-300) throw RegimeError("refraction: pole (1 + coupling = 0)");
  return 1.0 / sqrt_upper_branch(denom);
}

cplx permeability(cplx h, double number_density, const WaveContext& ctx, double c0) {
  if (h.real() < 0.0) throw ConfigError("permeability: Re h must be >= 0");
  if (number_density < 0.0) throw ConfigError("permeability: N must be >= 0");
  const cplx denom = 1.0 + coupling_term(h, number_density, ctx, c0);
  if (std::abs(denom) < 1e-300) throw RegimeError("permeability: pole (1 + coupling = 0)");
  return ctx.mu / denom;
}

cplx permeability_pec(double c_d, cplx c_gamma, double number_density, cplx mu) {
  const cplx denom = 1.0 + c_d * c_gamma * number_density;
  if (std::abs(denom) < 1e-300) throw RegimeError("permeability: pole (1 + C_D N = 0)");
  return mu / denom;
}

DesignResult design_h_for_n(const std::vector<cplx>& n_target,
                            const std::vector<double>& number_density,
                            const WaveContext& ctx, double c0) {
  if (n_target.size() != number_density.size())
    throw ConfigError("design: target and density sizes differ");
  DesignResult result;
  result.h.resize(n_target.size(), cplx(0.0));
  result.feasible.assign(n_target.size(), true);
  for (std::size_t i = 0; i < n_target.size(); ++i) {
    const cplx n = n_target[i];
    if (std::abs(n - 1.0) <= 1e-14) continue;  // h = 0
    if (!(number_density[i] > 0.0)) {
      result.feasible[i] = false;
      ++result.infeasible_count;
      continue;
    }
    const double c1 = design_c1(number_density[i], ctx, c0);
    if (std::abs(n) < 1e-300) {
      result.feasible[i] = false;
      ++result.infeasible_count;
      continue;
    }
    const cplx z = 1.0 / (n * n);
    const double h1 = -z.imag() / c1;
    const double h2 = (z.real() - 1.0) / c1;
    if (h1 < 0.0) {  // would need Re h < 0
      result.feasible[i] = false;
      ++result.infeasible_count;
      continue;
    }
    result.h[i] = cplx(h1, h2);
  }
  return result;
}

DesignResult design_h_for_mu(const std::vector<cplx>& mu_target,
                             const std::vector<double>& number_density,
                             const WaveContext& ctx, double c0) {
  if (mu_target.size() != number_density.size())
    throw ConfigError("design: target and density sizes differ");
  DesignResult result;
  result.h.resize(mu_target.size(), cplx(0.0));
  result.feasible.assign(mu_target.size(), true);
  for (std::size_t i = 0; i < mu_target.size(); ++i) {
    if (std::abs(mu_target[i]) < 1e-300)
      throw ConfigError("design: mu target must be nonzero");
    const cplx w = ctx.mu / mu_target[i];  // u - i v
    if (std::abs(w - 1.0) <= 1e-14) continue;  // h = 0
    if (!(number_density[i] > 0.0)) {
      result.feasible[i] = false;
      ++result.infeasible_count;
      continue;
    }
    const double c1 = design_c1(number_density[i], ctx, c0);
    const double v = -w.imag();
    if (v < 0.0) {
      result.feasible[i] = false;
      ++result.infeasible_count;
      continue;
    }
    result.h[i] = cplx(v / c1, (w.real() - 1.0) / c1);
  }
  return result;
}

double curlcurl_residual(const MediumGrid& grid, const WaveContext& ctx, double c0) {
  const auto& cells = grid.partition.cells;
  const int nx = cells[0], ny = cells[1], nz = cells[2];
  if (nx < 5 || ny < 5 || nz < 5)
    throw ConfigError("curlcurl_residual: need at least 5 cells per direction");
  if (static_cast<int>(grid.field.size()) != grid.count())
    throw ConfigError("curlcurl_residual: grid field not filled");

  const Vec3 spacing(grid.partition.box.extent[0] / nx, grid.partition.box.extent[1] / ny,
                     grid.partition.box.extent[2] / nz);
  auto idx = [&](int i, int j, int l) { return (i * ny + j) * nz + l; };
  const cplx c2 = 2.0 * c0 / (3.0 * iu * ctx.omega * ctx.mu);
  const cplx k2 = ctx.k * ctx.k;

  std::vector<cplx> hn(grid.count());
  for (int i = 0; i < grid.count(); ++i)
    hn[i] = grid.impedance_factor[i] * grid.number_density[i];

  double max_e = 0.0;
  double max_res = 0.0;
  for (int i = 1; i + 1 < nx; ++i)
    for (int j = 1; j + 1 < ny; ++j)
      for (int l = 1; l + 1 < nz; ++l) {
        const int c = idx(i, j, l);
        auto e_at = [&](int di, int dj, int dl) -> const CVec3& {
          return grid.field[idx(i + di, j + dj, l + dl)];
        };

        // first derivatives of E (central)
        CMat3 de;  // de(a, b) = d E_a / d x_b
        for (int a = 0; a < 3; ++a) {
          de(a, 0) = (e_at(1, 0, 0)(a) - e_at(-1, 0, 0)(a)) / (2.0 * spacing[0]);
          de(a, 1) = (e_at(0, 1, 0)(a) - e_at(0, -1, 0)(a)) / (2.0 * spacing[1]);
          de(a, 2) = (e_at(0, 0, 1)(a) - e_at(0, 0, -1)(a)) / (2.0 * spacing[2]);
        }
        const CVec3 curl_e(de(2, 1) - de(1, 2), de(0, 2) - de(2, 0), de(1, 0) - de(0, 1));

        // curl curl E = grad div E - laplacian E via second differences
        CVec3 curl_curl;
        for (int a = 0; a < 3; ++a) {
          cplx grad_div = 0.0;
          for (int b = 0; b < 3; ++b) {
            if (a == b) {
              const cplx second = (e_at(a == 0, a == 1, a == 2)(b) - 2.0 * e_at(0, 0, 0)(b) +
                                   e_at(-(a == 0), -(a == 1), -(a == 2))(b)) /
                                  (spacing[a] * spacing[a]);
              grad_div += second;
            } else {
              auto shift = [&](int sa, int sb) {
                int d[3] = {0, 0, 0};
                d[a] = sa;
                d[b] = sb;
                return e_at(d[0], d[1], d[2])(b);
              };
              grad_div += (shift(1, 1) - shift(1, -1) - shift(-1, 1) + shift(-1, -1)) /
                          (4.0 * spacing[a] * spacing[b]);
            }
          }
          cplx laplacian = 0.0;
          for (int b = 0; b < 3; ++b) {
            int d[3] = {0, 0, 0};
            d[b] = 1;
            const cplx plus = e_at(d[0], d[1], d[2])(a);
            d[b] = -1;
            const cplx minus = e_at(d[0], d[1], d[2])(a);
            laplacian += (plus - 2.0 * e_at(0, 0, 0)(a) + minus) / (spacing[b] * spacing[b]);
          }
          curl_curl(a) = grad_div - laplacian;
        }

        // grad(hN) (central)
        const CVec3 grad_hn(
            (hn[idx(i + 1, j, l)] - hn[idx(i - 1, j, l)]) / (2.0 * spacing[0]),
            (hn[idx(i, j + 1, l)] - hn[idx(i, j - 1, l)]) / (2.0 * spacing[1]),
            (hn[idx(i, j, l + 1)] - hn[idx(i, j, l - 1)]) / (2.0 * spacing[2]));

        const cplx denom = 1.0 + c2 * hn[c];
        const CVec3 rhs = (k2 * grid.field[c] - c2 * ccross(grad_hn, curl_e)) / denom;

        max_res = std::max(max_res, (curl_curl - rhs).norm());
        max_e = std::max(max_e, grid.field[c].norm());
      }
  if (!(max_e > 0.0)) return 0.0;
  return max_res / (std::norm(ctx.k) * max_e);
}

void write_medium_maps(const MediumGrid& grid, const WaveContext& ctx, double c0,
                       std::ostream& os) {
  os << "x,y,z,N,h_re,h_im,n_re,n_im,mu_re,mu_im\n";
  for (int p = 0; p < grid.count(); ++p) {
    const Vec3& x = grid.partition.centers[p];
    const cplx n = refraction_coefficient(grid.impedance_factor[p], grid.number_density[p],
                                          ctx, c0);
    const cplx mu = permeability(grid.impedance_factor[p], grid.number_density[p], ctx, c0);
    os << fmt(x.x()) << ',' << fmt(x.y()) << ',' << fmt(x.z()) << ','
       << fmt(grid.number_density[p]) << ',' << fmt(grid.impedance_factor[p].real()) << ','
       << fmt(grid.impedance_factor[p].imag()) << ',' << fmt(n.real()) << ',' << fmt(n.imag())
       << ',' << fmt(mu.real()) << ',' << fmt(mu.imag()) << '\n';
  }
}

}  // namespace emscat
