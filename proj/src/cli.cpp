#include "emscat/cli.hpp"

#include <CLI11.hpp>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <json.hpp>

#include "emscat/bie.hpp"
#include "emscat/cloud.hpp"
#include "emscat/concurrency.hpp"
#include "emscat/csv.hpp"
#include "emscat/manybody.hpp"
#include "emscat/medium.hpp"
#include "emscat/mesh.hpp"
#include "emscat/shape.hpp"
#include "emscat/types.hpp"
#include "emscat/wave.hpp"

namespace emscat::cli {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

// ---------------------------------------------------------------- parsing

const json& require(const json& j, const std::string& key, const std::string& where) {
  auto it = j.find(key);
  if (it == j.end()) throw ConfigError("config: missing \"" + key + "\" in " + where);
  return *it;
}

double as_real(const json& j, const std::string& where) {
  if (!j.is_number()) throw ConfigError("config: " + where + " must be a number");
  return j.get<double>();
}

cplx as_complex(const json& j, const std::string& where) {
  if (j.is_number()) return cplx(j.get<double>(), 0.0);
  if (j.is_array() && j.size() == 2 && j[0].is_number() && j[1].is_number())
    return cplx(j[0].get<double>(), j[1].get<double>());
  throw ConfigError("config: " + where + " must be a number or [re, im]");
}

Vec3 as_vec3(const json& j, const std::string& where) {
  if (!j.is_array() || j.size() != 3)
    throw ConfigError("config: " + where + " must be an array of 3 numbers");
  return Vec3(as_real(j[0], where), as_real(j[1], where), as_real(j[2], where));
}

CVec3 as_cvec3(const json& j, const std::string& where) {
  if (!j.is_array() || j.size() != 3)
    throw ConfigError("config: " + where + " must be an array of 3 entries");
  return CVec3(as_complex(j[0], where), as_complex(j[1], where), as_complex(j[2], where));
}

Mat3 as_mat3(const json& j, const std::string& where) {
  if (j.is_string() && j.get<std::string>() == "sphere")
    return (2.0 / 3.0) * Mat3::Identity();
  if (!j.is_array() || j.size() != 3)
    throw ConfigError("config: " + where + " must be \"sphere\" or 3 rows of 3 numbers");
  Mat3 m;
  for (int r = 0; r < 3; ++r) m.row(r) = as_vec3(j[r], where).transpose();
  return m;
}

WaveContext parse_wave(const json& j) {
  return WaveContext::make(as_real(require(j, "omega", "wave"), "wave.omega"),
                           as_real(require(j, "eps", "wave"), "wave.eps"),
                           as_complex(require(j, "mu", "wave"), "wave.mu"),
                           as_vec3(require(j, "incidence", "wave"), "wave.incidence"),
                           as_cvec3(require(j, "polarization", "wave"), "wave.polarization"));
}

BoxRegion parse_region(const json& j, const std::string& where) {
  BoxRegion region;
  region.corner = as_vec3(require(j, "corner", where), where + ".corner");
  region.extent = as_vec3(require(j, "extent", where), where + ".extent");
  return region;
}

std::function<double(const Vec3&)> parse_real_field(const json& j, const std::string& where) {
  const std::string type = require(j, "type", where).get<std::string>();
  if (type == "constant") {
    const double value = as_real(require(j, "value", where), where + ".value");
    return [value](const Vec3&) { return value; };
  }
  if (type == "gaussian") {
    const double amplitude = as_real(require(j, "amplitude", where), where + ".amplitude");
    const Vec3 center = as_vec3(require(j, "center", where), where + ".center");
    const double width = as_real(require(j, "width", where), where + ".width");
    const double offset = j.contains("offset") ? as_real(j["offset"], where + ".offset") : 0.0;
    if (!(width > 0.0)) throw ConfigError("config: " + where + ".width must be > 0");
    return [=](const Vec3& x) {
      return offset + amplitude * std::exp(-(x - center).squaredNorm() / (width * width));
    };
  }
  throw ConfigError("config: unknown field type \"" + type + "\" in " + where);
}

std::function<cplx(const Vec3&)> parse_complex_field(const json& j, const std::string& where) {
  const std::string type = require(j, "type", where).get<std::string>();
  if (type == "constant") {
    const cplx value = as_complex(require(j, "value", where), where + ".value");
    return [value](const Vec3&) { return value; };
  }
  if (type == "gaussian") {
    const cplx amplitude = as_complex(require(j, "amplitude", where), where + ".amplitude");
    const Vec3 center = as_vec3(require(j, "center", where), where + ".center");
    const double width = as_real(require(j, "width", where), where + ".width");
    const cplx offset =
        j.contains("offset") ? as_complex(j["offset"], where + ".offset") : cplx(0.0);
    if (!(width > 0.0)) throw ConfigError("config: " + where + ".width must be > 0");
    return [=](const Vec3& x) {
      return offset + amplitude * std::exp(-(x - center).squaredNorm() / (width * width));
    };
  }
  throw ConfigError("config: unknown field type \"" + type + "\" in " + where);
}

SurfaceMesh parse_mesh(const json& j, double a, int refinement) {
  const std::string type = require(j, "type", "shape").get<std::string>();
  if (type == "sphere") return make_icosphere(a, refinement);
  if (type == "ellipsoid") {
    Vec3 axes = as_vec3(require(j, "semi_axes", "shape"), "shape.semi_axes");
    if (!(axes.maxCoeff() > 0.0)) throw ConfigError("config: shape.semi_axes must be > 0");
    axes *= a / axes.maxCoeff();
    return make_ellipsoid(axes, refinement);
  }
  throw ConfigError("config: unknown shape type \"" + type + "\"");
}

ShapeConstants parse_shape_constants(const json& j) {
  if (j.contains("c_s") || j.contains("c_d")) {  // explicit constants
    ShapeConstants sc;
    sc.c_s = as_real(require(j, "c_s", "shape"), "shape.c_s");
    sc.c_d = as_real(require(j, "c_d", "shape"), "shape.c_d");
    sc.tau = j.contains("tau") ? as_mat3(j["tau"], "shape.tau")
                               : (2.0 / 3.0) * Mat3::Identity();
    sc.surface_area = sc.c_s;
    sc.volume = sc.c_d;
    return sc;
  }
  const int refinement =
      j.contains("refinement") ? j["refinement"].get<int>() : 3;
  return shape_constants(parse_mesh(j, 1.0, refinement));
}

std::ofstream open_output(const fs::path& dir, const std::string& name) {
  std::ofstream os(dir / name, std::ios::binary);
  if (!os) throw ConfigError("cannot open output file " + (dir / name).string());
  return os;
}

void write_summary(const fs::path& dir, const json& summary) {
  std::ofstream os(dir / "summary.json", std::ios::binary);
  os << summary.dump(2) << '\n';
}

// ---------------------------------------------------------------- commands

json cmd_shape(const json& cfg, const fs::path& out) {
  const json& shape = require(cfg, "shape", "root");
  const double a = shape.contains("a") ? as_real(shape["a"], "shape.a") : 1.0;
  const cplx k = cfg.contains("k") ? as_complex(cfg["k"], "k") : cplx(0.01, 0.0);
  std::vector<int> refinements;
  for (const auto& r : require(cfg, "refinements", "root")) refinements.push_back(r.get<int>());
  if (refinements.empty()) throw ConfigError("config: refinements must be non-empty");

  auto table = open_output(out, "shape_table.csv");
  table << "refinement,faces,area,volume,c_d,c_s";
  for (int r = 0; r < 3; ++r)
    for (int c = 0; c < 3; ++c) table << ",tau_" << r + 1 << c + 1;
  table << ",half_identity_re,half_identity_im\n";

  SurfaceMesh finest;
  for (int refinement : refinements) {
    const SurfaceMesh mesh = parse_mesh(shape, a, refinement);
    validate_closed(mesh);
    const ShapeConstants sc = shape_constants(mesh);
    const cplx half = half_identity_check(mesh, k);
    table << refinement << ',' << mesh.face_count() << ',' << fmt(sc.surface_area) << ','
          << fmt(sc.volume) << ',' << fmt(sc.c_d) << ',' << fmt(sc.c_s);
    for (int r = 0; r < 3; ++r)
      for (int c = 0; c < 3; ++c) table << ',' << fmt(sc.tau(r, c));
    table << ',' << fmt(half.real()) << ',' << fmt(half.imag()) << '\n';
    finest = mesh;
  }

  if (cfg.contains("export_off") && cfg["export_off"].get<bool>()) {
    auto off = open_output(out, "mesh.off");
    write_off(finest, off);
  }
  return json{{"rows", refinements.size()}, {"faces_finest", finest.face_count()}};
}

json cmd_bie_validate(const json& cfg, const fs::path& out) {
  const json& shape = require(cfg, "shape", "root");
  const int refinement = require(cfg, "refinement", "root").get<int>();
  const WaveContext base = parse_wave(require(cfg, "wave", "root"));
  std::vector<double> a_values;
  for (const auto& a : require(cfg, "a_values", "root"))
    a_values.push_back(as_real(a, "a_values"));
  if (a_values.empty()) throw ConfigError("config: a_values must be non-empty");

  std::vector<PecValidationRow> rows;
  for (double a : a_values) {
    WaveContext ctx = base;
    if (cfg.contains("fixed_ka")) {
      const double ka = as_real(cfg["fixed_ka"], "fixed_ka");
      const double scale = ka / (std::abs(base.k) * a);
      ctx = WaveContext::make(base.omega * scale, base.eps, base.mu, base.incidence,
                              base.polarization);
    }
    rows.push_back(pec_validate(parse_mesh(shape, a, refinement), ctx, refinement));
  }
  auto table = open_output(out, "bie_validation.csv");
  write_pec_validation(table, rows);

  // log-log slope of |Q_bie| against a
  double slope = 0.0;
  if (rows.size() >= 2) {
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (const auto& r : rows) {
      const double x = std::log(r.a), y = std::log(r.q_bie);
      sx += x; sy += y; sxx += x * x; sxy += x * y;
    }
    const double n = static_cast<double>(rows.size());
    slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
  }
  json summary{{"rows", rows.size()}, {"slope_log_q_vs_log_a", slope}};
  summary["max_rel_error"] = 0.0;
  for (const auto& r : rows)
    summary["max_rel_error"] = std::max(summary["max_rel_error"].get<double>(), r.rel_error);
  return summary;
}

struct ScatterSetup {
  ParticleCloud cloud;
  WaveContext ctx;
};

ScatterSetup parse_scatter_cloud(const json& cfg) {
  ScatterSetup setup{.cloud = {}, .ctx = parse_wave(require(cfg, "wave", "root"))};
  const json& jc = require(cfg, "cloud", "root");

  CloudConfig cc;
  cc.region = parse_region(require(jc, "region", "cloud"), "cloud.region");
  cc.a = as_real(require(jc, "a", "cloud"), "cloud.a");
  cc.kappa = jc.contains("kappa") ? as_real(jc["kappa"], "cloud.kappa") : 0.0;
  const std::string kind = require(jc, "kind", "cloud").get<std::string>();
  if (kind == "impedance") cc.kind = ParticleKind::Impedance;
  else if (kind == "pec") cc.kind = ParticleKind::PerfectConductor;
  else throw ConfigError("config: cloud.kind must be \"impedance\" or \"pec\"");
  cc.number_density = parse_real_field(require(jc, "N", "cloud"), "cloud.N");
  if (jc.contains("h")) cc.impedance_factor = parse_complex_field(jc["h"], "cloud.h");
  else cc.impedance_factor = [](const Vec3&) { return cplx(0.0); };
  cc.shape = parse_shape_constants(require(jc, "shape", "cloud"));
  cc.sublattice = jc.contains("sublattice") ? jc["sublattice"].get<int>() : 0;
  if (jc.contains("tau1_override"))
    cc.tau1_override = as_mat3(jc["tau1_override"], "cloud.tau1_override").cast<cplx>();

  if (cc.kind == ParticleKind::PerfectConductor) {
    if (jc.contains("c_gamma")) {
      cc.c_gamma = as_complex(jc["c_gamma"], "cloud.c_gamma");
    } else {
      const int refinement =
          jc.contains("c_gamma_refinement") ? jc["c_gamma_refinement"].get<int>() : 2;
      const SurfaceMesh mesh = parse_mesh(require(jc, "shape", "cloud"), cc.a, refinement);
      const SurfaceCurrent current = solve_current(mesh, setup.ctx);
      cc.c_gamma = gamma_from_current(mesh, setup.ctx.k, current).c_gamma;
    }
  }

  const double cube_side = as_real(require(jc, "cube_side", "cloud"), "cloud.cube_side");
  setup.cloud = place_particles(cc, cube_side);
  return setup;
}

json cmd_scatter(const json& cfg, const fs::path& out) {
  ScatterSetup setup = parse_scatter_cloud(cfg);
  const ParticleCloud& cloud = setup.cloud;
  const WaveContext& ctx = setup.ctx;

  {
    auto snapshot = open_output(out, "cloud.csv");
    write_cloud_snapshot(cloud, snapshot);
  }

  json summary{{"particles", cloud.size()}, {"cubes", cloud.partition.count()}};
  if (cloud.size() > 1) {
    summary["d_min"] = cloud.d_min;
    const ValidityReport vr = validity_report(cloud.particles[0], ctx, cloud.d_min);
    auto validity = open_output(out, "validity.csv");
    validity << "ka,a_over_d,kd,threshold,small_parameter_ok,subwavelength_ok,ok\n"
             << fmt(vr.ka) << ',' << fmt(vr.a_over_d) << ',' << fmt(vr.kd) << ','
             << fmt(vr.threshold) << ',' << int(vr.small_parameter_ok) << ','
             << int(vr.subwavelength_ok) << ',' << int(vr.ok) << '\n';
    summary["validity_ok"] = vr.ok;
  }

  const std::string mode = cfg.contains("solve") ? cfg["solve"].get<std::string>() : "full";
  if (mode != "full" && mode != "reduced" && mode != "both")
    throw ConfigError("config: solve must be \"full\", \"reduced\" or \"both\"");
  const double ratio =
      cfg.contains("reduction_ratio") ? as_real(cfg["reduction_ratio"], "reduction_ratio") : 5.0;

  std::optional<CloudSolution> full;
  std::optional<CloudSolution> reduced;
  if (mode == "full" || mode == "both") {
    full = solve_system(assemble_full(cloud, ctx), SystemLevel::Full, 2.0 * cloud.config.a);
    summary["full_residual"] = full->residual;
  }
  if (mode == "reduced" || mode == "both") {
    reduced = solve_system(reduce_to_cubes(cloud, ctx, ratio), SystemLevel::Reduced,
                           2.0 * cloud.config.a);
    summary["reduced_residual"] = reduced->residual;
  }
  const CloudSolution& primary = full ? *full : *reduced;

  if (cfg.contains("field_grid")) {
    const json& jg = cfg["field_grid"];
    const BoxRegion box = parse_region(jg, "field_grid");
    const json& counts = require(jg, "counts", "field_grid");
    const int nx = counts[0].get<int>(), ny = counts[1].get<int>(), nz = counts[2].get<int>();
    if (nx < 1 || ny < 1 || nz < 1) throw ConfigError("config: field_grid.counts must be >= 1");
    auto write_grid = [&](const CloudSolution& sol, const std::string& name) {
      auto os = open_output(out, name);
      write_field_header(os);
      for (int i = 0; i < nx; ++i)
        for (int j = 0; j < ny; ++j)
          for (int l = 0; l < nz; ++l) {
            const Vec3 x = box.corner + Vec3(box.extent[0] * (nx == 1 ? 0.5 : double(i) / (nx - 1)),
                                             box.extent[1] * (ny == 1 ? 0.5 : double(j) / (ny - 1)),
                                             box.extent[2] * (nz == 1 ? 0.5 : double(l) / (nz - 1)));
            write_field_row(os, x, evaluate_field(sol, ctx, x));
          }
    };
    if (full) write_grid(*full, "field_full.csv");
    if (reduced) write_grid(*reduced, "field_reduced.csv");
  }

  if (cfg.contains("probes")) {
    auto os = open_output(out, "probes.csv");
    os << "x,y,z";
    if (full) os << ",full_ex_re,full_ex_im,full_ey_re,full_ey_im,full_ez_re,full_ez_im";
    if (reduced)
      os << ",red_ex_re,red_ex_im,red_ey_re,red_ey_im,red_ez_re,red_ez_im";
    if (full && reduced) os << ",rel_diff";
    os << '\n';
    double max_rel_diff = 0.0;
    for (const auto& jp : cfg["probes"]) {
      const Vec3 x = as_vec3(jp, "probes");
      os << fmt(x.x()) << ',' << fmt(x.y()) << ',' << fmt(x.z());
      CVec3 ef = CVec3::Zero(), er = CVec3::Zero();
      if (full) {
        ef = evaluate_field(*full, ctx, x);
        for (int c = 0; c < 3; ++c) os << ',' << fmt(ef(c).real()) << ',' << fmt(ef(c).imag());
      }
      if (reduced) {
        er = evaluate_field(*reduced, ctx, x);
        for (int c = 0; c < 3; ++c) os << ',' << fmt(er(c).real()) << ',' << fmt(er(c).imag());
      }
      if (full && reduced) {
        const double rel = (ef - er).norm() / ef.norm();
        max_rel_diff = std::max(max_rel_diff, rel);
        os << ',' << fmt(rel);
      }
      os << '\n';
    }
    if (full && reduced) summary["max_probe_rel_diff"] = max_rel_diff;
  }

  if (cfg.contains("far_field")) {
    const json& jf = cfg["far_field"];
    const int n_polar = require(jf, "n_polar", "far_field").get<int>();
    const int n_azimuth = require(jf, "n_azimuth", "far_field").get<int>();
    auto os = open_output(out, "farfield.csv");
    os << "beta_x,beta_y,beta_z,ax_re,ax_im,ay_re,ay_im,az_re,az_im,transversality\n";
    for (int i = 0; i < n_polar; ++i) {
      const double theta = pi * (i + 0.5) / n_polar;
      for (int j = 0; j < n_azimuth; ++j) {
        const double phi = 2.0 * pi * j / n_azimuth;
        const Vec3 beta(std::sin(theta) * std::cos(phi), std::sin(theta) * std::sin(phi),
                        std::cos(theta));
        const CVec3 amp = cloud_far_field(primary, ctx, beta);
        os << fmt(beta.x()) << ',' << fmt(beta.y()) << ',' << fmt(beta.z());
        for (int c = 0; c < 3; ++c) os << ',' << fmt(amp(c).real()) << ',' << fmt(amp(c).imag());
        os << ',' << fmt(std::abs(cdot(beta.cast<cplx>(), amp))) << '\n';
      }
    }
  }
  return summary;
}

json cmd_homogenize(const json& cfg, const fs::path& out) {
  const WaveContext ctx = parse_wave(require(cfg, "wave", "root"));
  const json& jm = require(cfg, "medium", "root");
  const BoxRegion region = parse_region(require(jm, "region", "medium"), "medium.region");
  const double side = as_real(require(jm, "grid_side", "medium"), "medium.grid_side");
  auto density = parse_real_field(require(jm, "N", "medium"), "medium.N");
  auto impedance = parse_complex_field(require(jm, "h", "medium"), "medium.h");

  LimitSolveOptions opts;
  opts.cell.c0 = jm.contains("c0") ? as_real(jm["c0"], "medium.c0") : 4.0 * pi;
  opts.cell.tau = jm.contains("tau") ? as_mat3(jm["tau"], "medium.tau")
                                     : (2.0 / 3.0) * Mat3::Identity();
  if (jm.contains("kind") && jm["kind"].get<std::string>() == "pec") {
    opts.cell.kind = ParticleKind::PerfectConductor;
    opts.cell.c_d = as_real(require(jm, "c_d", "medium"), "medium.c_d");
    opts.cell.c_gamma = as_complex(require(jm, "c_gamma", "medium"), "medium.c_gamma");
  }
  opts.self_term = jm.contains("self_term") && jm["self_term"].get<bool>();

  MediumGrid grid = make_medium_grid(region, side, density, impedance);
  const CloudSolution limit = solve_limit_ie(grid, ctx, opts);

  {
    auto os = open_output(out, "limit_field.csv");
    write_field_header(os);
    for (int p = 0; p < grid.count(); ++p)
      write_field_row(os, grid.partition.centers[p], grid.field[p]);
  }
  {
    auto os = open_output(out, "medium_maps.csv");
    write_medium_maps(grid, ctx, opts.cell.c0, os);
  }

  json summary{{"cells", grid.count()}, {"limit_residual", limit.residual}};

  if (cfg.contains("cloud_sweep")) {
    const json& js = cfg["cloud_sweep"];
    const double kappa = js.contains("kappa") ? as_real(js["kappa"], "cloud_sweep.kappa") : 0.0;
    const double cube_side =
        as_real(require(js, "cube_side", "cloud_sweep"), "cloud_sweep.cube_side");

    CloudConfig cc;
    cc.region = region;
    cc.number_density = density;
    cc.impedance_factor = impedance;
    cc.kappa = kappa;
    cc.kind = ParticleKind::Impedance;
    cc.shape.c_s = opts.cell.c0;  // the sweep studies exactly the limit's medium
    cc.shape.c_d = opts.cell.c_d;
    cc.shape.tau = opts.cell.tau;
    cc.sublattice = js.contains("sublattice") ? js["sublattice"].get<int>() : 0;

    std::vector<Vec3> probes;
    if (cfg.contains("probes"))
      for (const auto& jp : cfg["probes"]) probes.push_back(as_vec3(jp, "probes"));
    if (probes.empty()) throw ConfigError("config: cloud_sweep requires probes");

    auto table = open_output(out, "convergence.csv");
    table << "a,particles,max_abs_diff,max_rel_diff\n";
    std::vector<double> diffs;
    for (const auto& ja : require(js, "a_values", "cloud_sweep")) {
      cc.a = as_real(ja, "cloud_sweep.a_values");
      const ParticleCloud cloud = place_particles(cc, cube_side);
      const CloudSolution sol =
          solve_system(assemble_full(cloud, ctx), SystemLevel::Full, 2.0 * cc.a);
      double max_abs = 0.0, max_rel = 0.0;
      for (const Vec3& x : probes) {
        const CVec3 ec = evaluate_field(sol, ctx, x);
        const CVec3 el = evaluate_field(limit, ctx, x);
        const double diff = (ec - el).norm();
        max_abs = std::max(max_abs, diff);
        max_rel = std::max(max_rel, diff / el.norm());
      }
      diffs.push_back(max_abs);
      table << fmt(cc.a) << ',' << cloud.size() << ',' << fmt(max_abs) << ',' << fmt(max_rel)
            << '\n';
    }
    bool decreasing = diffs.size() >= 2;
    for (std::size_t i = 1; i < diffs.size(); ++i) decreasing &= diffs[i] < diffs[i - 1];
    summary["convergence_monotone"] = decreasing;

    // Riemann-sum identity: the reduced system of a cloud on this very
    // grid must coincide with the limiting collocation matrix.
    cc.a = as_real(require(js, "a_values", "cloud_sweep")[0], "cloud_sweep.a_values");
    const ParticleCloud check_cloud = place_particles(cc, side);
    const DipoleSystem reduced_sys = reduce_to_cubes(check_cloud, ctx, 0.0);
    const DipoleSystem limit_sys = limit_ie_system(grid, ctx, LimitSolveOptions{opts.cell, false});
    summary["riemann_identity_max_abs_diff"] =
        (reduced_sys.matrix - limit_sys.matrix).cwiseAbs().maxCoeff();
  }
  return summary;
}

json cmd_design(const json& cfg, const fs::path& out) {
  const WaveContext ctx = parse_wave(require(cfg, "wave", "root"));
  const json& jd = require(cfg, "design", "root");
  const std::string target_kind = require(jd, "target", "design").get<std::string>();
  if (target_kind != "n" && target_kind != "mu")
    throw ConfigError("config: design.target must be \"n\" or \"mu\"");
  const BoxRegion region = parse_region(require(jd, "region", "design"), "design.region");
  const double side = as_real(require(jd, "grid_side", "design"), "design.grid_side");
  const double c0 = jd.contains("c0") ? as_real(jd["c0"], "design.c0") : 4.0 * pi;
  auto density = parse_real_field(require(jd, "N", "design"), "design.N");

  const CubePartition part = make_partition(region, side);
  std::vector<double> n_samples(part.count());
  for (int p = 0; p < part.count(); ++p) {
    n_samples[p] = density(part.centers[p]);
    if (n_samples[p] < 0.0) throw ConfigError("config: design.N < 0 at a cell center");
  }

  auto target_field =
      parse_complex_field(require(jd, target_kind == "n" ? "n_target" : "mu_target", "design"),
                          "design.target");
  std::vector<cplx> target(part.count());
  for (int p = 0; p < part.count(); ++p) target[p] = target_field(part.centers[p]);

  const DesignResult result = target_kind == "n"
                                  ? design_h_for_n(target, n_samples, ctx, c0)
                                  : design_h_for_mu(target, n_samples, ctx, c0);

  bool negative_refraction = false;
  double max_roundtrip = 0.0;
  {
    auto os = open_output(out, "design_map.csv");
    os << "x,y,z,N,feasible,h_re,h_im,target_re,target_im,achieved_re,achieved_im,"
          "roundtrip_error\n";
    for (int p = 0; p < part.count(); ++p) {
      const Vec3& x = part.centers[p];
      cplx achieved(0.0, 0.0);
      double roundtrip = 0.0;
      if (result.feasible[p]) {
        achieved = target_kind == "n"
                       ? refraction_coefficient(result.h[p], n_samples[p], ctx, c0)
                       : permeability(result.h[p], n_samples[p], ctx, c0);
        roundtrip = std::abs(achieved - target[p]);
        max_roundtrip = std::max(max_roundtrip, roundtrip);
        if (target_kind == "n" && achieved.real() < 0.0) negative_refraction = true;
      }
      os << fmt(x.x()) << ',' << fmt(x.y()) << ',' << fmt(x.z()) << ',' << fmt(n_samples[p])
         << ',' << int(bool(result.feasible[p])) << ',' << fmt(result.h[p].real()) << ','
         << fmt(result.h[p].imag()) << ',' << fmt(target[p].real()) << ','
         << fmt(target[p].imag()) << ',' << fmt(achieved.real()) << ',' << fmt(achieved.imag())
         << ',' << fmt(roundtrip) << '\n';
    }
  }
  {
    auto os = open_output(out, "infeasible.csv");
    os << "cell,x,y,z\n";
    for (int p = 0; p < part.count(); ++p)
      if (!result.feasible[p])
        os << p << ',' << fmt(part.centers[p].x()) << ',' << fmt(part.centers[p].y()) << ','
           << fmt(part.centers[p].z()) << '\n';
  }

  const std::string feasibility =
      result.infeasible_count == 0
          ? "full"
          : (result.infeasible_count == part.count() ? "none" : "partial");
  json summary{{"cells", part.count()},
               {"infeasible_cells", result.infeasible_count},
               {"feasibility", feasibility},
               {"max_roundtrip_error", max_roundtrip}};
  if (target_kind == "n") summary["negative_refraction_achieved"] = negative_refraction;
  // A fully infeasible target is a feasibility failure; a partial design
  // still yields a usable map plus the per-cell report.
  if (feasibility == "none") throw RegimeError("design: no cell admits Re h >= 0");
  return summary;
}

}  // namespace

int run(int argc, const char* const* argv) {
  CLI::App app{"Small-particle electromagnetic scattering and material design engine"};
  app.require_subcommand(1);

  std::string config_path;
  std::string out_dir = ".";
  unsigned threads = 0;
  bool seedless = false;

  const std::vector<std::pair<std::string, std::string>> commands = {
      {"shape", "Shape constants, tensor and half-identity tables"},
      {"bie-validate", "Single-body solver vs the asymptotic moment formula"},
      {"scatter", "Many-body solve (full and cube-reduced) with field output"},
      {"homogenize", "Limiting-equation solve, medium maps, cloud convergence"},
      {"design", "Invert the refraction/permeability formulas for h(x)"}};
  for (const auto& [name, help] : commands) {
    CLI::App* sub = app.add_subcommand(name, help);
    sub->add_option("--config", config_path, "JSON configuration file")->required();
    sub->add_option("--out", out_dir, "Output directory");
    sub->add_option("--threads", threads, "Worker threads (0 = auto)");
    sub->add_flag("--seedless", seedless,
                  "Assert the run uses no randomness (always true; guard flag)");
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  set_thread_count(threads);
  const std::string command = app.get_subcommands().front()->get_name();

  json summary;
  int exit_code = 0;
  fs::path out(out_dir);
  try {
    fs::create_directories(out);
    std::ifstream in(config_path, std::ios::binary);
    if (!in) throw ConfigError("cannot open config file " + config_path);
    json cfg;
    try {
      cfg = json::parse(in, nullptr, true, /*ignore_comments=*/true);
    } catch (const json::exception& e) {
      throw ConfigError(std::string("config: invalid JSON: ") + e.what());
    }

    if (command == "shape") summary = cmd_shape(cfg, out);
    else if (command == "bie-validate") summary = cmd_bie_validate(cfg, out);
    else if (command == "scatter") summary = cmd_scatter(cfg, out);
    else if (command == "homogenize") summary = cmd_homogenize(cfg, out);
    else summary = cmd_design(cfg, out);
    summary["status"] = "ok";
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    summary["status"] = "config-error";
    summary["error"] = e.what();
    exit_code = 2;
  } catch (const RegimeError& e) {
    std::cerr << "regime error: " << e.what() << '\n';
    summary["status"] = "regime-error";
    summary["error"] = e.what();
    exit_code = 3;
  } catch (const std::exception& e) {
    std::cerr << "numerical failure: " << e.what() << '\n';
    summary["status"] = "numerical-failure";
    summary["error"] = e.what();
    exit_code = 4;
  }

  summary["command"] = command;
  summary["exit_code"] = exit_code;
  try {
    write_summary(out, summary);
  } catch (...) {
    // the summary is best effort when the output directory itself is broken
  }
  return exit_code;
}

}  // namespace emscat::cli
