#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <numeric>
#include <sstream>

#include "emscat/kernels.hpp"
#include "emscat/manybody.hpp"
#include "oracles.hpp"

using namespace emscat;

namespace {

WaveContext unit_ctx() {
  return WaveContext::make(1.0, 1.0, cplx(1.0, 0.0), Vec3(0, 0, 1), CVec3(1, 0, 0));
}

ShapeConstants sphere_constants() {
  ShapeConstants sc;
  sc.c_s = 4.0 * pi;
  sc.c_d = 4.0 * pi / 3.0;
  sc.surface_area = sc.c_s;
  sc.volume = sc.c_d;
  sc.tau = (2.0 / 3.0) * Mat3::Identity();
  return sc;
}

CloudConfig uniform_cloud(double a, double density, cplx h, double kappa = 0.0) {
  CloudConfig cfg;
  cfg.region = BoxRegion{Vec3::Zero(), Vec3::Ones()};
  cfg.number_density = [density](const Vec3&) { return density; };
  cfg.impedance_factor = [h](const Vec3&) { return h; };
  cfg.a = a;
  cfg.kappa = kappa;
  cfg.kind = ParticleKind::Impedance;
  cfg.shape = sphere_constants();
  return cfg;
}

}  // namespace

TEST_CASE("particle placement") {
  SUBCASE("uniform density realizes the global count") {
    // N |Omega| / a^2 = 100 split over 8 cubes of quota 12.5
    const ParticleCloud cloud = place_particles(uniform_cloud(0.1e-1, 1e-2, 1.0), 0.5);
    CHECK(cloud.size() == 100);
    CHECK(cloud.partition.count() == 8);
  }

  SUBCASE("zero density places nothing") {
    const ParticleCloud cloud = place_particles(uniform_cloud(0.01, 0.0, 1.0), 0.5);
    CHECK(cloud.size() == 0);
  }

  SUBCASE("halving a quadruples the count when kappa = 0") {
    const int m1 = place_particles(uniform_cloud(0.01, 1e-2, 1.0), 0.5).size();
    const int m2 = place_particles(uniform_cloud(0.005, 1e-2, 1.0), 0.5).size();
    CHECK(m2 == 4 * m1);
  }

  SUBCASE("perfectly conducting clouds use the cubic exponent") {
    CloudConfig cfg = uniform_cloud(0.05, 1e-3, 0.0);
    cfg.kind = ParticleKind::PerfectConductor;
    // N |Omega| / a^3 = 1e-3 / 1.25e-4 = 8
    CHECK(place_particles(cfg, 1.0).size() == 8);
  }

  SUBCASE("kappa enters the quota exponent") {
    // a^(2-kappa) with kappa = 0.5: 1.0 / (0.01)^1.5 = 1000
    const ParticleCloud cloud = place_particles(uniform_cloud(0.01, 1.0, 1.0, 0.5), 1.0);
    CHECK(cloud.size() == 1000);
  }

  SUBCASE("dense packing raises a regime error") {
    CHECK_THROWS_AS(place_particles(uniform_cloud(0.05, 10.0, 1.0), 0.5), RegimeError);
  }

  SUBCASE("negative density is a config error") {
    CloudConfig cfg = uniform_cloud(0.01, 1.0, 1.0);
    cfg.number_density = [](const Vec3& x) { return x.x() < 0.5 ? -1.0 : 1.0; };
    CHECK_THROWS_AS(place_particles(cfg, 0.5), ConfigError);
  }

  SUBCASE("minimal spacing equals the sub-lattice pitch") {
    // 27 particles in one cube: 3x3x3 lattice, pitch 1/3
    const ParticleCloud cloud = place_particles(uniform_cloud(0.01, 27.0e-4, 1.0), 1.0);
    REQUIRE(cloud.size() == 27);
    CHECK(cloud.d_min == doctest::Approx(1.0 / 3.0).epsilon(1e-12));
    // an explicit sub-lattice spreads the same count more finely
    CloudConfig cfg = uniform_cloud(0.01, 27.0e-4, 1.0);
    cfg.sublattice = 5;
    CHECK(place_particles(cfg, 1.0).d_min == doctest::Approx(0.2).epsilon(1e-12));
  }

  SUBCASE("snapshot lists every particle") {
    const ParticleCloud cloud = place_particles(uniform_cloud(0.01, 27.0e-4, 1.0), 1.0);
    std::ostringstream os;
    write_cloud_snapshot(cloud, os);
    const std::string text = os.str();
    CHECK(std::count(text.begin(), text.end(), '\n') == cloud.size() + 1);
  }
}

TEST_CASE("full system assembly") {
  const WaveContext ctx = unit_ctx();

  SUBCASE("single particle has no interactions") {
    CloudConfig cfg = uniform_cloud(0.01, 1e-4, cplx(2, 1));
    const ParticleCloud cloud = place_particles(cfg, 1.0);
    REQUIRE(cloud.size() == 1);
    const DipoleSystem sys = assemble_full(cloud, ctx);
    CHECK((sys.matrix - Eigen::MatrixXcd::Identity(3, 3)).cwiseAbs().maxCoeff() == 0.0);
    const CloudSolution sol = solve_system(sys, SystemLevel::Full, 2.0 * cfg.a);
    CHECK((sol.a[0] - plane_wave_curl(ctx, cloud.particles[0].center)).norm() < 1e-15);
  }

  SUBCASE("zero impedance factor decouples everything") {
    const ParticleCloud cloud = place_particles(uniform_cloud(0.01, 64e-4, 0.0), 0.5);
    const DipoleSystem sys = assemble_full(cloud, ctx);
    const CloudSolution sol = solve_system(sys, SystemLevel::Full, 2.0 * 0.01);
    for (int m = 0; m < cloud.size(); ++m)
      CHECK((sol.a[m] - plane_wave_curl(ctx, cloud.particles[m].center)).norm() < 1e-15);
  }

  SUBCASE("two-body system matches a hand-assembled pair") {
    const double a = 0.01;
    CloudConfig cfg = uniform_cloud(a, 2e-4, 0.0);
    cfg.impedance_factor = [](const Vec3& x) { return cplx(30.0 + 10.0 * x.z(), 5.0); };
    const ParticleCloud cloud = place_particles(cfg, 1.0);
    REQUIRE(cloud.size() == 2);

    const Vec3 x1 = cloud.particles[0].center, x2 = cloud.particles[1].center;
    const cplx h1 = cloud.particles[0].impedance().h, h2 = cloud.particles[1].impedance().h;
    auto b_of = [&](cplx h) -> CMat3 {
      return (-h * 4.0 * pi * a * a / (iu * ctx.omega * ctx.mu)) *
             ((2.0 / 3.0) * Mat3::Identity()).cast<cplx>();
    };
    Eigen::MatrixXcd lhs = Eigen::MatrixXcd::Identity(6, 6);
    lhs.block<3, 3>(0, 3) = -double_curl_matrix(ctx.k, x1, x2) * b_of(h2);
    lhs.block<3, 3>(3, 0) = -double_curl_matrix(ctx.k, x2, x1) * b_of(h1);
    Eigen::VectorXcd rhs(6);
    rhs.segment<3>(0) = plane_wave_curl(ctx, x1);
    rhs.segment<3>(3) = plane_wave_curl(ctx, x2);
    const Eigen::VectorXcd expected = lhs.partialPivLu().solve(rhs);

    const CloudSolution sol =
        solve_system(assemble_full(cloud, ctx), SystemLevel::Full, 2.0 * a);
    CHECK((sol.a[0] - expected.segment<3>(0)).norm() < 1e-12 * expected.norm());
    CHECK((sol.a[1] - expected.segment<3>(3)).norm() < 1e-12 * expected.norm());
  }

  SUBCASE("coincident centers rejected") {
    std::vector<Vec3> centers{Vec3::Zero(), Vec3::Zero()};
    std::vector<CMat3> moments{CMat3::Identity(), CMat3::Identity()};
    CHECK_THROWS_AS(assemble_dipole_system(centers, moments, unit_ctx()), ConfigError);
  }
}

TEST_CASE("system solve") {
  const WaveContext ctx = unit_ctx();
  CloudConfig cfg = uniform_cloud(1e-3, 27e-6, cplx(25, 10));
  const ParticleCloud cloud = place_particles(cfg, 1.0);
  REQUIRE(cloud.size() == 27);
  const DipoleSystem sys = assemble_full(cloud, ctx);
  const CloudSolution sol = solve_system(sys, SystemLevel::Full, 2e-3);

  SUBCASE("residual meets the reporting contract") {
    CHECK(sol.residual <= 1e-10);
    CHECK(sol.rcond > 0.0);
  }

  SUBCASE("permutation invariance") {
    std::vector<int> perm(cloud.size());
    std::iota(perm.begin(), perm.end(), 0);
    std::swap(perm[0], perm[13]);
    std::swap(perm[5], perm[20]);
    std::vector<Vec3> centers;
    std::vector<CMat3> moments;
    for (int i : perm) {
      centers.push_back(sys.centers[i]);
      moments.push_back(sys.moments[i]);
    }
    const CloudSolution permuted = solve_system(
        assemble_dipole_system(centers, moments, ctx), SystemLevel::Full, 2e-3);
    double scale = 0.0, worst = 0.0;
    for (int i = 0; i < cloud.size(); ++i) {
      scale = std::max(scale, sol.a[i].norm());
      worst = std::max(worst, (permuted.a[i] - sol.a[perm[i]]).norm());
    }
    CHECK(worst < 1e-8 * scale);
  }

  SUBCASE("linearity in the incident polarization") {
    WaveContext doubled = ctx;
    doubled.polarization *= 2.0;
    const CloudSolution sol2 =
        solve_system(assemble_full(cloud, doubled), SystemLevel::Full, 2e-3);
    double scale = 0.0, worst = 0.0;
    for (int i = 0; i < cloud.size(); ++i) {
      scale = std::max(scale, sol.a[i].norm());
      worst = std::max(worst, (sol2.a[i] - 2.0 * sol.a[i]).norm());
    }
    CHECK(worst < 1e-12 * scale);
    const Vec3 probe(1.5, 0.4, 0.3);
    CHECK((evaluate_field(sol2, doubled, probe) - 2.0 * evaluate_field(sol, ctx, probe)).norm() <
          1e-12 * evaluate_field(sol, ctx, probe).norm());
  }
}

TEST_CASE("cube reduction") {
  const WaveContext ctx = unit_ctx();

  SUBCASE("single cube has no coupling") {
    const ParticleCloud cloud = place_particles(uniform_cloud(1e-3, 27e-6, cplx(10, 0)), 1.0);
    const DipoleSystem sys = reduce_to_cubes(cloud, ctx, 0.0);
    CHECK(sys.size() == 1);
    const CloudSolution sol = solve_system(sys, SystemLevel::Reduced, 0.0);
    CHECK((sol.a[0] - plane_wave_curl(ctx, cloud.partition.centers[0])).norm() < 1e-15);
  }

  SUBCASE("system size follows the partition, not the particle count") {
    for (double a : {2e-3, 1e-3}) {
      const ParticleCloud cloud = place_particles(uniform_cloud(a, 64e-6, cplx(10, 0)), 0.5);
      CHECK(reduce_to_cubes(cloud, ctx, 0.0).matrix.rows() == 3 * 8);
    }
  }

  SUBCASE("insufficient scale separation is rejected") {
    const ParticleCloud cloud = place_particles(uniform_cloud(1e-3, 64e-6, cplx(10, 0)), 0.5);
    // 8 per cube on a 2x2x2 lattice: d = 0.25, b = 0.5, ratio 2
    CHECK_THROWS_AS(reduce_to_cubes(cloud, ctx, 5.0), RegimeError);
    CHECK_NOTHROW(reduce_to_cubes(cloud, ctx, 2.0));
  }

  SUBCASE("reduced solution tracks the full one") {
    CloudConfig cfg = uniform_cloud(5e-4, 1.08e-5, cplx(400, 0));
    cfg.sublattice = 5;
    const ParticleCloud cloud = place_particles(cfg, 1.0 / 3.0);
    const CloudSolution full =
        solve_system(assemble_full(cloud, ctx), SystemLevel::Full, 1e-3);
    const CloudSolution reduced =
        solve_system(reduce_to_cubes(cloud, ctx, 5.0), SystemLevel::Reduced, 1e-3);
    oracles::Rng rng;
    for (int trial = 0; trial < 6; ++trial) {
      const Vec3 probe = Vec3(0.5, 0.5, 0.5) + 1.1 * rng.unit3();
      const CVec3 ef = evaluate_field(full, ctx, probe);
      const CVec3 er = evaluate_field(reduced, ctx, probe);
      CHECK((ef - er).norm() < 0.25 * ef.norm());
    }
  }

  SUBCASE("riemann refinement converges") {
    CloudConfig cfg = uniform_cloud(1e-3, 0.0, cplx(35, 5));
    cfg.number_density = [](const Vec3& x) {
      return 2e-4 * std::exp(-(x - Vec3(0.5, 0.5, 0.5)).squaredNorm() / 0.18);
    };
    const Vec3 probe(1.4, 0.7, 0.6);
    std::vector<CVec3> fields;
    for (double side : {0.5, 0.25, 0.125}) {
      const ParticleCloud cloud = place_particles(cfg, side);
      const CloudSolution sol =
          solve_system(reduce_to_cubes(cloud, ctx, 0.0), SystemLevel::Reduced, 0.0);
      fields.push_back(evaluate_field(sol, ctx, probe));
    }
    const double d1 = (fields[1] - fields[0]).norm();
    const double d2 = (fields[2] - fields[1]).norm();
    CHECK(d2 < d1);
  }
}

TEST_CASE("field evaluation") {
  const WaveContext ctx = unit_ctx();

  SUBCASE("empty cloud reproduces the incident wave") {
    const ParticleCloud cloud = place_particles(uniform_cloud(0.01, 0.0, 1.0), 0.5);
    const CloudSolution sol =
        solve_system(assemble_full(cloud, ctx), SystemLevel::Full, 0.02);
    const Vec3 x(0.3, 0.9, 2.0);
    CHECK((evaluate_field(sol, ctx, x) - plane_wave(ctx, x)).norm() <
          1e-14 * plane_wave(ctx, x).norm());
  }

  SUBCASE("single particle superposes its dipole field") {
    const ParticleCloud cloud = place_particles(uniform_cloud(0.01, 1e-4, cplx(3, 1)), 1.0);
    REQUIRE(cloud.size() == 1);
    const CloudSolution sol =
        solve_system(assemble_full(cloud, ctx), SystemLevel::Full, 0.02);
    const Vec3 x(0.9, 0.2, 1.4);
    const CVec3 q = sol.dipole_moment(0);
    const CVec3 expected =
        plane_wave(ctx, x) + dipole_field(q, cloud.particles[0].center, ctx.k, x);
    CHECK((evaluate_field(sol, ctx, x) - expected).norm() < 1e-15 * expected.norm());
  }

  SUBCASE("near-field probes are rejected") {
    const ParticleCloud cloud = place_particles(uniform_cloud(0.01, 1e-4, cplx(3, 1)), 1.0);
    const CloudSolution sol =
        solve_system(assemble_full(cloud, ctx), SystemLevel::Full, 0.02);
    CHECK_THROWS_AS(evaluate_field(sol, ctx, cloud.particles[0].center + Vec3(0.015, 0, 0)),
                    RegimeError);
  }

  SUBCASE("solved fields stay divergence free") {
    const ParticleCloud cloud = place_particles(uniform_cloud(5e-3, 6.75e-4, cplx(20, 0)), 1.0);
    REQUIRE(cloud.size() == 27);
    const CloudSolution sol =
        solve_system(assemble_full(cloud, ctx), SystemLevel::Full, 1e-2);
    oracles::Rng rng;
    int tested = 0;
    while (tested < 10) {
      const Vec3 x = rng.vec3(0.05, 0.95);
      double clearance = 1e9;
      for (const auto& p : cloud.particles)
        clearance = std::min(clearance, (x - p.center).norm());
      if (clearance < 0.08) continue;
      ++tested;
      const cplx div = oracles::fd_divergence(
          [&](const Vec3& p) { return evaluate_field(sol, ctx, p); }, x, 3e-4);
      const double scale = std::abs(ctx.k) * evaluate_field(sol, ctx, x).norm();
      CHECK(std::abs(div) < 1e-3 * scale);
    }
  }
}

TEST_CASE("effective field") {
  const WaveContext ctx = unit_ctx();

  SUBCASE("single particle sees the incident field") {
    const ParticleCloud cloud = place_particles(uniform_cloud(0.01, 1e-4, cplx(3, 1)), 1.0);
    const CloudSolution sol =
        solve_system(assemble_full(cloud, ctx), SystemLevel::Full, 0.02);
    const Vec3 x1 = cloud.particles[0].center;
    CHECK((effective_field_at_particle(sol, ctx, 0) - plane_wave(ctx, x1)).norm() <
          1e-15 * plane_wave(ctx, x1).norm());
  }

  SUBCASE("self term is excluded and nothing else") {
    const ParticleCloud cloud = place_particles(uniform_cloud(1e-3, 8e-6, cplx(15, 5)), 0.5);
    REQUIRE(cloud.size() == 8);
    const CloudSolution sol =
        solve_system(assemble_full(cloud, ctx), SystemLevel::Full, 2e-3);
    const int j = 3;
    const Vec3 xj = sol.centers[j];
    CVec3 expected = plane_wave(ctx, xj);
    for (int i = 0; i < 8; ++i) {
      if (i == j) continue;
      expected += dipole_field(sol.dipole_moment(i), sol.centers[i], ctx.k, xj);
    }
    CHECK((effective_field_at_particle(sol, ctx, j) - expected).norm() <
          1e-14 * expected.norm());
    // away from the cloud the two fields differ by one dipole term exactly
    const Vec3 probe = xj + Vec3(0.9, 0.8, 0.7);
    const CVec3 total = evaluate_field(sol, ctx, probe);
    CVec3 without_j = plane_wave(ctx, probe);
    for (int i = 0; i < 8; ++i)
      if (i != j)
        without_j += dipole_field(sol.dipole_moment(i), sol.centers[i], ctx.k, probe);
    const CVec3 own = dipole_field(sol.dipole_moment(j), sol.centers[j], ctx.k, probe);
    CHECK((total - without_j - own).norm() < 1e-15);
  }
}

TEST_CASE("cloud far field") {
  const WaveContext ctx = unit_ctx();
  const ParticleCloud cloud = place_particles(uniform_cloud(1e-3, 27e-6, cplx(25, 5)), 1.0);
  const CloudSolution sol = solve_system(assemble_full(cloud, ctx), SystemLevel::Full, 2e-3);
  oracles::Rng rng;

  SUBCASE("transversality") {
    for (int trial = 0; trial < 10; ++trial) {
      const Vec3 beta = rng.unit3();
      const CVec3 amp = cloud_far_field(sol, ctx, beta);
      CHECK(std::abs(cdot(beta.cast<cplx>(), amp)) < 1e-12 * (amp.norm() + 1.0));
    }
  }

  SUBCASE("matches the scaled scattered field at large radius") {
    const Vec3 beta = rng.unit3();
    const CVec3 amp = cloud_far_field(sol, ctx, beta);
    const double r = 5e3;
    const Vec3 x = Vec3(0.5, 0.5, 0.5) + r * beta;  // radiate from the cloud's middle
    const CVec3 scattered = evaluate_field(sol, ctx, x) - plane_wave(ctx, x);
    const cplx carrier = std::exp(iu * ctx.k * cplx((x - Vec3(0.5, 0.5, 0.5)).norm()));
    // compare magnitudes: |v| ~ |A| / r with a 1/r relative error tail
    CHECK(scattered.norm() * r == doctest::Approx(std::abs(carrier) * amp.norm()).epsilon(2e-3));
  }
}
