#include <doctest.h>

#include <random>

#include "vorocrust/point_index.hpp"
#include "vorocrust/surface_oracle.hpp"

using namespace vorocrust;

TEST_CASE("surface spec grammar") {
  CHECK(SurfaceSpec::parse("sphere:1").to_string() == "sphere:1");
  CHECK(SurfaceSpec::parse("torus:1,0.3").to_string() == "torus:1,0.3");
  CHECK(SurfaceSpec::parse("ellipsoid:2,1,1").to_string() == "ellipsoid:2,1,1");
  for (const char* bad : {"", "cube:1", "sphere:", "sphere:-1", "torus:1", "torus:1,0.6", "sphere:1,2",
                          "ellipsoid:1,2,3"}) {
    CAPTURE(bad);
    CHECK_THROWS_AS(SurfaceSpec::parse(bad), Error);
  }
}

TEST_CASE("signed_side examples") {
  const auto sphere = SurfaceSpec::sphere(1.0);
  const auto torus = SurfaceSpec::torus(1.0, 0.3);
  CHECK(signed_side(sphere, Vec3(0, 0, 0)) == Side::Inside);
  CHECK(signed_side(sphere, Vec3(2, 0, 0)) == Side::Outside);
  CHECK(signed_side(sphere, Vec3(0, 0, 1)) == Side::On);
  CHECK(signed_side(torus, Vec3(1, 0, 0.3)) == Side::On);
  CHECK(signed_side(torus, Vec3(1, 0, 0)) == Side::Inside);
  CHECK(signed_side(torus, Vec3(0, 0, 0)) == Side::Outside);
}

TEST_CASE("sphere lfs is the radius") {
  const auto sphere = SurfaceSpec::sphere(1.0);
  for (const Vec3& x : quasi_uniform_points(sphere, 200)) CHECK(lfs(sphere, x) == doctest::Approx(1.0));
}

TEST_CASE("torus lfs matches the distance to a dense medial axis") {
  const auto torus = SurfaceSpec::torus(1.0, 0.3);
  // Medial axis: the core circle inside, the symmetry axis outside.
  std::vector<Vec3> medial;
  for (int i = 0; i < 20000; ++i) {
    const double a = 2.0 * kPi * i / 20000;
    medial.emplace_back(std::cos(a), std::sin(a), 0.0);
  }
  for (int i = 0; i <= 4000; ++i) medial.emplace_back(0.0, 0.0, -2.0 + 4.0 * i / 4000);
  const PointIndex index(medial);
  for (const Vec3& x : quasi_uniform_points(torus, 2000)) {
    const double brute = std::sqrt(index.nearest(x).dist2);
    CHECK(lfs(torus, x) == doctest::Approx(brute).epsilon(1e-3));
    CHECK(lfs(torus, x) == doctest::Approx(0.3));
  }
}

TEST_CASE("ellipsoid lfs at the pole matches a maximal-ball medial approximation") {
  const auto e = SurfaceSpec::ellipsoid(2.0, 1.0, 1.0);
  const std::vector<Vec3> dense = quasi_uniform_points(e, 200000);
  const PointIndex surface(dense);
  // Centers of maximal inscribed balls approximate the inner medial axis.
  std::vector<Vec3> centers;
  for (const Vec3& x : quasi_uniform_points(e, 3000)) {
    const Vec3 n = Vec3(x.x() / 4.0, x.y(), x.z()).normalized();
    double lo = 0.0;
    double hi = 2.0;
    for (int it = 0; it < 50; ++it) {
      const double r = 0.5 * (lo + hi);
      const Vec3 c = x - r * n;
      const bool empty = signed_side(e, c) == Side::Inside && std::sqrt(surface.nearest(c).dist2) >= r * (1 - 1e-4);
      (empty ? lo : hi) = r;
    }
    centers.push_back(x - lo * n);
  }
  const PointIndex medial(centers);
  const Vec3 pole(0, 0, 1);
  const double oracle = std::sqrt(medial.nearest(pole).dist2);
  CHECK(lfs(e, pole) == doctest::Approx(oracle).epsilon(2e-2));
  // Regression value.
  CHECK(lfs(e, pole) == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(lfs(e, Vec3(2, 0, 0)) == doctest::Approx(0.5).epsilon(1e-9));
}

TEST_CASE("project examples") {
  const auto sphere = SurfaceSpec::sphere(1.0);
  const auto torus = SurfaceSpec::torus(1.0, 0.3);
  const SurfacePoint p = project(sphere, Vec3(2, 0, 0));
  CHECK((p.position - Vec3(1, 0, 0)).norm() < 1e-12);
  CHECK(signed_distance(sphere, Vec3(2, 0, 0)) == doctest::Approx(1.0));
  const SurfacePoint q = project(torus, Vec3(1.2, 0, 0));
  CHECK((q.position - Vec3(1.3, 0, 0)).norm() < 1e-12);
  CHECK((q.normal - Vec3(1, 0, 0)).norm() < 1e-12);
  try {
    project(torus, Vec3(1, 0, 0));
    FAIL("expected AmbiguousProjection");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::AmbiguousProjection);
  }
  CHECK_THROWS_AS(project(sphere, Vec3(0, 0, 0)), Error);
}

TEST_SUITE("surface oracle properties") {
  TEST_CASE("identity on M, idempotence, side along the normal, 1-Lipschitz lfs") {
    std::mt19937_64 rng(3);
    for (const auto& spec : {SurfaceSpec::sphere(1.0), SurfaceSpec::torus(1.0, 0.3),
                             SurfaceSpec::ellipsoid(2.0, 1.0, 1.0), SurfaceSpec::ellipsoid(1.5, 1.2, 0.8)}) {
      CAPTURE(spec.to_string());
      const auto pts = quasi_uniform_points(spec, 400);
      std::uniform_real_distribution<double> u(-0.95, 0.95);
      for (std::size_t i = 0; i < pts.size(); ++i) {
        const Vec3& x = pts[i];
        const SurfacePoint p = project(spec, x);
        CHECK((p.position - x).norm() < 1e-9);
        CHECK(signed_side(spec, x) == Side::On);
        const Vec3 off = x + 0.3 * u(rng) * p.lfs * p.normal + 0.01 * Vec3(u(rng), u(rng), u(rng)) * p.lfs;
        const SurfacePoint q = project(spec, off);
        const SurfacePoint qq = project(spec, q.position);
        CHECK((qq.position - q.position).norm() < 1e-9);
        const double t = u(rng) * p.lfs;
        if (std::abs(t) > 1e-6) {
          CHECK(signed_side(spec, x + t * p.normal) == (t > 0 ? Side::Outside : Side::Inside));
        }
        const Vec3& y = pts[(i * 7 + 3) % pts.size()];
        CHECK(std::abs(lfs(spec, x) - lfs(spec, y)) <= (x - y).norm() + 1e-12);
      }
    }
  }
}

TEST_CASE("quasi-uniform points lie on the surface and are deterministic") {
  const auto e = SurfaceSpec::ellipsoid(2.0, 1.0, 0.5);
  const auto a = quasi_uniform_points(e, 1000);
  const auto b = quasi_uniform_points(e, 1000);
  REQUIRE(a.size() == 1000);
  CHECK(a == b);
  for (const Vec3& x : a) CHECK(std::abs(signed_distance(e, x)) < 1e-9);
}
