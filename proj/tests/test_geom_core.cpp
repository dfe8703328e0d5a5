#include <doctest.h>

#include <random>

#include "vorocrust/geom_core.hpp"

using namespace vorocrust;

namespace {

Vec3 random_vec(std::mt19937_64& rng, double lo, double hi) {
  std::uniform_real_distribution<double> u(lo, hi);
  return {u(rng), u(rng), u(rng)};
}

double sphere_residual(const Vec3& x, const Ball& b) { return std::abs((x - b.center).norm() - b.radius); }

}  // namespace

TEST_CASE("power_distance examples") {
  CHECK(power_distance(Vec3(0, 0, 0), 1.0, Vec3(2, 0, 0), 1.0) == doctest::Approx(2.0));
  CHECK(power_distance(Vec3(1, 2, 3), 4.0, Vec3(1, 2, 5), 0.0) == doctest::Approx(0.0));
  CHECK(power_distance(Vec3(1, 1, 1), 0.0, Vec3(1, 1, 1), 0.0) == 0.0);
}

TEST_CASE("power_distance is symmetric") {
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> w(0.0, 2.0);
  for (int i = 0; i < 100; ++i) {
    const Vec3 p = random_vec(rng, -3, 3);
    const Vec3 q = random_vec(rng, -3, 3);
    const double wp = w(rng);
    const double wq = w(rng);
    CHECK(power_distance(p, wp, q, wq) == doctest::Approx(power_distance(q, wq, p, wp)));
  }
}

TEST_CASE("tri_sphere_intersect of three unit spheres") {
  const Ball a{{0, 0, 0}, 1.0};
  const Ball b{{1, 0, 0}, 1.0};
  const Ball c{{0.5, std::sqrt(3.0) / 2.0, 0}, 1.0};
  const auto x = tri_sphere_intersect(a, b, c);
  const double z = std::sqrt(1.0 - 1.0 / 3.0);
  CHECK((x[0] - Vec3(0.5, 0.5 / std::sqrt(3.0), -z)).norm() < 1e-12);
  CHECK((x[1] - Vec3(0.5, 0.5 / std::sqrt(3.0), z)).norm() < 1e-12);
  CHECK(x[1].y() == doctest::Approx(0.2886751).epsilon(1e-7));
  CHECK(x[1].z() == doctest::Approx(0.8164966).epsilon(1e-7));
}

TEST_CASE("tri_sphere_intersect with small radii has no intersection") {
  const Ball a{{0, 0, 0}, 0.4};
  const Ball b{{1, 0, 0}, 0.4};
  const Ball c{{0.5, std::sqrt(3.0) / 2.0, 0}, 0.4};
  try {
    tri_sphere_intersect(a, b, c);
    FAIL("expected NoIntersection");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::NoIntersection);
  }
}

TEST_CASE("tri_sphere_intersect rejects collinear centers") {
  const Ball a{{0, 0, 0}, 1.0};
  const Ball b{{1, 0, 0}, 1.0};
  const Ball c{{2, 0, 0}, 1.0};
  std::array<Vec3, 2> out;
  CHECK(try_tri_sphere_intersect(a, b, c, out) == TriSphereStatus::DegenerateCenters);
}

TEST_CASE("tri_sphere_intersect residuals, permutations and symmetry on random triples") {
  std::mt19937_64 rng(7);
  int tested = 0;
  for (int trial = 0; trial < 2000 && tested < 500; ++trial) {
    std::array<Ball, 3> b;
    std::uniform_real_distribution<double> r(0.5, 1.5);
    for (Ball& x : b) x = {random_vec(rng, -1, 1), r(rng)};
    std::array<Vec3, 2> x;
    if (try_tri_sphere_intersect(b[0], b[1], b[2], x) != TriSphereStatus::Ok) continue;
    ++tested;
    for (const Vec3& p : x) {
      for (const Ball& s : b) CHECK(sphere_residual(p, s) < 1e-10);
    }
    // Any permutation returns the same pair as a set.
    std::array<int, 3> perm{0, 1, 2};
    while (std::next_permutation(perm.begin(), perm.end())) {
      const auto y = tri_sphere_intersect(b[perm[0]], b[perm[1]], b[perm[2]]);
      const double same = std::max((x[0] - y[0]).norm(), (x[1] - y[1]).norm());
      const double swapped = std::max((x[0] - y[1]).norm(), (x[1] - y[0]).norm());
      CHECK(std::min(same, swapped) < 1e-9);
    }
    // The pair is mirror symmetric about the plane of the centers.
    const Vec3 n = (b[1].center - b[0].center).cross(b[2].center - b[0].center).normalized();
    const double h0 = n.dot(x[0] - b[0].center);
    const double h1 = n.dot(x[1] - b[0].center);
    CHECK(h0 < 0.0);
    CHECK(h0 + h1 == doctest::Approx(0.0).epsilon(1e-9).scale(1.0));
    const Vec3 m0 = x[0] - h0 * n;
    const Vec3 m1 = x[1] - h1 * n;
    CHECK((m0 - m1).norm() < 1e-9);
  }
  CHECK(tested == 500);
}

TEST_CASE("circumcenter_radius examples") {
  const auto eq = circumcenter_radius(Vec3(0, 0, 0), Vec3(1, 0, 0), Vec3(0.5, std::sqrt(3.0) / 2.0, 0));
  CHECK(eq.radius == doctest::Approx(1.0 / std::sqrt(3.0)));
  CHECK(eq.radius == doctest::Approx(0.5773503).epsilon(1e-7));
  const auto right = circumcenter_radius(Vec3(0, 0, 0), Vec3(3, 0, 0), Vec3(0, 4, 0));
  CHECK(right.radius == doctest::Approx(2.5));
  CHECK((right.center - Vec3(1.5, 2, 0)).norm() < 1e-12);
  CHECK_THROWS_AS(circumcenter_radius(Vec3(0, 0, 0), Vec3(1, 1, 1), Vec3(2, 2, 2)), Error);
}

TEST_CASE("circumcenter_radius residuals and translation invariance") {
  std::mt19937_64 rng(11);
  for (int i = 0; i < 500; ++i) {
    const Vec3 a = random_vec(rng, -2, 2);
    const Vec3 b = random_vec(rng, -2, 2);
    const Vec3 c = random_vec(rng, -2, 2);
    const auto cc = circumcenter_radius(a, b, c);
    const double da = (cc.center - a).norm();
    const double db = (cc.center - b).norm();
    const double dc = (cc.center - c).norm();
    CHECK(std::max({std::abs(da - db), std::abs(db - dc), std::abs(da - dc)}) < 1e-10 * std::max(1.0, da));
    const Vec3 t = random_vec(rng, -5, 5);
    const auto moved = circumcenter_radius<double>(a + t, b + t, c + t);
    CHECK((moved.center - (cc.center + t)).norm() < 1e-9 * std::max(1.0, da));
    CHECK(std::abs(moved.radius - cc.radius) < 1e-9 * std::max(1.0, da));
  }
}

TEST_CASE("triangle_quality examples") {
  const auto eq = triangle_quality(Vec3(0, 0, 0), Vec3(1, 0, 0), Vec3(0.5, std::sqrt(3.0) / 2.0, 0));
  CHECK(eq.min_angle == doctest::Approx(kPi / 3));
  CHECK(eq.max_angle == doctest::Approx(kPi / 3));
  CHECK(eq.edge_ratio == doctest::Approx(1.0));
  CHECK(eq.min_altitude_over_longest_edge == doctest::Approx(std::sqrt(3.0) / 2.0));
  const auto right = triangle_quality(Vec3(0, 0, 0), Vec3(3, 0, 0), Vec3(0, 4, 0));
  CHECK(degrees(right.max_angle) == doctest::Approx(90.0));
  CHECK_THROWS_AS(triangle_quality(Vec3(0, 0, 0), Vec3(1, 0, 0), Vec3(2, 0, 0)), Error);
}

TEST_CASE("triangle angles sum to pi") {
  std::mt19937_64 rng(5);
  for (int i = 0; i < 500; ++i) {
    const std::array<Vec3, 3> p{random_vec(rng, -1, 1), random_vec(rng, -1, 1), random_vec(rng, -1, 1)};
    double sum = 0.0;
    for (int k = 0; k < 3; ++k) {
      const Vec3 e1 = p[(k + 1) % 3] - p[k];
      const Vec3 e2 = p[(k + 2) % 3] - p[k];
      sum += std::acos(std::clamp(e1.dot(e2) / (e1.norm() * e2.norm()), -1.0, 1.0));
    }
    CHECK(std::abs(sum - kPi) < 1e-9);
    const auto q = triangle_quality(p[0], p[1], p[2]);
    CHECK(q.min_angle <= q.max_angle);
    CHECK(q.min_angle <= kPi / 3 + 1e-12);
  }
}

TEST_CASE("point_in_ball classification") {
  const Ball b{{1, 2, 3}, 0.5};
  const Tolerance tol;
  CHECK(point_in_ball(Vec3(1, 2, 3), b) == BallSide::Inside);
  CHECK(point_in_ball(Vec3(1.5, 2, 3), b) == BallSide::Boundary);
  CHECK(point_in_ball(Vec3(1 + 0.5 * (1 + 10 * tol.rel_eps), 2, 3), b) == BallSide::Outside);
  CHECK(point_in_ball(Vec3(1 + 0.5 * (1 - 10 * tol.rel_eps), 2, 3), b) == BallSide::Inside);
}

TEST_CASE("geometry templates work with float") {
  const BallT<float> a{{0, 0, 0}, 1.0f};
  const BallT<float> b{{1, 0, 0}, 1.0f};
  const BallT<float> c{{0.5f, 0.8660254f, 0}, 1.0f};
  Tolerance tol;
  tol.rel_eps = 1e-5;
  const auto x = tri_sphere_intersect(a, b, c, tol);
  CHECK(x[1].z() == doctest::Approx(0.8164966).epsilon(1e-5));
}
