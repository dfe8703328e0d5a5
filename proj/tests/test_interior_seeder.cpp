#include <doctest.h>

#include <random>

#include "fixtures.hpp"

using namespace vorocrust;

namespace {

int max_depth(const Octree& t) {
  int d = 0;
  for (int leaf : t.leaves()) d = std::max(d, t.box(leaf).depth);
  return d;
}

double brute_extended_lfs(const SampleSet& s, const Vec3& x) {
  double best = std::numeric_limits<double>::infinity();
  for (const SurfaceSample& p : s.samples) best = std::min(best, p.lfs + (x - p.position).norm());
  return best;
}

const Eigen::AlignedBox3d kUnitCube(Vec3(0, 0, 0), Vec3(1, 1, 1));

}  // namespace

TEST_CASE("extended lfs at samples, at the center and against brute force") {
  const SampleSet& s = vc_test::sphere_run().artifacts.samples;
  const ExtendedLfs field(s);
  CHECK(field(s.samples[17].position) == doctest::Approx(s.samples[17].lfs));
  CHECK(field(Vec3(0, 0, 0)) == doctest::Approx(2.0).epsilon(1e-12));
  std::mt19937_64 rng(23);
  std::uniform_real_distribution<double> u(-1.5, 1.5);
  for (int i = 0; i < 500; ++i) {
    const Vec3 x(u(rng), u(rng), u(rng));
    CHECK(field(x) == doctest::Approx(brute_extended_lfs(s, x)).epsilon(1e-14));
  }
}

TEST_CASE("constant sizing on the unit cube refines uniformly") {
  const auto one = [](const Vec3&) { return 1.0; };
  const Octree fine = build_octree(one, 0.1, kUnitCube);
  CHECK(fine.leaves().size() == 4096);
  CHECK(max_depth(fine) == 4);
  for (int leaf : fine.leaves()) CHECK(fine.box(leaf).depth == 4);
  const Octree coarse = build_octree(one, 0.9, kUnitCube);
  CHECK(coarse.leaves().size() == 8);
  CHECK(max_depth(coarse) == 1);
  const BoxBalance bal = verify_box_balance(fine);
  CHECK(bal.ok);
  CHECK(bal.worst_ratio == 1.0);
}

TEST_CASE("refinement stops at the depth cap") {
  OctreeOptions opt;
  opt.depth_cap = 3;
  try {
    build_octree([](const Vec3&) { return 1.0; }, 0.01, kUnitCube, opt);
    FAIL("expected DepthCapExceeded");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::DepthCapExceeded);
  }
}

TEST_CASE("a hand-built unbalanced octree fails the balance check") {
  Octree t(Vec3(0.5, 0.5, 0.5), 0.5);
  const int grandchild = t.split(t.split(0));
  t.split(grandchild + 7);
  const BoxBalance bal = verify_box_balance(t);
  CHECK_FALSE(bal.ok);
  CHECK(bal.worst_ratio == doctest::Approx(4.0));
}

TEST_CASE("sphere run: leaves are balanced and within the radius bands") {
  const Octree& t = vc_test::sphere_octree();
  const SampleSet& s = vc_test::sphere_run().artifacts.samples;
  const double d = s.delta;
  const ExtendedLfs field(s);
  CHECK(verify_box_balance(t).ok);
  const std::vector<int> leaves = t.leaves();
  for (int leaf : leaves) {
    const OctreeBox& b = t.box(leaf);
    const double ratio = b.radius() / field(b.center);
    CHECK(ratio >= d / (2 + d));
    CHECK(ratio <= d);
  }
  std::mt19937_64 rng(29);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::uniform_int_distribution<std::size_t> pick(0, leaves.size() - 1);
  for (int i = 0; i < 10000; ++i) {
    const OctreeBox& b = t.box(leaves[pick(rng)]);
    const Vec3 p = b.center + b.half_width * Vec3(u(rng), u(rng), u(rng));
    const double ratio = b.radius() / field(p);
    CHECK(ratio >= d / (2 * (1 + d)));
    CHECK(ratio <= d / (1 - d));
  }
}

TEST_CASE("sphere run: interior seeds sit in empty inside leaves outside the union") {
  const RunArtifacts& a = vc_test::sphere_run().artifacts;
  const Octree& t = vc_test::sphere_octree();
  const BallIndex& idx = vc_test::sphere_balls();
  const std::vector<Seed> interior = place_interior_seeds(t, idx, a.spec);
  std::vector<Seed> stored;
  for (const Seed& s : a.seeds) {
    if (s.kind == SeedKind::Interior) stored.push_back(s);
  }
  REQUIRE(interior.size() == stored.size());
  std::size_t expected = 0;
  for (int leaf : t.leaves()) {
    const OctreeBox& b = t.box(leaf);
    if (b.contains_surface_seed || signed_side(a.spec, b.center) != Side::Inside) continue;
    bool in_union = false;
    for (const Ball& ball : idx.balls()) in_union = in_union || (b.center - ball.center).norm() <= ball.radius;
    if (!in_union) ++expected;
  }
  CHECK(interior.size() == expected);
  for (std::size_t i = 0; i < interior.size(); ++i) {
    const Seed& s = interior[i];
    CHECK((s.position - stored[i].position).norm() == 0.0);
    CHECK(signed_side(a.spec, s.position) == Side::Inside);
    CHECK(idx.covering_ball(s.position) == -1);
    const OctreeBox& b = t.box(static_cast<int>(s.box));
    CHECK_FALSE(b.contains_surface_seed);
    CHECK(b.is_leaf());
    CHECK((b.center - s.position).norm() == 0.0);
  }
}

TEST_CASE("a leaf holding a lower seed emits no interior seed") {
  const RunArtifacts& a = vc_test::sphere_run().artifacts;
  const BallIndex& idx = vc_test::sphere_balls();
  Octree t = vc_test::sphere_octree();
  const std::vector<Seed> before = place_interior_seeds(t, idx, a.spec);
  REQUIRE_FALSE(before.empty());
  const Seed target = before[before.size() / 2];
  Seed lower;
  lower.kind = SeedKind::Lower;
  lower.position = target.position + Vec3::Constant(0.25 * t.box(static_cast<int>(target.box)).half_width);
  mark_surface_seeds(t, {lower});
  const std::vector<Seed> after = place_interior_seeds(t, idx, a.spec);
  CHECK(after.size() == before.size() - 1);
  for (const Seed& s : after) CHECK(s.box != target.box);
}

TEST_CASE("sphere run: interior seed separation") {
  const Octree& t = vc_test::sphere_octree();
  const RunArtifacts& a = vc_test::sphere_run().artifacts;
  const std::vector<Seed> interior = place_interior_seeds(t, vc_test::sphere_balls(), a.spec);
  std::vector<Vec3> pos;
  for (const Seed& s : interior) pos.push_back(s.position);
  const PointIndex index(pos);
  std::size_t violations = 0;
  for (std::size_t i = 0; i < interior.size(); ++i) {
    const double side_i = 2.0 * t.box(static_cast<int>(interior[i].box)).half_width;
    for (int j : index.within(pos[i], side_i)) {
      if (j == static_cast<int>(i)) continue;
      const double side_j = 2.0 * t.box(static_cast<int>(interior[static_cast<std::size_t>(j)].box)).half_width;
      if ((pos[i] - pos[static_cast<std::size_t>(j)]).norm() < std::min(side_i, side_j) * (1 - 1e-12)) ++violations;
    }
  }
  CHECK(violations == 0);
}

TEST_CASE("sphere run: interior seed count below the lfs^-3 volume bound") {
  const RunArtifacts& a = vc_test::sphere_run().artifacts;
  const ExtendedLfs field(a.samples);
  const std::size_t count = static_cast<std::size_t>(
      std::count_if(a.seeds.begin(), a.seeds.end(), [](const Seed& s) { return s.kind == SeedKind::Interior; }));
  // Monte Carlo over the bounding cube [-1, 1]^3.
  std::mt19937_64 rng(31);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  const int n = 200000;
  double sum = 0.0;
  for (int i = 0; i < n; ++i) {
    const Vec3 x(u(rng), u(rng), u(rng));
    if (x.norm() < 1.0) sum += std::pow(field(x), -3.0);
  }
  const double integral = 8.0 * sum / n;
  CHECK(integral > 1.0);
  CHECK(integral < 4.0 * kPi / 3.0);
  const double eps = a.samples.eps;
  const double bound = 18.0 * std::sqrt(3.0) / kPi * std::pow(eps, -3.0) * integral;
  CHECK(static_cast<double>(count) <= bound);
  CHECK(static_cast<double>(count) < 0.1 * bound);
}

TEST_CASE("default root box contains every ball with margin") {
  const SampleSet& s = vc_test::sphere_run().artifacts.samples;
  const Eigen::AlignedBox3d root = default_root_box(s);
  const Vec3 side = root.sizes();
  CHECK(side.x() == doctest::Approx(side.y()));
  CHECK(side.x() == doctest::Approx(side.z()));
  for (const SurfaceSample& p : s.samples) {
    CHECK(root.contains(p.position + Vec3::Constant(2 * p.radius)));
    CHECK(root.contains(p.position - Vec3::Constant(2 * p.radius)));
  }
}
