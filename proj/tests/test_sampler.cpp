#include <doctest.h>

#include "fixtures.hpp"

using namespace vorocrust;

TEST_CASE("sphere sample passes both verifiers with a count between the packing bounds") {
  const SampleSet& s = vc_test::sphere_run().artifacts.samples;
  const double eps = 0.05;
  const double sigma = 0.75;
  const double area = 4.0 * kPi;
  const double low = area / (kPi * eps * eps) * 0.5;
  const double high = area / (kPi * std::pow(sigma * eps / 2.0, 2));
  CHECK(static_cast<double>(s.size()) >= low);
  CHECK(static_cast<double>(s.size()) <= high);
  CHECK(s.size() == 5751);  // regression value
  const auto spec = SurfaceSpec::sphere(1.0);
  const CoveringResult cov = verify_covering(s, spec, default_probe_count(s.size()));
  CHECK(cov.ok);
  CHECK(cov.worst_ratio <= 1.0);
  CHECK(verify_sparsity(s).ok);
}

TEST_CASE("eps out of range is rejected") {
  try {
    generate_sample(SurfaceSpec::sphere(1.0), 0.5, 0.75, 1);
    FAIL("expected InvalidArgument");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::InvalidArgument);
  }
  CHECK_THROWS_AS(generate_sample(SurfaceSpec::sphere(1.0), 0.05, 0.2, 1), Error);
}

TEST_CASE("torus sample with seed 7 passes both verifiers") {
  const auto torus = SurfaceSpec::torus(1.0, 0.3);
  const SampleSet s = generate_sample(torus, 0.05, 0.75, 7);
  CHECK(verify_covering(s, torus, default_probe_count(s.size())).ok);
  CHECK(verify_sparsity(s).ok);
}

TEST_CASE("covering of a single sample fails") {
  const auto sphere = SurfaceSpec::sphere(1.0);
  SampleSet s;
  s.eps = 0.05;
  s.sigma = 0.75;
  s.delta = 0.1;
  s.samples.push_back(make_sample(project(sphere, Vec3(0, 0, 2)), s.delta));
  const CoveringResult r = verify_covering(s, sphere, 100000);
  CHECK_FALSE(r.ok);
  CHECK(r.worst_ratio > 1.0);
  CHECK(verify_sparsity(s).ok);
}

TEST_CASE("coincident samples violate sparsity") {
  const auto sphere = SurfaceSpec::sphere(1.0);
  SampleSet s;
  s.eps = 0.05;
  s.sigma = 0.75;
  s.delta = 0.1;
  s.samples.push_back(make_sample(project(sphere, Vec3(0, 0, 2)), s.delta));
  s.samples.push_back(make_sample(project(sphere, Vec3(1, 0, 0)), s.delta));
  s.samples.push_back(make_sample(project(sphere, Vec3(0, 0, 2)), s.delta));
  const SparsityResult r = verify_sparsity(s);
  CHECK_FALSE(r.ok);
  REQUIRE(r.violations.size() == 1);
  CHECK(r.violations[0] == std::pair<int, int>(0, 2));
}

TEST_CASE("covering ratio grows when the sample nearest the worst probe is deleted") {
  const auto sphere = SurfaceSpec::sphere(1.0);
  const SampleSet s = generate_sample(sphere, 0.1, 0.75, 5);
  const CoveringResult before = verify_covering(s, sphere, 100000);
  REQUIRE(before.ok);
  std::size_t nearest = 0;
  for (std::size_t i = 1; i < s.size(); ++i) {
    if ((s.samples[i].position - before.worst_point).norm() <
        (s.samples[nearest].position - before.worst_point).norm()) {
      nearest = i;
    }
  }
  SampleSet fewer = s;
  fewer.samples.erase(fewer.samples.begin() + static_cast<std::ptrdiff_t>(nearest));
  const CoveringResult after = verify_covering(fewer, sphere, 100000);
  CHECK(after.worst_ratio > before.worst_ratio);
}

TEST_CASE("covering ratio does not increase along the insertion order") {
  const auto sphere = SurfaceSpec::sphere(1.0);
  const SampleSet s = generate_sample(sphere, 0.1, 0.75, 5);
  double last = std::numeric_limits<double>::infinity();
  for (double frac : {0.25, 0.5, 0.75, 1.0}) {
    SampleSet prefix = s;
    prefix.samples.resize(static_cast<std::size_t>(frac * static_cast<double>(s.size())));
    const double ratio = verify_covering(prefix, sphere, 100000).worst_ratio;
    CHECK(ratio <= last);
    last = ratio;
  }
  CHECK(last <= 1.0);
}

TEST_CASE("generated samples are sparse by construction") {
  const auto e = SurfaceSpec::ellipsoid(2.0, 1.0, 1.0);
  const SampleSet s = generate_sample(e, 0.1, 0.75, 9);
  std::size_t violations = 0;
  for (std::size_t i = 0; i < s.size(); i += 7) {
    for (std::size_t j = 0; j < s.size(); ++j) {
      if (j == i) continue;
      const double d = (s.samples[i].position - s.samples[j].position).norm();
      if (d < 0.75 * 0.1 * std::min(s.samples[i].lfs, s.samples[j].lfs) * (1 - 1e-12)) ++violations;
    }
  }
  CHECK(violations == 0);
  CHECK(verify_covering(s, e, default_probe_count(s.size())).ok);
}

TEST_CASE("sampling is deterministic") {
  const auto torus = SurfaceSpec::torus(1.0, 0.3);
  const SampleSet a = generate_sample(torus, 0.1, 0.75, 13);
  const SampleSet b = generate_sample(torus, 0.1, 0.75, 13);
  const SampleSet c = generate_sample(torus, 0.1, 0.75, 14);
  CHECK(vc_test::serialize_samples(a) == vc_test::serialize_samples(b));
  CHECK(vc_test::serialize_samples(a) != vc_test::serialize_samples(c));
}

TEST_CASE("samples carry exact lfs, normals and radii") {
  const SampleSet& s = vc_test::sphere_run().artifacts.samples;
  for (const SurfaceSample& p : s.samples) {
    CHECK(p.position.norm() == doctest::Approx(1.0).epsilon(1e-12));
    CHECK((p.normal - p.position).norm() < 1e-12);
    CHECK(p.lfs == 1.0);
    CHECK(p.radius == s.delta * p.lfs);
  }
}
