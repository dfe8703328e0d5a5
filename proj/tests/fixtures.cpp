#include "fixtures.hpp"

#include <map>
#include <sstream>

namespace vc_test {

using namespace vorocrust;

const RunResult& sphere_run() {
  static const RunResult run = [] {
    RunConfig cfg;
    cfg.surface = SurfaceSpec::sphere(1.0);
    cfg.eps = 0.05;
    cfg.delta = 0.1;
    cfg.rng_seed = 42;
    return run_pipeline(cfg);
  }();
  return run;
}

const BallIndex& sphere_balls() {
  static const BallIndex idx = build_ball_index(sphere_run().artifacts.samples);
  return idx;
}

const std::vector<GuidePair>& sphere_guides() {
  static const std::vector<GuidePair> g = exposed_guides(sphere_balls(), sphere_run().artifacts.spec);
  return g;
}

const Octree& sphere_octree() {
  static const Octree tree = [] {
    const RunArtifacts& a = sphere_run().artifacts;
    Octree t = build_octree(a.samples, a.samples.delta, default_root_box(a.samples));
    std::vector<Seed> surface;
    for (const Seed& s : a.seeds) {
      if (s.kind != SeedKind::Interior) surface.push_back(s);
    }
    mark_surface_seeds(t, surface);
    return t;
  }();
  return tree;
}

const SampleSet& fine_sphere_sample() {
  static const SampleSet s = generate_sample(SurfaceSpec::sphere(1.0), 0.02, 0.75, 42);
  return s;
}

const std::vector<GuidePair>& fine_sphere_guides() {
  static const std::vector<GuidePair> g = [] {
    const BallIndex idx = build_ball_index(fine_sphere_sample());
    return exposed_guides(idx, SurfaceSpec::sphere(1.0));
  }();
  return g;
}

ReconSurface icosphere(double radius, int level) {
  const double t = (1.0 + std::sqrt(5.0)) / 2.0;
  std::vector<Vec3> v = {{-1, t, 0}, {1, t, 0},  {-1, -t, 0}, {1, -t, 0}, {0, -1, t}, {0, 1, t},
                         {0, -1, -t}, {0, 1, -t}, {t, 0, -1}, {t, 0, 1},  {-t, 0, -1}, {-t, 0, 1}};
  std::vector<std::array<int, 3>> f = {{0, 11, 5}, {0, 5, 1},  {0, 1, 7},   {0, 7, 10}, {0, 10, 11},
                                       {1, 5, 9},  {5, 11, 4}, {11, 10, 2}, {10, 7, 6}, {7, 1, 8},
                                       {3, 9, 4},  {3, 4, 2},  {3, 2, 6},   {3, 6, 8},  {3, 8, 9},
                                       {4, 9, 5},  {2, 4, 11}, {6, 2, 10},  {8, 6, 7},  {9, 8, 1}};
  for (Vec3& p : v) p.normalize();
  for (int l = 0; l < level; ++l) {
    std::map<std::pair<int, int>, int> mid;
    const auto midpoint = [&](int a, int b) {
      const auto key = std::minmax(a, b);
      auto it = mid.find(key);
      if (it != mid.end()) return it->second;
      v.push_back((v[static_cast<std::size_t>(a)] + v[static_cast<std::size_t>(b)]).normalized());
      const int id = static_cast<int>(v.size()) - 1;
      mid.emplace(key, id);
      return id;
    };
    std::vector<std::array<int, 3>> next;
    for (const auto& tri : f) {
      const int a = midpoint(tri[0], tri[1]);
      const int b = midpoint(tri[1], tri[2]);
      const int c = midpoint(tri[2], tri[0]);
      next.push_back({tri[0], a, c});
      next.push_back({tri[1], b, a});
      next.push_back({tri[2], c, b});
      next.push_back({a, b, c});
    }
    f = std::move(next);
  }
  ReconSurface r;
  for (const Vec3& p : v) r.vertices.push_back(radius * p);
  r.provenance.assign(v.size(), VertexProvenance::Steiner);
  r.sample_of_vertex.assign(v.size(), -1);
  for (const auto& tri : f) r.facets.push_back({{tri[0], tri[1], tri[2]}, -1, -1});
  return r;
}

std::string serialize_samples(const SampleSet& s) {
  std::ostringstream out;
  write_samples(out, s);
  return out.str();
}

}  // namespace vc_test
