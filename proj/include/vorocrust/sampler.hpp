#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "vorocrust/surface_oracle.hpp"

namespace vorocrust {

struct SurfaceSample {
  Vec3 position;
  Vec3 normal;
  double lfs;
  double radius;  // delta * lfs
};

struct SampleSet {
  std::vector<SurfaceSample> samples;
  double eps = 0.0;
  double sigma = 0.0;
  double delta = 0.0;
  std::uint64_t rng_seed = 0;

  std::size_t size() const { return samples.size(); }
  std::vector<Vec3> positions() const;
};

struct SamplerOptions {
  /// Ball radius factor; 0 selects the default 2 * eps.
  double delta = 0.0;
  std::size_t max_samples = 4'000'000;
  /// Covering probes used during gap filling; 0 selects max(10 |S|, 1e5).
  std::size_t probe_count = 0;
};

/// Dart throwing over a dense quasi-uniform candidate pool in seeded random
/// order, then gap filling at uncovered probes.
SampleSet generate_sample(const SurfaceSpec& spec, double eps, double sigma, std::uint64_t rng_seed,
                          const SamplerOptions& options = {});

/// Builds a sample record from a surface point, with radius delta * lfs.
SurfaceSample make_sample(const SurfacePoint& p, double delta);

struct CoveringResult {
  bool ok = false;
  double worst_ratio = 0.0;
  Vec3 worst_point = Vec3::Zero();
  std::size_t probes = 0;
};

/// worst_ratio = max over probes x of d(x, S) / (eps * lfs(x)).
CoveringResult verify_covering(const SampleSet& s, const SurfaceSpec& spec, std::size_t probe_count);

struct SparsityResult {
  bool ok = true;
  std::vector<std::pair<int, int>> violations;  // i < j
};

/// Checks d(p_i, p_j) >= sigma * eps * min(lfs_i, lfs_j) for every pair.
SparsityResult verify_sparsity(const SampleSet& s);

/// Default covering probe count for a sample of the given size.
inline std::size_t default_probe_count(std::size_t samples) {
  return std::max<std::size_t>(10 * samples, 100'000);
}

}  // namespace vorocrust
