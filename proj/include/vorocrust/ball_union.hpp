#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <vector>

#include "vorocrust/sampler.hpp"
#include "vorocrust/spatial_hash.hpp"

namespace vorocrust {

/// Union of the sample balls with symmetric neighbor lists.
class BallIndex {
 public:
  BallIndex() : grid_(1.0) {}
  explicit BallIndex(std::vector<Ball> balls);

  std::size_t size() const { return balls_.size(); }
  const std::vector<Ball>& balls() const { return balls_; }
  const Ball& ball(int i) const { return balls_[static_cast<std::size_t>(i)]; }
  /// Sorted indices j with |c_i - c_j| < r_i + r_j.
  const std::vector<int>& neighbors(int i) const { return neighbors_[static_cast<std::size_t>(i)]; }
  double max_radius() const { return max_radius_; }

  /// Smallest index of a ball containing x strictly (outside the tolerance
  /// band), skipping `skip`; -1 when x is not interior to the union.
  int covering_ball(const Vec3& x, std::array<int, 3> skip = {-1, -1, -1},
                    const Tolerance& tol = {}) const;

  /// Calls fn(j) for every ball whose center lies within `radius` of q.
  template <typename Fn>
  void for_each_ball_near(const Vec3& q, double radius, Fn&& fn) const {
    grid_.for_each_candidate(q, radius, [&](int j) {
      if ((ball(j).center - q).squaredNorm() <= radius * radius) fn(j);
    });
  }

 private:
  std::vector<Ball> balls_;
  std::vector<std::vector<int>> neighbors_;
  double max_radius_ = 0.0;
  SpatialHash grid_;
};

BallIndex build_ball_index(const SampleSet& s);

/// The two intersection points of a sphere triple with their side of M.
/// `upper` is Outside and `lower` Inside for a straddling pair; otherwise
/// `upper` is the point with the larger signed distance.
struct GuidePair {
  std::array<int, 3> triple;  // sorted
  Vec3 upper;
  Vec3 lower;
  Side upper_side;
  Side lower_side;
  int upper_witness = -1;  // covering ball, -1 when uncovered
  int lower_witness = -1;

  bool upper_covered() const { return upper_witness >= 0; }
  bool lower_covered() const { return lower_witness >= 0; }
  bool straddles() const { return upper_side == Side::Outside && lower_side == Side::Inside; }
  bool exposed() const { return !upper_covered() || !lower_covered(); }
  bool half_covered() const { return upper_covered() != lower_covered(); }
};

/// Every mutually neighboring triple whose spheres meet in two points, in
/// sorted triple order, with coverage not yet classified.
std::vector<GuidePair> enumerate_guides(const BallIndex& idx, const SurfaceSpec& spec,
                                        const Tolerance& tol = {});

/// Tests each guide point against all balls except its triple.
void classify_coverage(std::vector<GuidePair>& guides, const BallIndex& idx, const Tolerance& tol = {});

/// enumerate_guides followed by classify_coverage, keeping only pairs with at
/// least one uncovered point. Memory stays proportional to the seed count.
std::vector<GuidePair> exposed_guides(const BallIndex& idx, const SurfaceSpec& spec,
                                      const Tolerance& tol = {});

enum class SeedKind { Upper, Lower, Interior };

char seed_kind_code(SeedKind kind);

struct Seed {
  int id = -1;
  Vec3 position = Vec3::Zero();
  SeedKind kind = SeedKind::Interior;
  std::array<int, 3> triple{-1, -1, -1};
  std::int64_t box = -1;  // octree leaf for interior seeds
};

struct SurfaceSeeds {
  std::vector<Seed> upper;
  std::vector<Seed> lower;
  std::vector<GuidePair> half_covered;
  std::size_t duplicates_removed = 0;
};

/// Uncovered guide points become seeds (kind from their side of M). Seeds
/// within `merge_distance` of an earlier one are dropped; processing follows
/// sorted triple order so the smallest triple wins. Ids are assigned upper
/// first, then lower.
SurfaceSeeds place_surface_seeds(const std::vector<GuidePair>& guides, double merge_distance);

/// Default seed merge distance for a ball index.
double seed_merge_distance(const BallIndex& idx);

struct DiskCapResult {
  bool ok = false;
  bool pole_ok = false;
  int upper_cycles = 0;
  int lower_cycles = 0;
  bool mixed_cycle = false;  // a boundary cycle touching both sides
  bool bad_degree = false;   // an arc endpoint not of degree two
};

/// Combinatorial disk-cap test on every sphere. Uses the uncovered guide
/// points of `guides` as arrangement vertices.
std::vector<DiskCapResult> verify_disk_caps(const BallIndex& idx, const SampleSet& s,
                                            const SurfaceSpec& spec,
                                            const std::vector<GuidePair>& guides,
                                            const Tolerance& tol = {});

/// Indices into `seeds` of the seeds lying on sphere i within tolerance.
std::vector<int> seeds_on_ball(int i, const BallIndex& idx, const std::vector<Seed>& seeds,
                               const Tolerance& tol = {});

/// seeds_on_ball for every ball at once.
std::vector<std::vector<int>> seeds_by_ball(const BallIndex& idx, const std::vector<Seed>& seeds,
                                            const Tolerance& tol = {});

}  // namespace vorocrust
