#pragma once

#include <functional>
#include <vector>

#include "vorocrust/ball_union.hpp"
#include "vorocrust/point_index.hpp"

namespace vorocrust {

/// The 1-Lipschitz extension x -> min_i (lfs(p_i) + |x - p_i|) over a sample.
class ExtendedLfs {
 public:
  explicit ExtendedLfs(const SampleSet& s);

  double operator()(const Vec3& x) const { return index_.min_weighted_distance(x); }

 private:
  PointIndex index_;
};

struct OctreeBox {
  Vec3 center;
  double half_width;
  int depth;
  int first_child = -1;  // children occupy [first_child, first_child + 8)
  bool contains_surface_seed = false;

  bool is_leaf() const { return first_child < 0; }
  double radius() const { return half_width * std::sqrt(3.0); }
  Eigen::AlignedBox3d bounds() const {
    return Eigen::AlignedBox3d(center - Vec3::Constant(half_width), center + Vec3::Constant(half_width));
  }
};

class Octree {
 public:
  /// The root is the cube of the given center and half-width.
  Octree(const Vec3& center, double half_width);

  const OctreeBox& box(int i) const { return boxes_[static_cast<std::size_t>(i)]; }
  OctreeBox& box(int i) { return boxes_[static_cast<std::size_t>(i)]; }
  std::size_t box_count() const { return boxes_.size(); }
  const OctreeBox& root() const { return boxes_.front(); }

  /// Splits a leaf into its 8 children and returns the first child index.
  int split(int leaf);

  /// Leaf indices in creation order.
  std::vector<int> leaves() const;

  /// Leaves whose closed box intersects the closed query box.
  std::vector<int> leaves_touching(const Eigen::AlignedBox3d& query) const;

  /// Leaves whose closed box contains x.
  std::vector<int> leaves_containing(const Vec3& x) const;

 private:
  std::vector<OctreeBox> boxes_;
};

/// Cube containing the sample bounding box inflated by 2 max(delta * lfs).
Eigen::AlignedBox3d default_root_box(const SampleSet& s);

struct OctreeOptions {
  int depth_cap = 24;
};

/// Refines every box whose half-diagonal exceeds delta * sizing(center). The
/// root is always split once.
Octree build_octree(const std::function<double(const Vec3&)>& sizing, double delta,
                    const Eigen::AlignedBox3d& root_box, const OctreeOptions& options = {});

/// build_octree with the extended lfs of the sample as sizing function.
Octree build_octree(const SampleSet& s, double delta, const Eigen::AlignedBox3d& root_box,
                    const OctreeOptions& options = {});

/// Sets contains_surface_seed on every leaf whose closed box holds a seed.
void mark_surface_seeds(Octree& tree, const std::vector<Seed>& surface_seeds);

struct InteriorOptions {
  bool allow_seeds_in_union = false;
};

/// A seed at the center of each leaf that holds no surface seed, whose center
/// is inside M and (unless allowed) outside the closed union of balls.
/// Requires mark_surface_seeds. Seed ids are left at -1.
std::vector<Seed> place_interior_seeds(const Octree& tree, const BallIndex& idx, const SurfaceSpec& spec,
                                       const InteriorOptions& options = {});

struct BoxBalance {
  bool ok = true;
  double worst_ratio = 1.0;  // max over touching leaf pairs of larger / smaller half-width
  std::size_t pairs = 0;
};

BoxBalance verify_box_balance(const Octree& tree);

}  // namespace vorocrust
