#include "vorocrust/interior_seeder.hpp"

#include <cmath>

#include "vorocrust/parallel.hpp"

namespace vorocrust {

namespace {

std::vector<double> sample_lfs(const SampleSet& s) {
  std::vector<double> out;
  out.reserve(s.size());
  for (const auto& p : s.samples) out.push_back(p.lfs);
  return out;
}

bool in_closed_union(const BallIndex& idx, const Vec3& x, const Tolerance& tol) {
  bool inside = false;
  idx.for_each_ball_near(x, idx.max_radius() * (1.0 + 1e-9), [&](int j) {
    if (!inside && point_in_ball(x, idx.ball(j), tol) != BallSide::Outside) inside = true;
  });
  return inside;
}

}  // namespace

ExtendedLfs::ExtendedLfs(const SampleSet& s) : index_(s.positions(), sample_lfs(s)) {}

Octree::Octree(const Vec3& center, double half_width) {
  if (!(half_width > 0.0)) throw Error(ErrorCode::InvalidArgument, "Octree: half-width must be positive");
  boxes_.push_back({center, half_width, 0});
}

int Octree::split(int leaf) {
  if (!box(leaf).is_leaf()) throw Error(ErrorCode::InvalidArgument, "Octree::split: box already split");
  const int first = static_cast<int>(boxes_.size());
  const OctreeBox parent = box(leaf);
  const double h = 0.5 * parent.half_width;
  for (int c = 0; c < 8; ++c) {
    const Vec3 offset((c & 1) ? h : -h, (c & 2) ? h : -h, (c & 4) ? h : -h);
    boxes_.push_back({parent.center + offset, h, parent.depth + 1});
  }
  box(leaf).first_child = first;
  return first;
}

std::vector<int> Octree::leaves() const {
  std::vector<int> out;
  for (std::size_t i = 0; i < boxes_.size(); ++i) {
    if (boxes_[i].is_leaf()) out.push_back(static_cast<int>(i));
  }
  return out;
}

std::vector<int> Octree::leaves_touching(const Eigen::AlignedBox3d& query) const {
  std::vector<int> out;
  std::vector<int> stack{0};
  while (!stack.empty()) {
    const int n = stack.back();
    stack.pop_back();
    const OctreeBox& b = box(n);
    if (!b.bounds().intersects(query)) continue;
    if (b.is_leaf()) {
      out.push_back(n);
    } else {
      for (int c = 7; c >= 0; --c) stack.push_back(b.first_child + c);
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<int> Octree::leaves_containing(const Vec3& x) const {
  return leaves_touching(Eigen::AlignedBox3d(x, x));
}

Eigen::AlignedBox3d default_root_box(const SampleSet& s) {
  Eigen::AlignedBox3d bb;
  double margin = 0.0;
  for (const auto& p : s.samples) {
    bb.extend(p.position);
    margin = std::max(margin, p.radius);
  }
  const Vec3 center = bb.center();
  const double half = 0.5 * bb.sizes().maxCoeff() + 2.0 * margin;
  return Eigen::AlignedBox3d(center - Vec3::Constant(half), center + Vec3::Constant(half));
}

Octree build_octree(const std::function<double(const Vec3&)>& sizing, double delta,
                    const Eigen::AlignedBox3d& root_box, const OctreeOptions& options) {
  if (!(delta > 0.0)) throw Error(ErrorCode::InvalidArgument, "build_octree: delta must be positive");
  const Vec3 sizes = root_box.sizes();
  if (!(sizes.minCoeff() > 0.0) || sizes.maxCoeff() - sizes.minCoeff() > 1e-9 * sizes.maxCoeff()) {
    throw Error(ErrorCode::InvalidArgument, "build_octree: root box must be a cube");
  }
  Octree tree(root_box.center(), 0.5 * sizes.maxCoeff());
  std::vector<int> frontier{tree.split(0)};
  for (int c = 1; c < 8; ++c) frontier.push_back(frontier.front() + c);

  std::vector<char> refine;
  while (!frontier.empty()) {
    refine.assign(frontier.size(), 0);
    parallel_for(frontier.size(), [&](std::size_t n) {
      const OctreeBox& b = tree.box(frontier[n]);
      refine[n] = b.radius() > delta * sizing(b.center) ? 1 : 0;
    });
    std::vector<int> next;
    for (std::size_t n = 0; n < frontier.size(); ++n) {
      if (!refine[n]) continue;
      if (tree.box(frontier[n]).depth >= options.depth_cap) {
        throw Error(ErrorCode::DepthCapExceeded, "build_octree: depth cap reached");
      }
      const int first = tree.split(frontier[n]);
      for (int c = 0; c < 8; ++c) next.push_back(first + c);
    }
    frontier = std::move(next);
  }
  return tree;
}

Octree build_octree(const SampleSet& s, double delta, const Eigen::AlignedBox3d& root_box,
                    const OctreeOptions& options) {
  const ExtendedLfs field(s);
  return build_octree([&](const Vec3& x) { return field(x); }, delta, root_box, options);
}

void mark_surface_seeds(Octree& tree, const std::vector<Seed>& surface_seeds) {
  for (const Seed& s : surface_seeds) {
    if (s.kind == SeedKind::Interior) continue;
    for (int leaf : tree.leaves_containing(s.position)) tree.box(leaf).contains_surface_seed = true;
  }
}

std::vector<Seed> place_interior_seeds(const Octree& tree, const BallIndex& idx, const SurfaceSpec& spec,
                                       const InteriorOptions& options) {
  const std::vector<int> leaves = tree.leaves();
  std::vector<char> keep(leaves.size(), 0);
  const Tolerance tol;
  parallel_for(leaves.size(), [&](std::size_t n) {
    const OctreeBox& b = tree.box(leaves[n]);
    if (b.contains_surface_seed) return;
    if (signed_side(spec, b.center, tol) != Side::Inside) return;
    if (!options.allow_seeds_in_union && in_closed_union(idx, b.center, tol)) return;
    keep[n] = 1;
  });
  std::vector<Seed> out;
  for (std::size_t n = 0; n < leaves.size(); ++n) {
    if (!keep[n]) continue;
    Seed s;
    s.position = tree.box(leaves[n]).center;
    s.kind = SeedKind::Interior;
    s.box = leaves[n];
    out.push_back(s);
  }
  return out;
}

BoxBalance verify_box_balance(const Octree& tree) {
  const std::vector<int> leaves = tree.leaves();
  std::vector<double> worst(leaves.size(), 1.0);
  std::vector<std::size_t> pairs(leaves.size(), 0);
  parallel_for(leaves.size(), [&](std::size_t n) {
    const OctreeBox& b = tree.box(leaves[n]);
    Eigen::AlignedBox3d query = b.bounds();
    const double pad = 1e-9 * b.half_width;
    query.min().array() -= pad;
    query.max().array() += pad;
    for (int other : tree.leaves_touching(query)) {
      if (other == leaves[n]) continue;
      const double h = tree.box(other).half_width;
      worst[n] = std::max(worst[n], std::max(h / b.half_width, b.half_width / h));
      ++pairs[n];
    }
  });
  BoxBalance res;
  for (std::size_t n = 0; n < leaves.size(); ++n) {
    res.worst_ratio = std::max(res.worst_ratio, worst[n]);
    res.pairs += pairs[n];
  }
  res.pairs /= 2;
  res.ok = res.worst_ratio <= 2.0;
  return res;
}

}  // namespace vorocrust
