#pragma once

#include <cstdint>
#include <limits>
#include <span>
#include <utility>
#include <vector>

#include "vorocrust/geom_core.hpp"

namespace vorocrust {

struct Neighbor {
  int index;
  double dist2;
};

/// Static kd-tree over a point set. Queries are read-only and thread-safe.
class PointIndex {
 public:
  PointIndex() = default;
  explicit PointIndex(std::vector<Vec3> points);
  /// Also indexes a nonnegative weight per point for min_weighted_distance.
  PointIndex(std::vector<Vec3> points, std::vector<double> weights);

  std::size_t size() const { return points_.size(); }
  bool empty() const { return points_.empty(); }
  const Vec3& point(int i) const { return points_[static_cast<std::size_t>(i)]; }
  const std::vector<Vec3>& points() const { return points_; }

  /// Nearest point other than `exclude` with squared distance below
  /// max_dist2; index -1 when none.
  Neighbor nearest(const Vec3& q, int exclude = -1,
                   double max_dist2 = std::numeric_limits<double>::infinity()) const;

  /// k nearest points sorted by increasing distance (ties by index).
  std::vector<Neighbor> knn(const Vec3& q, std::size_t k) const;

  /// All points with |p - q| <= radius, sorted by index.
  std::vector<int> within(const Vec3& q, double radius) const;

  /// min over i of (w_i + |p_i - q|); requires weights. `arg` receives the minimizer.
  double min_weighted_distance(const Vec3& q, int* arg = nullptr) const;

  /// Visits every point with |p - q| <= radius.
  template <typename Fn>
  void for_each_within(const Vec3& q, double radius, Fn&& fn) const {
    if (nodes_.empty()) return;
    visit_within(0, q, radius * radius, fn);
  }

 private:
  struct Node {
    Eigen::AlignedBox3d box;
    int begin = 0;
    int end = 0;
    int left = -1;
    int right = -1;
    double min_weight = 0.0;
  };

  int build(int begin, int end);
  void nearest_rec(int node, const Vec3& q, int exclude, Neighbor& best) const;
  void knn_rec(int node, const Vec3& q, std::size_t k, std::vector<Neighbor>& heap) const;
  void weighted_rec(int node, const Vec3& q, double& best, int& arg) const;

  static double box_dist2(const Eigen::AlignedBox3d& box, const Vec3& q) {
    return box.squaredExteriorDistance(q);
  }

  template <typename Fn>
  void visit_within(int node, const Vec3& q, double r2, Fn& fn) const {
    const Node& n = nodes_[static_cast<std::size_t>(node)];
    if (box_dist2(n.box, q) > r2) return;
    if (n.left < 0) {
      for (int i = n.begin; i < n.end; ++i) {
        const int id = order_[static_cast<std::size_t>(i)];
        if ((points_[static_cast<std::size_t>(id)] - q).squaredNorm() <= r2) fn(id);
      }
      return;
    }
    visit_within(n.left, q, r2, fn);
    visit_within(n.right, q, r2, fn);
  }

  std::vector<Vec3> points_;
  std::vector<double> weights_;
  std::vector<int> order_;
  std::vector<Node> nodes_;
};

}  // namespace vorocrust
