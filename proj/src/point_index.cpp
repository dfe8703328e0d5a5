#include "vorocrust/point_index.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace vorocrust {

namespace {

constexpr int kLeafSize = 8;

bool closer(const Neighbor& a, const Neighbor& b) {
  return a.dist2 < b.dist2 || (a.dist2 == b.dist2 && a.index < b.index);
}

}  // namespace

PointIndex::PointIndex(std::vector<Vec3> points) : points_(std::move(points)) {
  order_.resize(points_.size());
  std::iota(order_.begin(), order_.end(), 0);
  if (!points_.empty()) {
    nodes_.reserve(2 * points_.size() / kLeafSize + 2);
    build(0, static_cast<int>(points_.size()));
  }
}

PointIndex::PointIndex(std::vector<Vec3> points, std::vector<double> weights)
    : PointIndex(std::move(points)) {
  if (weights.size() != points_.size()) {
    throw Error(ErrorCode::InvalidArgument, "PointIndex: one weight per point required");
  }
  weights_ = std::move(weights);
  // Children follow their parent in nodes_, so a reverse sweep sees them first.
  for (auto it = nodes_.rbegin(); it != nodes_.rend(); ++it) {
    if (it->left < 0) {
      it->min_weight = std::numeric_limits<double>::infinity();
      for (int i = it->begin; i < it->end; ++i) {
        it->min_weight = std::min(it->min_weight, weights_[static_cast<std::size_t>(order_[static_cast<std::size_t>(i)])]);
      }
    } else {
      it->min_weight = std::min(nodes_[static_cast<std::size_t>(it->left)].min_weight,
                                nodes_[static_cast<std::size_t>(it->right)].min_weight);
    }
  }
}

int PointIndex::build(int begin, int end) {
  const int id = static_cast<int>(nodes_.size());
  nodes_.push_back({});
  Eigen::AlignedBox3d box;
  for (int i = begin; i < end; ++i) box.extend(points_[static_cast<std::size_t>(order_[static_cast<std::size_t>(i)])]);
  nodes_[static_cast<std::size_t>(id)].box = box;
  nodes_[static_cast<std::size_t>(id)].begin = begin;
  nodes_[static_cast<std::size_t>(id)].end = end;
  if (end - begin <= kLeafSize) return id;

  int axis = 0;
  box.sizes().maxCoeff(&axis);
  const int mid = begin + (end - begin) / 2;
  std::nth_element(order_.begin() + begin, order_.begin() + mid, order_.begin() + end,
                   [&](int a, int b) {
                     const double pa = points_[static_cast<std::size_t>(a)][axis];
                     const double pb = points_[static_cast<std::size_t>(b)][axis];
                     return pa < pb || (pa == pb && a < b);
                   });
  const int left = build(begin, mid);
  const int right = build(mid, end);
  nodes_[static_cast<std::size_t>(id)].left = left;
  nodes_[static_cast<std::size_t>(id)].right = right;
  return id;
}

Neighbor PointIndex::nearest(const Vec3& q, int exclude, double max_dist2) const {
  Neighbor best{-1, max_dist2};
  if (!nodes_.empty()) nearest_rec(0, q, exclude, best);
  return best;
}

void PointIndex::nearest_rec(int node, const Vec3& q, int exclude, Neighbor& best) const {
  const Node& n = nodes_[static_cast<std::size_t>(node)];
  if (box_dist2(n.box, q) > best.dist2) return;
  if (n.left < 0) {
    for (int i = n.begin; i < n.end; ++i) {
      const int id = order_[static_cast<std::size_t>(i)];
      if (id == exclude) continue;
      const Neighbor cand{id, (points_[static_cast<std::size_t>(id)] - q).squaredNorm()};
      if (closer(cand, best)) best = cand;
    }
    return;
  }
  const double dl = box_dist2(nodes_[static_cast<std::size_t>(n.left)].box, q);
  const double dr = box_dist2(nodes_[static_cast<std::size_t>(n.right)].box, q);
  if (dl <= dr) {
    nearest_rec(n.left, q, exclude, best);
    nearest_rec(n.right, q, exclude, best);
  } else {
    nearest_rec(n.right, q, exclude, best);
    nearest_rec(n.left, q, exclude, best);
  }
}

std::vector<Neighbor> PointIndex::knn(const Vec3& q, std::size_t k) const {
  std::vector<Neighbor> heap;
  if (k == 0 || nodes_.empty()) return heap;
  heap.reserve(k + 1);
  knn_rec(0, q, k, heap);
  std::sort_heap(heap.begin(), heap.end(), closer);
  return heap;
}

void PointIndex::knn_rec(int node, const Vec3& q, std::size_t k,
                         std::vector<Neighbor>& heap) const {
  const Node& n = nodes_[static_cast<std::size_t>(node)];
  if (heap.size() == k && box_dist2(n.box, q) > heap.front().dist2) return;
  if (n.left < 0) {
    for (int i = n.begin; i < n.end; ++i) {
      const int id = order_[static_cast<std::size_t>(i)];
      const Neighbor cand{id, (points_[static_cast<std::size_t>(id)] - q).squaredNorm()};
      if (heap.size() < k) {
        heap.push_back(cand);
        std::push_heap(heap.begin(), heap.end(), closer);
      } else if (closer(cand, heap.front())) {
        std::pop_heap(heap.begin(), heap.end(), closer);
        heap.back() = cand;
        std::push_heap(heap.begin(), heap.end(), closer);
      }
    }
    return;
  }
  const double dl = box_dist2(nodes_[static_cast<std::size_t>(n.left)].box, q);
  const double dr = box_dist2(nodes_[static_cast<std::size_t>(n.right)].box, q);
  if (dl <= dr) {
    knn_rec(n.left, q, k, heap);
    knn_rec(n.right, q, k, heap);
  } else {
    knn_rec(n.right, q, k, heap);
    knn_rec(n.left, q, k, heap);
  }
}

double PointIndex::min_weighted_distance(const Vec3& q, int* arg) const {
  if (weights_.size() != points_.size()) {
    throw Error(ErrorCode::InvalidArgument, "PointIndex: index has no weights");
  }
  double best = std::numeric_limits<double>::infinity();
  int best_arg = -1;
  if (!nodes_.empty()) weighted_rec(0, q, best, best_arg);
  if (arg != nullptr) *arg = best_arg;
  return best;
}

void PointIndex::weighted_rec(int node, const Vec3& q, double& best, int& arg) const {
  const Node& n = nodes_[static_cast<std::size_t>(node)];
  if (std::sqrt(box_dist2(n.box, q)) + n.min_weight > best) return;
  if (n.left < 0) {
    for (int i = n.begin; i < n.end; ++i) {
      const int id = order_[static_cast<std::size_t>(i)];
      const double v = weights_[static_cast<std::size_t>(id)] + (points_[static_cast<std::size_t>(id)] - q).norm();
      if (v < best || (v == best && id < arg)) {
        best = v;
        arg = id;
      }
    }
    return;
  }
  const Node& l = nodes_[static_cast<std::size_t>(n.left)];
  const Node& r = nodes_[static_cast<std::size_t>(n.right)];
  const double bl = std::sqrt(box_dist2(l.box, q)) + l.min_weight;
  const double br = std::sqrt(box_dist2(r.box, q)) + r.min_weight;
  if (bl <= br) {
    weighted_rec(n.left, q, best, arg);
    weighted_rec(n.right, q, best, arg);
  } else {
    weighted_rec(n.right, q, best, arg);
    weighted_rec(n.left, q, best, arg);
  }
}

std::vector<int> PointIndex::within(const Vec3& q, double radius) const {
  std::vector<int> out;
  for_each_within(q, radius, [&](int id) { out.push_back(id); });
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace vorocrust
