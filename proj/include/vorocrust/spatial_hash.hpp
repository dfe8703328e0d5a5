#pragma once

#include <cmath>
#include <cstdint>
#include <unordered_map>
#include <vector>

#include "vorocrust/geom_core.hpp"

namespace vorocrust {

/// Uniform hash grid over points with incremental insertion.
class SpatialHash {
 public:
  explicit SpatialHash(double cell_size) : cell_(cell_size), inv_(1.0 / cell_size) {
    if (!(cell_size > 0.0) || !std::isfinite(cell_size)) {
      throw Error(ErrorCode::InvalidArgument, "SpatialHash: cell size must be positive");
    }
  }

  double cell_size() const { return cell_; }

  void insert(int id, const Vec3& p) {
    cells_[key(coord(p.x()), coord(p.y()), coord(p.z()))].push_back(id);
  }

  /// Visits ids of every cell overlapping the cube of half-width radius around q.
  template <typename Fn>
  void for_each_candidate(const Vec3& q, double radius, Fn&& fn) const {
    const std::int64_t x0 = coord(q.x() - radius), x1 = coord(q.x() + radius);
    const std::int64_t y0 = coord(q.y() - radius), y1 = coord(q.y() + radius);
    const std::int64_t z0 = coord(q.z() - radius), z1 = coord(q.z() + radius);
    for (std::int64_t x = x0; x <= x1; ++x) {
      for (std::int64_t y = y0; y <= y1; ++y) {
        for (std::int64_t z = z0; z <= z1; ++z) {
          const auto it = cells_.find(key(x, y, z));
          if (it == cells_.end()) continue;
          for (int id : it->second) fn(id);
        }
      }
    }
  }

 private:
  std::int64_t coord(double v) const { return static_cast<std::int64_t>(std::floor(v * inv_)); }

  static std::uint64_t key(std::int64_t x, std::int64_t y, std::int64_t z) {
    constexpr std::uint64_t mask = (1ULL << 21) - 1;
    return (static_cast<std::uint64_t>(x) & mask) | ((static_cast<std::uint64_t>(y) & mask) << 21) |
           ((static_cast<std::uint64_t>(z) & mask) << 42);
  }

  double cell_;
  double inv_;
  std::unordered_map<std::uint64_t, std::vector<int>> cells_;
};

}  // namespace vorocrust
