#include "vorocrust/ball_union.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "vorocrust/parallel.hpp"

namespace vorocrust {

namespace {

// Smallest index in `candidates` whose ball strictly contains x, skipping `skip`.
int first_cover(const BallIndex& idx, const std::vector<int>& candidates, const Vec3& x, int skip_a,
                int skip_b, const Tolerance& tol) {
  for (int l : candidates) {
    if (l == skip_a || l == skip_b) continue;
    if (point_in_ball(x, idx.ball(l), tol) == BallSide::Inside) return l;
  }
  return -1;
}

Side side_from_distance(double d, double band) {
  if (d < -band) return Side::Inside;
  if (d > band) return Side::Outside;
  return Side::On;
}

struct PairGeometry {
  Vec3 upper;
  Vec3 lower;
  Side upper_side;
  Side lower_side;
};

PairGeometry label_pair(const SurfaceSpec& spec, const std::array<Vec3, 2>& pts, const Tolerance& tol,
                        bool& swapped) {
  const double band = tol.band(spec.scale());
  const double d0 = signed_distance(spec, pts[0]);
  const double d1 = signed_distance(spec, pts[1]);
  swapped = d0 > d1;
  const int up = swapped ? 0 : 1;
  return {pts[static_cast<std::size_t>(up)], pts[static_cast<std::size_t>(1 - up)],
          side_from_distance(std::max(d0, d1), band), side_from_distance(std::min(d0, d1), band)};
}

// Calls fn(i, j, k, points) for each mutually neighboring triple i < j < k
// with i fixed whose spheres meet in two points.
template <typename Fn>
void for_each_triple_of(const BallIndex& idx, int i, const Tolerance& tol, Fn&& fn) {
  const auto& ni = idx.neighbors(i);
  std::array<Vec3, 2> pts;
  for (auto jt = std::upper_bound(ni.begin(), ni.end(), i); jt != ni.end(); ++jt) {
    const int j = *jt;
    const auto& nj = idx.neighbors(j);
    auto a = jt + 1;
    auto b = std::upper_bound(nj.begin(), nj.end(), j);
    while (a != ni.end() && b != nj.end()) {
      if (*a < *b) {
        ++a;
      } else if (*b < *a) {
        ++b;
      } else {
        const int k = *a;
        if (try_tri_sphere_intersect(idx.ball(i), idx.ball(j), idx.ball(k), pts, tol) ==
            TriSphereStatus::Ok) {
          fn(j, k, pts);
        }
        ++a;
        ++b;
      }
    }
  }
}

template <typename T>
std::vector<T> concat(std::vector<std::vector<T>>& parts) {
  std::size_t total = 0;
  for (const auto& p : parts) total += p.size();
  std::vector<T> out;
  out.reserve(total);
  for (auto& p : parts) {
    out.insert(out.end(), std::make_move_iterator(p.begin()), std::make_move_iterator(p.end()));
    std::vector<T>().swap(p);
  }
  return out;
}

}  // namespace

BallIndex::BallIndex(std::vector<Ball> balls) : balls_(std::move(balls)), grid_(1.0) {
  for (const Ball& b : balls_) {
    if (!(b.radius > 0.0)) throw Error(ErrorCode::InvalidArgument, "BallIndex: radius must be positive");
    max_radius_ = std::max(max_radius_, b.radius);
  }
  if (balls_.empty()) return;
  grid_ = SpatialHash(2.0 * max_radius_);
  for (std::size_t i = 0; i < balls_.size(); ++i) grid_.insert(static_cast<int>(i), balls_[i].center);
  neighbors_.resize(balls_.size());
  parallel_for(balls_.size(), [&](std::size_t i) {
    const Ball& bi = balls_[i];
    auto& out = neighbors_[i];
    for_each_ball_near(bi.center, bi.radius + max_radius_, [&](int j) {
      if (static_cast<std::size_t>(j) == i) return;
      const Ball& bj = ball(j);
      if ((bi.center - bj.center).norm() < bi.radius + bj.radius) out.push_back(j);
    });
    std::sort(out.begin(), out.end());
  });
}

int BallIndex::covering_ball(const Vec3& x, std::array<int, 3> skip, const Tolerance& tol) const {
  int best = -1;
  grid_.for_each_candidate(x, max_radius_, [&](int l) {
    if (l == skip[0] || l == skip[1] || l == skip[2]) return;
    if (best >= 0 && l > best) return;
    if (point_in_ball(x, ball(l), tol) == BallSide::Inside) best = l;
  });
  return best;
}

BallIndex build_ball_index(const SampleSet& s) {
  std::vector<Ball> balls;
  balls.reserve(s.size());
  for (const auto& p : s.samples) balls.push_back({p.position, p.radius});
  return BallIndex(std::move(balls));
}

std::vector<GuidePair> enumerate_guides(const BallIndex& idx, const SurfaceSpec& spec, const Tolerance& tol) {
  std::vector<std::vector<GuidePair>> parts(idx.size());
  parallel_for(idx.size(), [&](std::size_t ui) {
    const int i = static_cast<int>(ui);
    for_each_triple_of(idx, i, tol, [&](int j, int k, const std::array<Vec3, 2>& pts) {
      bool swapped = false;
      const PairGeometry g = label_pair(spec, pts, tol, swapped);
      if (g.upper_side == Side::On || g.lower_side == Side::On) {
        throw Error(ErrorCode::SideAmbiguous, "enumerate_guides: guide point on the surface");
      }
      parts[ui].push_back({{i, j, k}, g.upper, g.lower, g.upper_side, g.lower_side, -1, -1});
    });
  });
  return concat(parts);
}

void classify_coverage(std::vector<GuidePair>& guides, const BallIndex& idx, const Tolerance& tol) {
  parallel_for(guides.size(), [&](std::size_t n) {
    GuidePair& g = guides[n];
    const auto& cand = idx.neighbors(g.triple[0]);
    g.upper_witness = first_cover(idx, cand, g.upper, g.triple[1], g.triple[2], tol);
    g.lower_witness = first_cover(idx, cand, g.lower, g.triple[1], g.triple[2], tol);
  });
}

std::vector<GuidePair> exposed_guides(const BallIndex& idx, const SurfaceSpec& spec, const Tolerance& tol) {
  std::vector<std::vector<GuidePair>> parts(idx.size());
  parallel_for(idx.size(), [&](std::size_t ui) {
    const int i = static_cast<int>(ui);
    const auto& cand = idx.neighbors(i);
    for_each_triple_of(idx, i, tol, [&](int j, int k, const std::array<Vec3, 2>& pts) {
      const int w0 = first_cover(idx, cand, pts[0], j, k, tol);
      const int w1 = first_cover(idx, cand, pts[1], j, k, tol);
      if (w0 >= 0 && w1 >= 0) return;
      bool swapped = false;
      const PairGeometry g = label_pair(spec, pts, tol, swapped);
      const int wu = swapped ? w0 : w1;
      const int wl = swapped ? w1 : w0;
      if ((wu < 0 && g.upper_side == Side::On) || (wl < 0 && g.lower_side == Side::On)) {
        throw Error(ErrorCode::SideAmbiguous, "exposed_guides: uncovered guide point on the surface");
      }
      parts[ui].push_back({{i, j, k}, g.upper, g.lower, g.upper_side, g.lower_side, wu, wl});
    });
  });
  return concat(parts);
}

char seed_kind_code(SeedKind kind) {
  switch (kind) {
    case SeedKind::Upper: return 'U';
    case SeedKind::Lower: return 'L';
    case SeedKind::Interior: return 'I';
  }
  return '?';
}

double seed_merge_distance(const BallIndex& idx) { return Tolerance{}.band(idx.max_radius()); }

SurfaceSeeds place_surface_seeds(const std::vector<GuidePair>& guides, double merge_distance) {
  SurfaceSeeds out;
  SpatialHash grid(std::max(merge_distance, 1e-12) * 4.0);
  std::vector<Vec3> placed;
  const auto place = [&](const Vec3& p, Side side, const std::array<int, 3>& triple) {
    bool duplicate = false;
    grid.for_each_candidate(p, merge_distance, [&](int id) {
      if ((placed[static_cast<std::size_t>(id)] - p).norm() <= merge_distance) duplicate = true;
    });
    if (duplicate) {
      ++out.duplicates_removed;
      return;
    }
    if (side == Side::On) {
      throw Error(ErrorCode::SideAmbiguous, "place_surface_seeds: seed on the surface");
    }
    grid.insert(static_cast<int>(placed.size()), p);
    placed.push_back(p);
    Seed s;
    s.position = p;
    s.kind = side == Side::Outside ? SeedKind::Upper : SeedKind::Lower;
    s.triple = triple;
    (s.kind == SeedKind::Upper ? out.upper : out.lower).push_back(s);
  };
  for (const GuidePair& g : guides) {
    if (!g.upper_covered()) place(g.upper, g.upper_side, g.triple);
    if (!g.lower_covered()) place(g.lower, g.lower_side, g.triple);
    if (g.half_covered()) out.half_covered.push_back(g);
  }
  int id = 0;
  for (Seed& s : out.upper) s.id = id++;
  for (Seed& s : out.lower) s.id = id++;
  return out;
}

std::vector<DiskCapResult> verify_disk_caps(const BallIndex& idx, const SampleSet& s, const SurfaceSpec& spec,
                                            const std::vector<GuidePair>& guides, const Tolerance& tol) {
  // Arrangement vertices: uncovered guide points, attached to each ball of
  // their triple. Node id = 2 * guide + (0 upper, 1 lower).
  std::vector<std::vector<int>> nodes_of(idx.size());
  for (std::size_t g = 0; g < guides.size(); ++g) {
    for (int side = 0; side < 2; ++side) {
      const bool covered = side == 0 ? guides[g].upper_covered() : guides[g].lower_covered();
      if (covered) continue;
      for (int b : guides[g].triple) nodes_of[static_cast<std::size_t>(b)].push_back(static_cast<int>(2 * g) + side);
    }
  }
  const auto node_point = [&](int node) -> const Vec3& {
    const GuidePair& g = guides[static_cast<std::size_t>(node / 2)];
    return node % 2 == 0 ? g.upper : g.lower;
  };
  const auto node_side = [&](int node) {
    const GuidePair& g = guides[static_cast<std::size_t>(node / 2)];
    return node % 2 == 0 ? g.upper_side : g.lower_side;
  };

  std::vector<DiskCapResult> out(idx.size());
  parallel_for(idx.size(), [&](std::size_t ui) {
    const int i = static_cast<int>(ui);
    const Ball& bi = idx.ball(i);
    const auto& nbrs = idx.neighbors(i);
    DiskCapResult& res = out[ui];

    res.pole_ok = true;
    for (double sign : {1.0, -1.0}) {
      const Vec3 pole = bi.center + sign * bi.radius * s.samples[ui].normal;
      for (int l : nbrs) {
        if (point_in_ball(pole, idx.ball(l), tol) != BallSide::Outside) res.pole_ok = false;
      }
    }
    if (nbrs.empty()) {
      res.ok = res.pole_ok;
      return;
    }

    const auto& local = nodes_of[ui];
    std::vector<int> parent(local.size());
    std::iota(parent.begin(), parent.end(), 0);
    const auto find = [&](int a) {
      while (parent[static_cast<std::size_t>(a)] != a) {
        parent[static_cast<std::size_t>(a)] = parent[static_cast<std::size_t>(parent[static_cast<std::size_t>(a)])];
        a = parent[static_cast<std::size_t>(a)];
      }
      return a;
    };
    std::vector<int> degree(local.size(), 0);
    std::vector<Side> loose_circles;

    for (int j : nbrs) {
      const Ball& bj = idx.ball(j);
      const Vec3 axis = bj.center - bi.center;
      const double d = axis.norm();
      const double a = (d * d + bi.radius * bi.radius - bj.radius * bj.radius) / (2.0 * d);
      const double rho2 = bi.radius * bi.radius - a * a;
      if (!(rho2 > 0.0)) continue;
      const double rho = std::sqrt(rho2);
      const Vec3 u = axis / d;
      const Vec3 m = bi.center + a * u;
      const Vec3 e1 = u.unitOrthogonal();
      const Vec3 e2 = u.cross(e1);
      const auto at = [&](double t) -> Vec3 { return m + rho * (std::cos(t) * e1 + std::sin(t) * e2); };
      const auto uncovered = [&](const Vec3& x) {
        return first_cover(idx, nbrs, x, j, -1, tol) < 0;
      };

      std::vector<std::pair<double, int>> on_circle;  // (angle, local node)
      for (std::size_t n = 0; n < local.size(); ++n) {
        const auto& tri = guides[static_cast<std::size_t>(local[n] / 2)].triple;
        if (tri[0] != j && tri[1] != j && tri[2] != j) continue;
        const Vec3 r = node_point(local[n]) - m;
        on_circle.emplace_back(std::atan2(r.dot(e2), r.dot(e1)), static_cast<int>(n));
      }
      if (on_circle.empty()) {
        const Vec3 probe = at(0.0);
        if (uncovered(probe)) loose_circles.push_back(signed_side(spec, probe, tol));
        continue;
      }
      std::sort(on_circle.begin(), on_circle.end());
      for (std::size_t q = 0; q < on_circle.size(); ++q) {
        const auto& [t0, n0] = on_circle[q];
        const auto& [t1raw, n1] = on_circle[(q + 1) % on_circle.size()];
        const double t1 = q + 1 == on_circle.size() ? t1raw + 2.0 * kPi : t1raw;
        if (!uncovered(at(0.5 * (t0 + t1)))) continue;
        ++degree[static_cast<std::size_t>(n0)];
        ++degree[static_cast<std::size_t>(n1)];
        parent[static_cast<std::size_t>(find(n0))] = find(n1);
      }
    }

    std::vector<int> comp_state(local.size(), 0);  // bit 1 upper, bit 2 lower
    for (std::size_t n = 0; n < local.size(); ++n) {
      if (degree[n] != 2) res.bad_degree = true;
      comp_state[static_cast<std::size_t>(find(static_cast<int>(n)))] |=
          node_side(local[n]) == Side::Outside ? 1 : 2;
    }
    for (std::size_t n = 0; n < local.size(); ++n) {
      if (find(static_cast<int>(n)) != static_cast<int>(n)) continue;
      if (comp_state[n] == 3) res.mixed_cycle = true;
      if (comp_state[n] == 1) ++res.upper_cycles;
      if (comp_state[n] == 2) ++res.lower_cycles;
    }
    for (Side side : loose_circles) {
      if (side == Side::Outside) ++res.upper_cycles;
      else if (side == Side::Inside) ++res.lower_cycles;
      else res.mixed_cycle = true;
    }
    res.ok = res.pole_ok && !res.bad_degree && !res.mixed_cycle && res.upper_cycles == 1 &&
             res.lower_cycles == 1;
  });
  return out;
}

std::vector<std::vector<int>> seeds_by_ball(const BallIndex& idx, const std::vector<Seed>& seeds,
                                            const Tolerance& tol) {
  std::vector<std::vector<int>> out(idx.size());
  for (std::size_t n = 0; n < seeds.size(); ++n) {
    if (seeds[n].kind == SeedKind::Interior) continue;
    const Vec3& p = seeds[n].position;
    idx.for_each_ball_near(p, idx.max_radius() * (1.0 + 1e-9), [&](int i) {
      const Ball& b = idx.ball(i);
      if (std::abs((p - b.center).norm() - b.radius) <= tol.band(b.radius)) {
        out[static_cast<std::size_t>(i)].push_back(static_cast<int>(n));
      }
    });
  }
  for (auto& v : out) std::sort(v.begin(), v.end());
  return out;
}

std::vector<int> seeds_on_ball(int i, const BallIndex& idx, const std::vector<Seed>& seeds, const Tolerance& tol) {
  std::vector<int> out;
  const Ball& b = idx.ball(i);
  for (std::size_t n = 0; n < seeds.size(); ++n) {
    if (seeds[n].kind == SeedKind::Interior) continue;
    if (std::abs((seeds[n].position - b.center).norm() - b.radius) <= tol.band(b.radius)) {
      out.push_back(static_cast<int>(n));
    }
  }
  return out;
}

}  // namespace vorocrust
