#include "vorocrust/quality_verify.hpp"

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <numeric>
#include <random>
#include <unordered_map>

#include <Eigen/Eigenvalues>

#include "vorocrust/parallel.hpp"

namespace vorocrust {

namespace {

std::size_t uz(int i) { return static_cast<std::size_t>(i); }

Vec3 newell_normal(const std::vector<Vec3>& loop) {
  Vec3 n = Vec3::Zero();
  for (std::size_t k = 0; k < loop.size(); ++k) n += loop[k].cross(loop[(k + 1) % loop.size()]);
  return n;
}

// Minimal enclosing ball ---------------------------------------------------

struct MiniBall {
  Vec3 center = Vec3::Zero();
  double r2 = -1.0;

  bool contains(const Vec3& p, double slack) const { return (p - center).squaredNorm() <= r2 + slack; }
};

MiniBall ball_of_pair(const Vec3& a, const Vec3& b) {
  const Vec3 c = 0.5 * (a + b);
  return {c, (a - c).squaredNorm()};
}

MiniBall ball_of_triple(const Vec3& a, const Vec3& b, const Vec3& c) {
  const Vec3 u = b - a;
  const Vec3 v = c - a;
  const Vec3 w = u.cross(v);
  const double w2 = w.squaredNorm();
  if (w2 <= 1e-24 * u.squaredNorm() * v.squaredNorm()) {
    MiniBall best = ball_of_pair(a, b);
    for (const MiniBall& m : {ball_of_pair(a, c), ball_of_pair(b, c)}) {
      if (m.r2 > best.r2) best = m;
    }
    return best;
  }
  const Vec3 offset = (u.squaredNorm() * v.cross(w) + v.squaredNorm() * w.cross(u)) / (2.0 * w2);
  return {a + offset, offset.squaredNorm()};
}

MiniBall ball_of_support(const std::array<Vec3, 4>& r, int n) {
  switch (n) {
    case 0:
      return {};
    case 1:
      return {r[0], 0.0};
    case 2:
      return ball_of_pair(r[0], r[1]);
    case 3:
      return ball_of_triple(r[0], r[1], r[2]);
    default:
      break;
  }
  Eigen::Matrix3d a;
  Vec3 rhs;
  for (int k = 0; k < 3; ++k) {
    const Vec3 d = r[k + 1] - r[0];
    a.row(k) = 2.0 * d.transpose();
    rhs[k] = d.squaredNorm();
  }
  const double scale = rhs.maxCoeff();
  if (std::abs(a.determinant()) > 1e-12 * scale * std::sqrt(scale)) {
    const Vec3 offset = a.partialPivLu().solve(rhs);
    return {r[0] + offset, offset.squaredNorm()};
  }
  // Coplanar support: smallest triple ball that holds all four.
  MiniBall best;
  best.r2 = std::numeric_limits<double>::infinity();
  for (int skip = 0; skip < 4; ++skip) {
    std::array<Vec3, 3> t;
    int m = 0;
    for (int k = 0; k < 4; ++k) {
      if (k != skip) t[uz(m++)] = r[uz(k)];
    }
    const MiniBall cand = ball_of_triple(t[0], t[1], t[2]);
    if (cand.r2 < best.r2 && cand.contains(r[uz(skip)], 1e-12 * scale)) best = cand;
  }
  return best;
}

void move_to_front_ball(std::vector<Vec3>& pts, std::size_t end, std::array<Vec3, 4>& support, int n,
                        MiniBall& mb, double slack) {
  mb = ball_of_support(support, n);
  if (n == 4) return;
  for (std::size_t i = 0; i < end; ++i) {
    if (mb.contains(pts[i], slack)) continue;
    support[uz(n)] = pts[i];
    move_to_front_ball(pts, i, support, n + 1, mb, slack);
    std::rotate(pts.begin(), pts.begin() + static_cast<std::ptrdiff_t>(i),
                pts.begin() + static_cast<std::ptrdiff_t>(i) + 1);
  }
}

// Facet geometry -----------------------------------------------------------

struct Facet {
  std::vector<Vec3> loop;
  Vec3 normal;
  Vec3 centroid;
  double radius;
};

Facet make_facet(std::vector<Vec3> loop) {
  Facet f;
  f.centroid = Vec3::Zero();
  for (const Vec3& p : loop) f.centroid += p;
  f.centroid /= static_cast<double>(loop.size());
  f.normal = newell_normal(loop);
  const double len = f.normal.norm();
  f.normal = len > 0.0 ? Vec3(f.normal / len) : Vec3::UnitZ();
  f.radius = 0.0;
  for (const Vec3& p : loop) f.radius = std::max(f.radius, (p - f.centroid).norm());
  f.loop = std::move(loop);
  return f;
}

double point_segment_distance(const Vec3& p, const Vec3& a, const Vec3& b) {
  const Vec3 ab = b - a;
  const double len2 = ab.squaredNorm();
  const double t = len2 > 0.0 ? std::clamp((p - a).dot(ab) / len2, 0.0, 1.0) : 0.0;
  return (p - (a + t * ab)).norm();
}

/// Point in the closed convex polygon, for a point in (or near) its plane.
bool inside_polygon(const Facet& f, const Vec3& q, double slack) {
  const std::size_t k = f.loop.size();
  for (std::size_t i = 0; i < k; ++i) {
    const Vec3& a = f.loop[i];
    const Vec3& b = f.loop[(i + 1) % k];
    const Vec3 edge = b - a;
    if (edge.cross(q - a).dot(f.normal) < -slack * edge.norm()) return false;
  }
  return true;
}

double point_facet_distance(const Vec3& p, const Facet& f) {
  const double h = f.normal.dot(p - f.centroid);
  const Vec3 q = p - h * f.normal;
  if (inside_polygon(f, q, 0.0)) return std::abs(h);
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < f.loop.size(); ++i) {
    best = std::min(best, point_segment_distance(p, f.loop[i], f.loop[(i + 1) % f.loop.size()]));
  }
  return best;
}

/// Parameter in [0, 1] where segment a-b crosses the facet, if it does.
std::optional<double> segment_facet_crossing(const Vec3& a, const Vec3& b, const Facet& f) {
  const double da = f.normal.dot(a - f.centroid);
  const double db = f.normal.dot(b - f.centroid);
  if ((da > 0.0 && db > 0.0) || (da < 0.0 && db < 0.0) || da == db) return std::nullopt;
  const double t = da / (da - db);
  const Vec3 x = a + t * (b - a);
  if (!inside_polygon(f, x, 1e-12 * f.radius)) return std::nullopt;
  return t;
}

class FacetIndex {
 public:
  explicit FacetIndex(const ReconSurface& recon) {
    facets_.reserve(recon.facets.size());
    std::vector<Vec3> centroids;
    centroids.reserve(recon.facets.size());
    for (const ReconFacet& rf : recon.facets) {
      std::vector<Vec3> loop;
      loop.reserve(rf.vertices.size());
      for (int v : rf.vertices) loop.push_back(recon.vertices[uz(v)]);
      facets_.push_back(make_facet(std::move(loop)));
      centroids.push_back(facets_.back().centroid);
      max_radius_ = std::max(max_radius_, facets_.back().radius);
    }
    index_ = PointIndex(std::move(centroids));
  }

  const std::vector<Facet>& facets() const { return facets_; }
  double max_radius() const { return max_radius_; }

  double distance(const Vec3& p) const {
    if (facets_.empty()) return std::numeric_limits<double>::infinity();
    const double d0 = std::sqrt(index_.nearest(p).dist2);
    double best = std::numeric_limits<double>::infinity();
    index_.for_each_within(p, d0 + max_radius_, [&](int i) {
      const Facet& f = facets_[uz(i)];
      if ((p - f.centroid).norm() - f.radius < best) best = std::min(best, point_facet_distance(p, f));
    });
    return best;
  }

  template <typename Fn>
  void for_each_near(const Vec3& p, double radius, Fn&& fn) const {
    index_.for_each_within(p, radius + max_radius_, [&](int i) { fn(facets_[uz(i)]); });
  }

 private:
  std::vector<Facet> facets_;
  PointIndex index_;
  double max_radius_ = 0.0;
};

/// Deterministic points inside a convex polygon, spread over its fan.
std::vector<Vec3> polygon_probes(const std::vector<Vec3>& loop, std::size_t count) {
  std::vector<Vec3> out;
  if (loop.size() < 3) return out;
  out.reserve(count);
  const std::size_t fans = loop.size() - 2;
  for (std::size_t j = 0; j < count; ++j) {
    const std::size_t t = 1 + j % fans;
    double u = std::fmod(0.5 + static_cast<double>(j) * 0.7548776662466927, 1.0);
    double v = std::fmod(0.5 + static_cast<double>(j) * 0.5698402909980532, 1.0);
    if (u + v > 1.0) {
      u = 1.0 - u;
      v = 1.0 - v;
    }
    out.push_back(loop[0] + u * (loop[t] - loop[0]) + v * (loop[t + 1] - loop[0]));
  }
  return out;
}

double acute_angle(const Vec3& a, const Vec3& b) {
  return std::atan2(a.cross(b).norm(), std::abs(a.dot(b)));
}

double unit_random(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

std::uint64_t edge_key(int a, int b) {
  if (a > b) std::swap(a, b);
  return (static_cast<std::uint64_t>(static_cast<std::uint32_t>(a)) << 32) | static_cast<std::uint32_t>(b);
}

int find_root(std::vector<int>& parent, int x) {
  while (parent[uz(x)] != x) {
    parent[uz(x)] = parent[uz(parent[uz(x)])];
    x = parent[uz(x)];
  }
  return x;
}

}  // namespace

// Cells ---------------------------------------------------------------------

CellGeometry cell_geometry(const VoronoiCell& cell) {
  CellGeometry g;
  g.seed = cell.seed;
  g.vertices = cell.vertices;
  for (const VoronoiFace& f : cell.faces) g.planes.push_back({f.normal, f.offset});
  return g;
}

CellGeometry cell_geometry(const VolumeMesh& mesh, const MeshCell& cell, const std::vector<Seed>& seeds) {
  CellGeometry g;
  const Vec3& s = seeds[uz(cell.seed_id)].position;
  g.seed = s;
  std::vector<int> ids;
  for (int fi : cell.faces) {
    const MeshFace& f = mesh.faces[uz(fi)];
    const int other = f.seed_a == cell.seed_id ? f.seed_b : f.seed_a;
    if (other >= 0) {
      const Vec3& t = seeds[uz(other)].position;
      const Vec3 n = (t - s).normalized();
      g.planes.push_back({n, n.dot(0.5 * (s + t))});
    } else {
      std::vector<Vec3> loop;
      for (int v : mesh.oriented_face(fi, cell.seed_id)) loop.push_back(mesh.vertices[uz(v)]);
      const Facet facet = make_facet(std::move(loop));
      g.planes.push_back({facet.normal, facet.normal.dot(facet.centroid)});
    }
    ids.insert(ids.end(), f.vertices.begin(), f.vertices.end());
  }
  std::sort(ids.begin(), ids.end());
  ids.erase(std::unique(ids.begin(), ids.end()), ids.end());
  for (int v : ids) g.vertices.push_back(mesh.vertices[uz(v)]);
  return g;
}

Ball minimal_enclosing_ball(std::vector<Vec3> points) {
  if (points.empty()) throw Error(ErrorCode::InvalidArgument, "minimal_enclosing_ball: no points");
  Eigen::AlignedBox3d box;
  for (const Vec3& p : points) box.extend(p);
  const double extent = box.sizes().squaredNorm();
  std::array<Vec3, 4> support;
  MiniBall mb;
  move_to_front_ball(points, points.size(), support, 0, mb, 1e-13 * extent);
  double r2 = 0.0;
  for (const Vec3& p : points) r2 = std::max(r2, (p - mb.center).squaredNorm());
  return {mb.center, std::sqrt(r2)};
}

InscribedBall largest_inscribed_ball(const std::vector<Plane>& planes, const Vec3& start) {
  // Tucker tableau over y = x - start (free) and t >= 0; basic variables are
  // the slacks b_f - n_f . y - t. Bland's rule on variable indices.
  const std::size_t m = planes.size();
  if (m < 4) throw Error(ErrorCode::DegenerateCell, "largest_inscribed_ball: fewer than four planes");
  double scale = 0.0;
  std::vector<double> beta(m);
  for (std::size_t f = 0; f < m; ++f) {
    beta[f] = std::max(0.0, planes[f].offset - planes[f].normal.dot(start));
    scale = std::max(scale, beta[f]);
  }
  if (!(scale > 0.0)) throw Error(ErrorCode::DegenerateCell, "largest_inscribed_ball: start on every plane");
  for (double& b : beta) b /= scale;

  constexpr int kVars = 4;
  std::vector<std::array<double, kVars>> alpha(m);
  for (std::size_t f = 0; f < m; ++f) {
    alpha[f] = {planes[f].normal.x(), planes[f].normal.y(), planes[f].normal.z(), 1.0};
  }
  std::array<double, kVars> gamma{0.0, 0.0, 0.0, 1.0};
  std::array<int, kVars> nonbasic{0, 1, 2, 3};
  std::vector<int> basic(m);
  std::iota(basic.begin(), basic.end(), kVars);
  std::vector<double> sign(m + kVars, 1.0);
  const auto is_free = [](int var) { return var < 3; };
  constexpr double kTol = 1e-12;

  const std::size_t max_pivots = 64 * (m + kVars);
  for (std::size_t iter = 0;; ++iter) {
    if (iter > max_pivots) throw Error(ErrorCode::DegenerateCell, "largest_inscribed_ball: no convergence");
    int col = -1;
    for (int j = 0; j < kVars; ++j) {
      const int var = nonbasic[uz(j)];
      const bool eligible = gamma[uz(j)] > kTol || (is_free(var) && gamma[uz(j)] < -kTol);
      if (eligible && (col < 0 || var < nonbasic[uz(col)])) col = j;
    }
    if (col < 0) break;
    if (gamma[uz(col)] < 0.0) {
      gamma[uz(col)] = -gamma[uz(col)];
      for (auto& row : alpha) row[uz(col)] = -row[uz(col)];
      sign[uz(nonbasic[uz(col)])] = -sign[uz(nonbasic[uz(col)])];
    }
    int row = -1;
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < m; ++i) {
      if (is_free(basic[i]) || alpha[i][uz(col)] <= kTol) continue;
      const double ratio = beta[i] / alpha[i][uz(col)];
      if (ratio < best - kTol || (ratio <= best + kTol && row >= 0 && basic[i] < basic[uz(row)])) {
        if (ratio < best) best = ratio;
        row = static_cast<int>(i);
      }
    }
    if (row < 0) throw Error(ErrorCode::DegenerateCell, "largest_inscribed_ball: unbounded cell");

    const std::size_t r = uz(row);
    const double piv = alpha[r][uz(col)];
    beta[r] /= piv;
    for (int j = 0; j < kVars; ++j) {
      if (j != col) alpha[r][uz(j)] /= piv;
    }
    alpha[r][uz(col)] = 1.0 / piv;
    for (std::size_t i = 0; i < m; ++i) {
      if (i == r) continue;
      const double a = alpha[i][uz(col)];
      if (a == 0.0) continue;
      beta[i] -= a * beta[r];
      for (int j = 0; j < kVars; ++j) {
        if (j != col) alpha[i][uz(j)] -= a * alpha[r][uz(j)];
      }
      alpha[i][uz(col)] = -a / piv;
    }
    const double g = gamma[uz(col)];
    for (int j = 0; j < kVars; ++j) {
      if (j != col) gamma[uz(j)] -= g * alpha[r][uz(j)];
    }
    gamma[uz(col)] = -g / piv;
    std::swap(nonbasic[uz(col)], basic[r]);
  }

  std::array<double, kVars> value{0.0, 0.0, 0.0, 0.0};
  for (std::size_t i = 0; i < m; ++i) {
    if (basic[i] < kVars) value[uz(basic[i])] = sign[uz(basic[i])] * beta[i] * scale;
  }
  return {start + Vec3(value[0], value[1], value[2]), value[3]};
}

CellFatness cell_fatness(const CellGeometry& cell) {
  if (cell.vertices.size() < 4 || cell.planes.size() < 4) {
    throw Error(ErrorCode::DegenerateCell, "cell_fatness: cell has fewer than four vertices or faces");
  }
  CellFatness out;
  for (const Vec3& v : cell.vertices) out.seed_outradius = std::max(out.seed_outradius, (v - cell.seed).norm());
  out.outradius = minimal_enclosing_ball(cell.vertices).radius;
  out.inradius = largest_inscribed_ball(cell.planes, cell.seed).radius;
  if (!(out.inradius > 1e-12 * out.outradius)) {
    throw Error(ErrorCode::DegenerateCell, "cell_fatness: zero inradius");
  }
  out.fatness = out.outradius / out.inradius;
  return out;
}

FatnessSummary verify_fatness(const VolumeMesh& mesh, const std::vector<Seed>& seeds, const ExtendedLfs& field) {
  const std::size_t n = mesh.cells.size();
  std::vector<CellFatness> fat(n);
  std::vector<double> outratio(n, 0.0);
  parallel_for(n, [&](std::size_t c) {
    const MeshCell& cell = mesh.cells[c];
    fat[c] = cell_fatness(cell_geometry(mesh, cell, seeds));
    outratio[c] = fat[c].seed_outradius / field(seeds[uz(cell.seed_id)].position);
  });
  FatnessSummary out;
  for (std::size_t c = 0; c < n; ++c) {
    const MeshCell& cell = mesh.cells[c];
    out.max_outradius_ratio = std::max(out.max_outradius_ratio, outratio[c]);
    if (cell.kind == SeedKind::Interior) {
      ++out.interior_cells;
      if (fat[c].fatness > out.max_interior) {
        out.max_interior = fat[c].fatness;
        out.worst_interior_seed = cell.seed_id;
      }
    } else {
      ++out.boundary_cells;
      if (fat[c].fatness > out.max_boundary) {
        out.max_boundary = fat[c].fatness;
        out.worst_boundary_seed = cell.seed_id;
      }
    }
  }
  return out;
}

// Surface -------------------------------------------------------------------

SurfaceTopology surface_topology(const ReconSurface& recon) {
  SurfaceTopology t;
  const std::size_t nv = recon.vertices.size();
  t.facets = recon.facets.size();

  std::unordered_map<std::uint64_t, int> edge_count;
  std::vector<std::vector<int>> vertex_facets(nv);
  std::vector<char> used(nv, 0);
  std::vector<int> parent(nv);
  std::iota(parent.begin(), parent.end(), 0);
  for (std::size_t fi = 0; fi < recon.facets.size(); ++fi) {
    const auto& loop = recon.facets[fi].vertices;
    for (std::size_t k = 0; k < loop.size(); ++k) {
      const int a = loop[k];
      const int b = loop[(k + 1) % loop.size()];
      ++edge_count[edge_key(a, b)];
      vertex_facets[uz(a)].push_back(static_cast<int>(fi));
      used[uz(a)] = 1;
      parent[uz(find_root(parent, a))] = find_root(parent, b);
    }
  }
  for (std::size_t v = 0; v < nv; ++v) t.vertices += used[v] ? 1 : 0;
  t.edges = edge_count.size();
  for (const auto& [key, count] : edge_count) {
    if (count < 2) ++t.open_edges;
    if (count > 2) ++t.nonmanifold_edges;
  }

  for (std::size_t v = 0; v < nv; ++v) {
    if (!used[v]) continue;
    // Link of v: one edge (prev, next) per incident facet; a single cycle
    // means every link vertex has degree two and the link is connected.
    std::unordered_map<int, std::vector<int>> link;
    for (int fi : vertex_facets[v]) {
      const auto& loop = recon.facets[uz(fi)].vertices;
      const std::size_t k = loop.size();
      const std::size_t pos = static_cast<std::size_t>(
          std::find(loop.begin(), loop.end(), static_cast<int>(v)) - loop.begin());
      const int prev = loop[(pos + k - 1) % k];
      const int next = loop[(pos + 1) % k];
      link[prev].push_back(next);
      link[next].push_back(prev);
    }
    bool ok = true;
    for (const auto& [u, adj] : link) ok = ok && adj.size() == 2;
    if (ok) {
      const int first = link.begin()->first;
      int prev = first;
      int cur = link[first][0];
      std::size_t steps = 1;
      while (cur != first && steps <= link.size()) {
        const auto& adj = link[cur];
        const int next = adj[0] == prev ? adj[1] : adj[0];
        prev = cur;
        cur = next;
        ++steps;
      }
      ok = cur == first && steps == link.size();
    }
    if (!ok) ++t.nonmanifold_vertices;
  }

  for (std::size_t v = 0; v < nv; ++v) {
    if (used[v] && find_root(parent, static_cast<int>(v)) == static_cast<int>(v)) ++t.components;
  }
  t.watertight = t.open_edges == 0 && t.nonmanifold_edges == 0 && t.facets > 0;
  t.manifold = t.watertight && t.nonmanifold_vertices == 0;
  t.euler = static_cast<long>(t.vertices) - static_cast<long>(t.edges) + static_cast<long>(t.facets);
  if (t.manifold && t.components == 1 && t.euler % 2 == 0) t.genus = (2 - t.euler) / 2;
  return t;
}

SurfaceDistance two_sided_distance(const ReconSurface& recon, const SurfaceSpec& spec, std::size_t probe_count) {
  SurfaceDistance out;
  const FacetIndex index(recon);

  const std::vector<Vec3> probes = quasi_uniform_points(spec, probe_count);
  std::vector<double> forward(probes.size(), 0.0);
  parallel_for(probes.size(), [&](std::size_t i) {
    forward[i] = index.distance(probes[i]) / lfs(spec, probes[i]);
  });
  out.surface_probes = probes.size();
  for (double d : forward) out.max_surface_to_recon = std::max(out.max_surface_to_recon, d);

  const std::size_t nf = index.facets().size();
  if (nf == 0) return out;
  const std::size_t per_facet = std::max<std::size_t>(1, (probe_count + nf - 1) / nf);
  std::vector<double> backward(nf, 0.0);
  parallel_for(nf, [&](std::size_t f) {
    const Facet& facet = index.facets()[f];
    std::vector<Vec3> pts = polygon_probes(facet.loop, per_facet);
    pts.insert(pts.end(), facet.loop.begin(), facet.loop.end());
    double worst = 0.0;
    for (const Vec3& x : pts) {
      const SurfacePoint sp = project(spec, x);
      worst = std::max(worst, (x - sp.position).norm() / sp.lfs);
    }
    backward[f] = worst;
  });
  out.recon_probes = 0;
  for (std::size_t f = 0; f < nf; ++f) {
    out.recon_probes += per_facet + index.facets()[f].loop.size();
    out.max_recon_to_surface = std::max(out.max_recon_to_surface, backward[f]);
  }
  return out;
}

SandwichResult verify_sandwich(const ReconSurface& recon, const BallIndex& idx, std::size_t interior_probes) {
  SandwichResult out;
  const std::size_t nf = recon.facets.size();
  std::vector<double> worst(nf, -1.0);
  std::vector<std::size_t> outside(nf, 0);
  std::vector<std::size_t> points(nf, 0);
  const double reach = 2.0 * idx.max_radius();
  const Tolerance tol;
  parallel_for(nf, [&](std::size_t f) {
    std::vector<Vec3> loop;
    for (int v : recon.facets[f].vertices) loop.push_back(recon.vertices[uz(v)]);
    std::vector<Vec3> pts = polygon_probes(loop, interior_probes);
    pts.insert(pts.end(), loop.begin(), loop.end());
    for (const Vec3& x : pts) {
      double excess = 1.0;
      bool inside = false;
      idx.for_each_ball_near(x, reach, [&](int j) {
        const Ball& b = idx.ball(j);
        excess = std::min(excess, (x - b.center).norm() / b.radius - 1.0);
        if (point_in_ball(x, b, tol) != BallSide::Outside) inside = true;
      });
      worst[f] = std::max(worst[f], excess);
      if (!inside) ++outside[f];
    }
    points[f] = pts.size();
  });
  out.worst_violation = nf > 0 ? -1.0 : 0.0;
  for (std::size_t f = 0; f < nf; ++f) {
    out.worst_violation = std::max(out.worst_violation, worst[f]);
    out.outside += outside[f];
    out.points += points[f];
  }
  out.ok = out.outside == 0;
  return out;
}

GuideTriangleStats verify_guide_triangles(const std::vector<GuidePair>& guides, const SampleSet& s) {
  const std::size_t n = guides.size();
  std::vector<GuideTriangleStats> per(n);
  parallel_for(n, [&](std::size_t g) {
    const auto& tri = guides[g].triple;
    std::array<const SurfaceSample*, 3> p{};
    for (int k = 0; k < 3; ++k) p[uz(k)] = &s.samples[uz(tri[uz(k)])];
    const SurfaceSample* low = *std::min_element(
        p.begin(), p.end(), [](const SurfaceSample* a, const SurfaceSample* b) { return a->lfs < b->lfs; });
    GuideTriangleStats& st = per[g];
    const auto q = triangle_quality(p[0]->position, p[1]->position, p[2]->position);
    const auto cc = circumcenter_radius(p[0]->position, p[1]->position, p[2]->position);
    const Vec3 normal = (p[1]->position - p[0]->position).cross(p[2]->position - p[0]->position);
    st.triangles = 1;
    st.max_circumradius = cc.radius / (s.delta * low->lfs);
    st.max_normal_deviation = acute_angle(normal, low->normal);
    for (int a = 0; a < 3; ++a) {
      for (int b = a + 1; b < 3; ++b) {
        st.max_vertex_normal_variation =
            std::max(st.max_vertex_normal_variation, acute_angle(p[uz(a)]->normal, p[uz(b)]->normal));
      }
    }
    st.min_angle = q.min_angle;
    st.max_angle = q.max_angle;
    st.max_edge_ratio = q.edge_ratio;
    st.min_altitude = q.min_altitude_over_longest_edge;
  });
  GuideTriangleStats out;
  for (const GuideTriangleStats& st : per) {
    out.triangles += st.triangles;
    out.max_circumradius = std::max(out.max_circumradius, st.max_circumradius);
    out.max_normal_deviation = std::max(out.max_normal_deviation, st.max_normal_deviation);
    out.max_vertex_normal_variation = std::max(out.max_vertex_normal_variation, st.max_vertex_normal_variation);
    out.min_angle = std::min(out.min_angle, st.min_angle);
    out.max_angle = std::max(out.max_angle, st.max_angle);
    out.max_edge_ratio = std::max(out.max_edge_ratio, st.max_edge_ratio);
    out.min_altitude = std::min(out.min_altitude, st.min_altitude);
  }
  return out;
}

CrossingResult normal_line_crossing(const ReconSurface& recon, const SurfaceSpec& spec, std::size_t probe_count,
                                    double reach) {
  const FacetIndex index(recon);
  const std::vector<Vec3> probes = quasi_uniform_points(spec, probe_count);
  std::vector<int> crossings(probes.size(), 0);
  parallel_for(probes.size(), [&](std::size_t i) {
    const SurfacePoint sp = project(spec, probes[i]);
    const double half = reach * sp.lfs;
    const Vec3 a = sp.position - half * sp.normal;
    const Vec3 b = sp.position + half * sp.normal;
    std::vector<double> hits;
    index.for_each_near(sp.position, half, [&](const Facet& f) {
      if (const auto t = segment_facet_crossing(a, b, f)) hits.push_back(*t);
    });
    std::sort(hits.begin(), hits.end());
    int distinct = 0;
    for (std::size_t k = 0; k < hits.size(); ++k) {
      if (k == 0 || hits[k] - hits[k - 1] > 1e-9) ++distinct;
    }
    crossings[i] = distinct;
  });
  CrossingResult out;
  out.probes = probes.size();
  for (int c : crossings) {
    if (c == 0) ++out.missing_crossing_count;
    if (c > 1) ++out.multi_crossing_count;
  }
  out.ok = out.missing_crossing_count == 0 && out.multi_crossing_count == 0;
  return out;
}

LfsIntegral integrate_inverse_cubed_lfs(const SurfaceSpec& spec, const ExtendedLfs& field, std::size_t points,
                                        std::uint64_t rng_seed) {
  const Eigen::AlignedBox3d box = spec.bounds();
  const Vec3 lo = box.min();
  const Vec3 size = box.sizes();
  std::mt19937_64 rng(rng_seed);
  std::vector<Vec3> xs(points);
  for (Vec3& x : xs) {
    for (int k = 0; k < 3; ++k) x[k] = lo[k] + size[k] * unit_random(rng);
  }
  std::vector<double> value(points, 0.0);
  parallel_for(points, [&](std::size_t i) {
    if (signed_side(spec, xs[i]) != Side::Inside) return;
    const double l = field(xs[i]);
    value[i] = 1.0 / (l * l * l);
  });
  double sum = 0.0;
  double sum2 = 0.0;
  for (double v : value) {
    sum += v;
    sum2 += v * v;
  }
  LfsIntegral out;
  out.points = points;
  if (points == 0) return out;
  const double nn = static_cast<double>(points);
  const double mean = sum / nn;
  const double var = std::max(0.0, sum2 / nn - mean * mean);
  const double volume = size.prod();
  out.value = volume * mean;
  out.relative_ci = mean > 0.0 ? 1.96 * std::sqrt(var / nn) / mean : 0.0;
  return out;
}

// Report --------------------------------------------------------------------

const Check* QualityReport::find(const std::string& name) const {
  for (const Check& c : checks) {
    if (c.name == name) return &c;
  }
  return nullptr;
}

bool QualityReport::passed() const {
  return std::all_of(checks.begin(), checks.end(),
                     [](const Check& c) { return !c.enforced || c.pass.value_or(false); });
}

namespace {

class ReportBuilder {
 public:
  explicit ReportBuilder(QualityReport& report) : report_(report) {}

  Check& add(std::string name, std::string reference, std::optional<double> measured, std::optional<double> bound,
             Relation relation, bool enforced = true, std::string note = {}) {
    Check c;
    c.name = std::move(name);
    c.reference = std::move(reference);
    c.measured = measured;
    c.bound = bound;
    c.relation = relation;
    c.enforced = enforced && bound.has_value() && measured.has_value();
    if (bound && measured) {
      switch (relation) {
        case Relation::AtMost:
          c.pass = *measured <= *bound;
          break;
        case Relation::AtLeast:
          c.pass = *measured >= *bound;
          break;
        case Relation::Equal:
          c.pass = *measured == *bound;
          break;
      }
    }
    c.note = std::move(note);
    report_.checks.push_back(std::move(c));
    return report_.checks.back();
  }

  Check& zero(std::string name, std::string reference, std::size_t violations, bool enforced = true,
              std::string note = {}) {
    return add(std::move(name), std::move(reference), static_cast<double>(violations), 0.0, Relation::AtMost,
               enforced, std::move(note));
  }

  void count(std::string name, std::size_t value) {
    report_.counts.emplace_back(std::move(name), static_cast<std::int64_t>(value));
  }

  template <typename Fn>
  auto timed(const std::string& stage, Fn&& fn) {
    const auto t0 = std::chrono::steady_clock::now();
    if constexpr (std::is_void_v<decltype(fn())>) {
      fn();
      stop(stage, t0);
    } else {
      auto result = fn();
      stop(stage, t0);
      return result;
    }
  }

 private:
  void stop(const std::string& stage, std::chrono::steady_clock::time_point t0) {
    const double ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
    report_.timing_ms.emplace_back("verify_" + stage, ms);
  }

  QualityReport& report_;
};

struct MeshConsistency {
  std::size_t open_cells = 0;
  std::size_t unshared_faces = 0;
  std::size_t boundary_faces = 0;
  std::size_t interior_upper_faces = 0;
  std::size_t nonpositive_volumes = 0;
};

MeshConsistency mesh_consistency(const VolumeMesh& mesh, const std::vector<Seed>& seeds) {
  MeshConsistency out;
  std::vector<int> uses(mesh.faces.size(), 0);
  std::unordered_map<int, SeedKind> kind;
  for (const MeshCell& c : mesh.cells) kind.emplace(c.seed_id, c.kind);
  for (const MeshCell& c : mesh.cells) {
    std::unordered_map<std::uint64_t, int> directed;
    for (int fi : c.faces) {
      ++uses[uz(fi)];
      const auto loop = mesh.oriented_face(fi, c.seed_id);
      for (std::size_t k = 0; k < loop.size(); ++k) {
        const int a = loop[k];
        const int b = loop[(k + 1) % loop.size()];
        directed[edge_key(a, b)] += a < b ? 1 : -1;
      }
    }
    const bool closed = std::all_of(directed.begin(), directed.end(), [](const auto& e) { return e.second == 0; });
    if (!closed) ++out.open_cells;
    if (!(mesh.cell_volume(c) > 0.0)) ++out.nonpositive_volumes;
  }
  for (std::size_t f = 0; f < mesh.faces.size(); ++f) {
    const MeshFace& face = mesh.faces[f];
    const bool b_is_cell = face.seed_b >= 0 && kind.count(face.seed_b) > 0;
    if (uses[f] != (b_is_cell ? 2 : 1)) ++out.unshared_faces;
    if (face.seed_b < 0) ++out.boundary_faces;
    const auto is_upper = [&](int id) { return id >= 0 && seeds[uz(id)].kind == SeedKind::Upper; };
    const auto is_interior = [&](int id) { return id >= 0 && seeds[uz(id)].kind == SeedKind::Interior; };
    if ((is_interior(face.seed_a) && is_upper(face.seed_b)) || (is_upper(face.seed_a) && is_interior(face.seed_b))) {
      ++out.interior_upper_faces;
    }
  }
  return out;
}

}  // namespace

QualityReport build_report(const RunArtifacts& art, const ReportParams& params) {
  QualityReport report;
  report.params = params;
  ReportBuilder rb(report);
  const SurfaceSpec& spec = art.spec;
  const SampleSet& s = art.samples;
  const ParametricBounds pb = parametric_bounds(params.eps, params.sigma, params.delta);
  const std::size_t probes = params.probe_count;
  const bool with_interior = !params.skip_interior;

  std::vector<Seed> surface_seeds;
  std::size_t interior_seed_count = 0;
  for (const Seed& seed : art.seeds) {
    if (seed.kind == SeedKind::Interior) {
      ++interior_seed_count;
    } else {
      surface_seeds.push_back(seed);
    }
  }

  // Sample.
  const CoveringResult covering = rb.timed("covering", [&] { return verify_covering(s, spec, probes); });
  rb.add("sample_covering", "every surface point within eps lfs of a sample", covering.worst_ratio, 1.0,
         Relation::AtMost);
  const SparsityResult sparsity = rb.timed("sparsity", [&] { return verify_sparsity(s); });
  rb.zero("sample_sparsity", "sample spacing at least sigma eps lfs", sparsity.violations.size());

  // Balls and guides.
  const BallIndex idx = build_ball_index(s);
  double edge_min = std::numeric_limits<double>::infinity();
  double edge_max = 0.0;
  for (std::size_t i = 0; i < idx.size(); ++i) {
    for (int j : idx.neighbors(static_cast<int>(i))) {
      const double r = (s.samples[i].position - s.samples[uz(j)].position).norm() / s.samples[i].lfs;
      edge_min = std::min(edge_min, r);
      edge_max = std::max(edge_max, r);
    }
  }
  const bool have_edges = edge_max > 0.0;
  rb.add("ball_edge_min", "distance between overlapping ball centers at least kappa_eps lfs",
         have_edges ? std::optional<double>(edge_min) : std::nullopt, pb.kappa_eps, Relation::AtLeast);
  rb.add("ball_edge_max", "distance between overlapping ball centers at most kappa delta lfs",
         have_edges ? std::optional<double>(edge_max) : std::nullopt, pb.kappa * pb.delta, Relation::AtMost);

  const std::vector<GuidePair> guides = rb.timed("guides", [&] { return exposed_guides(idx, spec); });
  std::size_t same_side = 0;
  std::size_t half_covered = 0;
  for (const GuidePair& g : guides) {
    if (!g.upper_covered() && !g.lower_covered() && g.upper_side == g.lower_side) ++same_side;
    if (g.half_covered()) ++half_covered;
  }
  rb.zero("seed_pair_same_side", "an uncovered seed pair never lies on one side of M", same_side);

  const auto caps = rb.timed("disk_caps", [&] { return verify_disk_caps(idx, s, spec, guides); });
  const std::size_t cap_failures =
      static_cast<std::size_t>(std::count_if(caps.begin(), caps.end(), [](const DiskCapResult& c) { return !c.ok; }));
  rb.zero("disk_caps", "every ball has an uncovered upper and lower cap", cap_failures);

  const auto on_ball = seeds_by_ball(idx, surface_seeds);
  std::size_t sparse_caps = 0;
  for (std::size_t i = 0; i < idx.size(); ++i) {
    int up = 0;
    int low = 0;
    Eigen::MatrixXd pts(3, static_cast<Eigen::Index>(on_ball[i].size()));
    for (std::size_t k = 0; k < on_ball[i].size(); ++k) {
      const Seed& seed = surface_seeds[uz(on_ball[i][k])];
      (seed.kind == SeedKind::Upper ? up : low) += 1;
      pts.col(static_cast<Eigen::Index>(k)) = seed.position;
    }
    bool spread = false;
    if (pts.cols() >= 4) {
      const Vec3 mean = pts.rowwise().mean();
      const Eigen::Matrix3d cov = (pts.colwise() - mean) * (pts.colwise() - mean).transpose();
      const double smallest = Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d>(cov).eigenvalues()[0];
      const double r = idx.ball(static_cast<int>(i)).radius;
      spread = smallest > 1e-12 * r * r;
    }
    if (up < 3 || low < 3 || !spread) ++sparse_caps;
  }
  rb.zero("seeds_per_cap", "each cap holds at least three seeds, not all coplanar", sparse_caps);

  double elevation = kPi;
  std::size_t seeds_off_spheres = 0;
  std::size_t seeds_covered = 0;
  const Tolerance tol;
  for (const Seed& seed : surface_seeds) {
    for (int b : seed.triple) {
      const SurfaceSample& p = s.samples[uz(b)];
      const Vec3 d = seed.position - p.position;
      elevation = std::min(elevation, std::asin(std::min(1.0, std::abs(p.normal.dot(d)) / d.norm())));
      if (std::abs(d.norm() - p.radius) > tol.band(p.radius)) ++seeds_off_spheres;
    }
    if (idx.covering_ball(seed.position, seed.triple, tol) >= 0) ++seeds_covered;
  }
  rb.add("seed_elevation", "seed angle above the tangent plane of its ball centers",
         surface_seeds.empty() ? std::nullopt : std::optional<double>(elevation), pb.elevation, Relation::AtLeast,
         !params.delta_overridden, params.delta_overridden ? "bound assumes delta = 2 eps" : "");
  rb.zero("surface_seeds_on_spheres", "surface seeds lie on their three spheres", seeds_off_spheres);
  rb.zero("surface_seeds_uncovered", "surface seeds lie outside every other ball", seeds_covered);

  const GuideTriangleStats tri = rb.timed("guide_triangles", [&] { return verify_guide_triangles(guides, s); });
  const bool have_tri = tri.triangles > 0;
  const auto measured = [&](double v) { return have_tri ? std::optional<double>(v) : std::nullopt; };
  const std::string undefined_note = "closed form undefined: alpha2 >= 1/4 at these parameters";
  const bool crad = pb.c_rad.has_value();
  rb.add("guide_circumradius", "guide triangle circumradius over delta lfs", measured(tri.max_circumradius), pb.rho_f,
         Relation::AtMost, true, crad ? "" : undefined_note);
  rb.add("guide_normal_deviation", "guide triangle normal vs surface normal (radians)",
         measured(tri.max_normal_deviation), pb.normal_deviation, Relation::AtMost, crad,
         crad ? "" : "premise alpha2 < 1/4 not met; reported only");
  rb.add("guide_vertex_normal_variation", "surface normal variation across a guide triangle (radians)",
         measured(tri.max_vertex_normal_variation), pb.vertex_normal_variation, Relation::AtMost);
  rb.add("guide_min_angle", "guide triangle smallest angle (radians)", measured(tri.min_angle), pb.min_angle,
         Relation::AtLeast, true, crad ? "" : undefined_note);
  rb.add("guide_edge_ratio", "guide triangle longest over shortest edge", measured(tri.max_edge_ratio),
         pb.edge_ratio, Relation::AtMost);
  rb.add("guide_min_altitude", "guide triangle altitude over its base", measured(tri.min_altitude),
         pb.min_altitude, Relation::AtLeast, true, crad ? "" : undefined_note);

  // Reconstruction.
  const ReconSurface recon = rb.timed("extract", [&] { return extract_surface(art.mesh, s); });
  std::vector<char> seen(s.size(), 0);
  for (int v : recon.sample_of_vertex) {
    if (v >= 0) seen[uz(v)] = 1;
  }
  const std::size_t missing_samples =
      static_cast<std::size_t>(std::count(seen.begin(), seen.end(), char{0}));
  rb.zero("samples_are_vertices", "every sample is a reconstruction vertex", missing_samples);

  report.topology = rb.timed("topology", [&] { return surface_topology(recon); });
  const SurfaceTopology& topo = report.topology;
  rb.zero("watertight", "every reconstruction edge bounds exactly two facets", topo.open_edges + topo.nonmanifold_edges);
  rb.zero("manifold", "every vertex link is a single cycle", topo.nonmanifold_vertices);
  rb.add("components", "connected components of the reconstruction", static_cast<double>(topo.components), 1.0,
         Relation::Equal);
  rb.add("euler_characteristic", "Euler characteristic matches the surface", static_cast<double>(topo.euler),
         static_cast<double>(spec.euler_characteristic()), Relation::Equal);

  const SandwichResult sandwich = rb.timed("sandwich", [&] { return verify_sandwich(recon, idx); });
  rb.zero("sandwich", "reconstruction inside the union of balls", sandwich.outside);

  const std::string empirical = "empirical at eps > 1/500";
  report.distance = rb.timed("distance", [&] { return two_sided_distance(recon, spec, probes); });
  rb.add("distance_surface_to_recon", "distance from M to the reconstruction over lfs",
         report.distance.max_surface_to_recon, pb.distance, Relation::AtMost, true, empirical);
  rb.add("distance_recon_to_surface", "distance from the reconstruction to M over lfs",
         report.distance.max_recon_to_surface, pb.distance, Relation::AtMost, true, empirical);
  const CrossingResult crossing =
      rb.timed("crossing", [&] { return normal_line_crossing(recon, spec, probes, 0.96 * params.eps); });
  rb.zero("normal_line_crossing", "normal segments cross the reconstruction exactly once",
          crossing.missing_crossing_count + crossing.multi_crossing_count, true, empirical);

  // Octree.
  const ExtendedLfs field(s);
  const Octree tree = rb.timed("octree", [&] { return build_octree(s, params.delta, default_root_box(s)); });
  const BoxBalance balance = verify_box_balance(tree);
  rb.add("box_balance", "half-width ratio of touching leaves", balance.worst_ratio, 2.0, Relation::AtMost);
  const std::vector<int> leaves = tree.leaves();
  std::vector<double> center_ratio(leaves.size());
  parallel_for(leaves.size(), [&](std::size_t n) {
    const OctreeBox& b = tree.box(leaves[n]);
    center_ratio[n] = b.radius() / field(b.center);
  });
  rb.add("leaf_center_low", "leaf radius over lfs at its center, lower", *std::min_element(center_ratio.begin(), center_ratio.end()),
         pb.leaf_center_low, Relation::AtLeast);
  rb.add("leaf_center_high", "leaf radius over lfs at its center, upper", *std::max_element(center_ratio.begin(), center_ratio.end()),
         pb.leaf_center_high, Relation::AtMost);
  {
    std::mt19937_64 rng(params.rng_seed ^ 0x6c65616670747321ULL);
    const Eigen::AlignedBox3d box = spec.bounds();
    std::vector<Vec3> pts;
    while (pts.size() < 10'000) {
      Vec3 x;
      for (int k = 0; k < 3; ++k) x[k] = box.min()[k] + box.sizes()[k] * unit_random(rng);
      if (signed_side(spec, x) == Side::Inside) pts.push_back(x);
    }
    std::vector<double> lo(pts.size()), hi(pts.size());
    parallel_for(pts.size(), [&](std::size_t n) {
      const double l = field(pts[n]);
      lo[n] = std::numeric_limits<double>::infinity();
      hi[n] = 0.0;
      for (int leaf : tree.leaves_containing(pts[n])) {
        lo[n] = std::min(lo[n], tree.box(leaf).radius() / l);
        hi[n] = std::max(hi[n], tree.box(leaf).radius() / l);
      }
    });
    rb.add("leaf_point_low", "leaf radius over lfs at an inside point of the leaf, lower",
           *std::min_element(lo.begin(), lo.end()), pb.leaf_point_low, Relation::AtLeast);
    rb.add("leaf_point_high", "leaf radius over lfs at an inside point of the leaf, upper",
           *std::max_element(hi.begin(), hi.end()), pb.leaf_point_high, Relation::AtMost);
  }

  std::size_t misplaced = 0;
  for (const Seed& seed : art.seeds) {
    if (seed.kind != SeedKind::Interior) continue;
    bool bad = signed_side(spec, seed.position) != Side::Inside;
    if (!params.allow_seeds_in_union) {
      idx.for_each_ball_near(seed.position, idx.max_radius() * (1.0 + 1e-9), [&](int j) {
        if (point_in_ball(seed.position, idx.ball(j), tol) != BallSide::Outside) bad = true;
      });
    }
    if (bad) ++misplaced;
  }
  rb.zero("interior_seed_placement", "interior seeds inside M and outside the union of balls", misplaced);

  const LfsIntegral integral =
      rb.timed("lfs_integral", [&] { return integrate_inverse_cubed_lfs(spec, field, 1'000'000, params.rng_seed); });
  rb.add("interior_seed_count", "interior seeds over the lfs^-3 volume integral",
         static_cast<double>(interior_seed_count), pb.seed_count_factor * integral.value, Relation::AtMost, true,
         "integral 95% relative half-width " + std::to_string(integral.relative_ci));

  // Volume mesh.
  const MeshConsistency mc = rb.timed("mesh", [&] { return mesh_consistency(art.mesh, art.seeds); });
  rb.zero("mesh_closed_cells", "every volume cell is closed", mc.open_cells + mc.nonpositive_volumes);
  rb.zero("mesh_shared_faces", "faces between volume cells are shared by both", mc.unshared_faces);
  rb.zero("mesh_bounded_cells", "volume cells avoid the clip box", mc.boundary_faces);
  rb.zero("interior_upper_faces", "no interior cell touches an upper cell", mc.interior_upper_faces,
          !params.allow_seeds_in_union);
  const double volume_error = std::abs(art.mesh.total_volume() - spec.volume()) / spec.volume();
  rb.add("volume_conservation", "volume of the cells inside the reconstruction vs the enclosed volume", volume_error,
         pb.volume_relative, Relation::AtMost, with_interior);

  const FatnessSummary fat = rb.timed("fatness", [&] { return verify_fatness(art.mesh, art.seeds, field); });
  rb.add("interior_fatness", "interior cell outradius over inradius",
         fat.interior_cells > 0 ? std::optional<double>(fat.max_interior) : std::nullopt, pb.interior_fatness,
         Relation::AtMost);
  rb.add("boundary_fatness", "boundary cell outradius over inradius",
         fat.boundary_cells > 0 ? std::optional<double>(fat.max_boundary) : std::nullopt, pb.boundary_fatness,
         Relation::AtMost, true, pb.boundary_fatness ? "" : undefined_note);
  rb.add("cell_outradius", "cell vertex distance to its seed over lfs at the seed", fat.max_outradius_ratio,
         pb.outradius_factor, Relation::AtMost);

  rb.count("samples", s.size());
  rb.count("exposed_guide_pairs", guides.size());
  rb.count("half_covered_pairs", half_covered);
  rb.count("upper_seeds", static_cast<std::size_t>(std::count_if(
                              surface_seeds.begin(), surface_seeds.end(),
                              [](const Seed& x) { return x.kind == SeedKind::Upper; })));
  rb.count("lower_seeds", static_cast<std::size_t>(std::count_if(
                              surface_seeds.begin(), surface_seeds.end(),
                              [](const Seed& x) { return x.kind == SeedKind::Lower; })));
  rb.count("interior_seeds", interior_seed_count);
  rb.count("octree_leaves", leaves.size());
  rb.count("mesh_vertices", art.mesh.vertices.size());
  rb.count("mesh_faces", art.mesh.faces.size());
  rb.count("volume_cells", art.mesh.cells.size());
  rb.count("surface_vertices", recon.vertices.size());
  rb.count("surface_facets", recon.facets.size());
  rb.count("steiner_vertices", static_cast<std::size_t>(std::count(
                                   recon.provenance.begin(), recon.provenance.end(), VertexProvenance::Steiner)));
  rb.count("covering_probes", covering.probes);
  rb.count("sandwich_points", sandwich.points);
  rb.count("crossing_probes", crossing.probes);
  return report;
}

}  // namespace vorocrust
