#include "vorocrust/voronoi_mesher.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <unordered_map>

#include "vorocrust/parallel.hpp"
#include "vorocrust/spatial_hash.hpp"

namespace vorocrust {

namespace {

enum : char { kIn = 0, kOn = 1, kOut = 2 };

/// Convex polyhedron under construction.
struct Poly {
  std::vector<Vec3> verts;
  std::vector<VoronoiFace> faces;
};

Poly box_poly(const Eigen::AlignedBox3d& box) {
  Poly p;
  const Vec3 lo = box.min();
  const Vec3 hi = box.max();
  for (int c = 0; c < 8; ++c) {
    p.verts.emplace_back((c & 1) ? hi.x() : lo.x(), (c & 2) ? hi.y() : lo.y(), (c & 4) ? hi.z() : lo.z());
  }
  const auto face = [&](std::vector<int> loop, const Vec3& n, double d) {
    p.faces.push_back({std::move(loop), kBoundaryNeighbor, n, d});
  };
  face({0, 4, 6, 2}, -Vec3::UnitX(), -lo.x());
  face({1, 3, 7, 5}, Vec3::UnitX(), hi.x());
  face({0, 1, 5, 4}, -Vec3::UnitY(), -lo.y());
  face({2, 6, 7, 3}, Vec3::UnitY(), hi.y());
  face({0, 2, 3, 1}, -Vec3::UnitZ(), -lo.z());
  face({4, 5, 7, 6}, Vec3::UnitZ(), hi.z());
  return p;
}

/// Keeps {x : n.x <= d}. Returns false when the plane misses the polyhedron.
bool clip(Poly& p, const Vec3& n, double d, int neighbor, double tol) {
  const std::size_t m = p.verts.size();
  std::vector<char> state(m);
  std::vector<double> dist(m);
  bool any_out = false;
  bool any_in = false;
  for (std::size_t i = 0; i < m; ++i) {
    dist[i] = n.dot(p.verts[i]) - d;
    state[i] = dist[i] > tol ? kOut : (dist[i] < -tol ? kIn : kOn);
    any_out |= state[i] == kOut;
    any_in |= state[i] == kIn;
  }
  if (!any_out) return false;
  if (!any_in) throw Error(ErrorCode::EmptyCell, "compute_cell: clipping removed the whole cell");

  std::vector<int> remap(m, -1);
  std::vector<Vec3> verts;
  verts.reserve(m + 8);
  for (std::size_t i = 0; i < m; ++i) {
    if (state[i] == kOut) continue;
    remap[i] = static_cast<int>(verts.size());
    verts.push_back(p.verts[i]);
  }
  std::vector<std::pair<std::uint64_t, int>> cuts;
  std::vector<char> on_cap(verts.size(), 0);
  const auto cut = [&](int a, int b) {
    const auto lo = static_cast<std::uint64_t>(std::min(a, b));
    const auto hi = static_cast<std::uint64_t>(std::max(a, b));
    const std::uint64_t key = (lo << 32) | hi;
    for (const auto& [k, id] : cuts) {
      if (k == key) return id;
    }
    const double da = dist[static_cast<std::size_t>(a)];
    const double db = dist[static_cast<std::size_t>(b)];
    const double t = da / (da - db);
    const int id = static_cast<int>(verts.size());
    verts.push_back(p.verts[static_cast<std::size_t>(a)] +
                    t * (p.verts[static_cast<std::size_t>(b)] - p.verts[static_cast<std::size_t>(a)]));
    on_cap.push_back(1);
    cuts.emplace_back(key, id);
    return id;
  };

  std::vector<VoronoiFace> faces;
  faces.reserve(p.faces.size() + 1);
  for (const VoronoiFace& f : p.faces) {
    std::vector<int> loop;
    const std::size_t k = f.vertices.size();
    for (std::size_t e = 0; e < k; ++e) {
      const int a = f.vertices[e];
      const int b = f.vertices[(e + 1) % k];
      const char sa = state[static_cast<std::size_t>(a)];
      const char sb = state[static_cast<std::size_t>(b)];
      if (sa != kOut) {
        loop.push_back(remap[static_cast<std::size_t>(a)]);
        if (sa == kOn) on_cap[static_cast<std::size_t>(remap[static_cast<std::size_t>(a)])] = 1;
      }
      if ((sa == kIn && sb == kOut) || (sa == kOut && sb == kIn)) loop.push_back(cut(a, b));
    }
    if (loop.size() >= 3) faces.push_back({std::move(loop), f.neighbor, f.normal, f.offset});
  }

  // The cap polygon: plane points sorted counter-clockwise around +n.
  std::vector<int> cap;
  for (std::size_t i = 0; i < verts.size(); ++i) {
    if (on_cap[i]) cap.push_back(static_cast<int>(i));
  }
  if (cap.size() >= 3) {
    Vec3 c = Vec3::Zero();
    for (int i : cap) c += verts[static_cast<std::size_t>(i)];
    c /= static_cast<double>(cap.size());
    int far = cap.front();
    for (int i : cap) {
      if ((verts[static_cast<std::size_t>(i)] - c).squaredNorm() >
          (verts[static_cast<std::size_t>(far)] - c).squaredNorm()) {
        far = i;
      }
    }
    Vec3 e1 = verts[static_cast<std::size_t>(far)] - c;
    e1 -= n.dot(e1) * n;
    e1.normalize();
    const Vec3 e2 = n.cross(e1);
    std::vector<std::pair<double, int>> order;
    for (int i : cap) {
      const Vec3 r = verts[static_cast<std::size_t>(i)] - c;
      order.emplace_back(std::atan2(r.dot(e2), r.dot(e1)), i);
    }
    std::sort(order.begin(), order.end());
    std::vector<int> loop;
    for (const auto& o : order) loop.push_back(o.second);
    faces.push_back({std::move(loop), neighbor, n, d});
  }

  // Drop vertices no face uses.
  std::vector<int> used(verts.size(), -1);
  std::vector<Vec3> compact;
  for (auto& f : faces) {
    for (int& v : f.vertices) {
      if (used[static_cast<std::size_t>(v)] < 0) {
        used[static_cast<std::size_t>(v)] = static_cast<int>(compact.size());
        compact.push_back(verts[static_cast<std::size_t>(v)]);
      }
      v = used[static_cast<std::size_t>(v)];
    }
  }
  p.verts = std::move(compact);
  p.faces = std::move(faces);
  return true;
}

/// Removes consecutive repeats in a cyclic loop.
void squeeze_loop(std::vector<int>& loop) {
  std::vector<int> out;
  for (int v : loop) {
    if (out.empty() || out.back() != v) out.push_back(v);
  }
  while (out.size() > 1 && out.front() == out.back()) out.pop_back();
  loop = std::move(out);
}

/// Merges vertices closer than tol and drops faces left with < 3 vertices.
void merge_close_vertices(VoronoiCell& cell, double tol) {
  const std::size_t m = cell.vertices.size();
  std::vector<int> rep(m);
  std::iota(rep.begin(), rep.end(), 0);
  const double tol2 = tol * tol;
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < i; ++j) {
      if (rep[j] == static_cast<int>(j) && (cell.vertices[i] - cell.vertices[j]).squaredNorm() <= tol2) {
        rep[i] = static_cast<int>(j);
        break;
      }
    }
  }
  std::vector<int> index(m, -1);
  std::vector<Vec3> verts;
  for (std::size_t i = 0; i < m; ++i) {
    if (rep[i] == static_cast<int>(i)) {
      index[i] = static_cast<int>(verts.size());
      verts.push_back(cell.vertices[i]);
    }
  }
  std::vector<VoronoiFace> faces;
  for (auto& f : cell.faces) {
    for (int& v : f.vertices) v = index[static_cast<std::size_t>(rep[static_cast<std::size_t>(v)])];
    squeeze_loop(f.vertices);
    if (f.vertices.size() >= 3) faces.push_back(std::move(f));
  }
  cell.vertices = std::move(verts);
  cell.faces = std::move(faces);
}

double loop_volume_term(const std::vector<Vec3>& pts, const std::vector<int>& loop, const Vec3& ref) {
  double vol = 0.0;
  const Vec3& a = pts[static_cast<std::size_t>(loop[0])];
  for (std::size_t k = 1; k + 1 < loop.size(); ++k) {
    const Vec3& b = pts[static_cast<std::size_t>(loop[k])];
    const Vec3& c = pts[static_cast<std::size_t>(loop[k + 1])];
    vol += (a - ref).dot((b - ref).cross(c - ref));
  }
  return vol / 6.0;
}

struct UnionFind {
  std::vector<int> parent;
  explicit UnionFind(std::size_t n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
  int find(int a) {
    while (parent[static_cast<std::size_t>(a)] != a) {
      parent[static_cast<std::size_t>(a)] = parent[static_cast<std::size_t>(parent[static_cast<std::size_t>(a)])];
      a = parent[static_cast<std::size_t>(a)];
    }
    return a;
  }
  void unite(int a, int b) {
    a = find(a);
    b = find(b);
    if (a != b) parent[static_cast<std::size_t>(std::max(a, b))] = std::min(a, b);
  }
};

std::uint64_t pair_key(int a, int b) {
  const auto lo = static_cast<std::uint32_t>(std::min(a, b));
  const auto hi = static_cast<std::uint32_t>(std::max(a, b));
  return (static_cast<std::uint64_t>(lo) << 32) | hi;
}

std::vector<int> sorted_copy(std::vector<int> v) {
  std::sort(v.begin(), v.end());
  return v;
}

/// Inserts every pool vertex lying inside an edge of the loop, so that faces
/// meeting at degenerate vertices share the same vertex sequence.
void split_edges_at_vertices(std::vector<int>& loop, const PointIndex& pool, double tol) {
  std::vector<int> out;
  const std::size_t k = loop.size();
  std::vector<std::pair<double, int>> hits;
  for (std::size_t e = 0; e < k; ++e) {
    const int a = loop[e];
    const int b = loop[(e + 1) % k];
    out.push_back(a);
    const Vec3& pa = pool.point(a);
    const Vec3 ab = pool.point(b) - pa;
    const double len2 = ab.squaredNorm();
    if (len2 <= 0.0) continue;
    hits.clear();
    pool.for_each_within(pa + 0.5 * ab, 0.5 * std::sqrt(len2) + tol, [&](int w) {
      if (w == a || w == b) return;
      const Vec3 aw = pool.point(w) - pa;
      const double t = aw.dot(ab) / len2;
      if (t <= 0.0 || t >= 1.0) return;
      if ((aw - t * ab).norm() <= tol) hits.emplace_back(t, w);
    });
    std::sort(hits.begin(), hits.end());
    for (const auto& h : hits) out.push_back(h.second);
  }
  loop = std::move(out);
}

}  // namespace

double VoronoiCell::volume() const {
  double vol = 0.0;
  for (const auto& f : faces) vol += loop_volume_term(vertices, f.vertices, seed);
  return vol;
}

bool VoronoiCell::touches_boundary() const {
  return std::any_of(faces.begin(), faces.end(), [](const VoronoiFace& f) { return f.neighbor == kBoundaryNeighbor; });
}

bool VoronoiCell::contains(const Vec3& x, double tol) const {
  return std::all_of(faces.begin(), faces.end(),
                     [&](const VoronoiFace& f) { return f.normal.dot(x) - f.offset < -tol; });
}

VoronoiCell compute_cell(int seed_id, const PointIndex& seeds, const Eigen::AlignedBox3d& clip_box,
                         const VoronoiOptions& options) {
  const Vec3 s = seeds.point(seed_id);
  if (!clip_box.contains(s)) throw Error(ErrorCode::UnboundedCell, "compute_cell: seed outside clip box");
  const double scale = 0.5 * clip_box.sizes().maxCoeff();
  const double tol = options.on_plane_rel * scale;

  Poly poly = box_poly(clip_box);
  std::vector<int> used{seed_id};
  const auto apply = [&](int other) {
    const Vec3 c = seeds.point(other);
    const Vec3 diff = c - s;
    const double len = diff.norm();
    if (len <= tol) throw Error(ErrorCode::EmptyCell, "compute_cell: coincident seeds");
    const Vec3 n = diff / len;
    clip(poly, n, n.dot(0.5 * (s + c)), other, tol);
    used.push_back(other);
  };
  const auto max_vertex_dist = [&] {
    double r2 = 0.0;
    for (const Vec3& v : poly.verts) r2 = std::max(r2, (v - s).squaredNorm());
    return std::sqrt(r2);
  };

  VoronoiCell cell;
  cell.seed_id = seed_id;
  cell.seed = s;

  const std::size_t k = std::min(options.initial_neighbors + 1, seeds.size());
  const std::vector<Neighbor> cand = seeds.knn(s, k);
  for (const Neighbor& nb : cand) {
    if (nb.index == seed_id) continue;
    if (std::sqrt(nb.dist2) > 2.0 * max_vertex_dist()) {
      cell.security_radius_reached = true;
      break;
    }
    apply(nb.index);
  }
  if (k == seeds.size()) cell.security_radius_reached = true;

  if (!cell.security_radius_reached) {
    // Any seed strictly closer than s to a vertex must cut the cell.
    const double verify_tol = 4.0 * tol;
    std::vector<Neighbor> found;
    for (;;) {
      found.clear();
      for (const Vec3& x : poly.verts) {
        const double reach = std::max(0.0, (x - s).norm() - verify_tol);
        const Neighbor nb = seeds.nearest(x, seed_id, reach * reach);
        if (nb.index < 0) continue;
        if (std::find(used.begin(), used.end(), nb.index) != used.end()) continue;
        if (std::none_of(found.begin(), found.end(), [&](const Neighbor& f) { return f.index == nb.index; })) {
          found.push_back({nb.index, (seeds.point(nb.index) - s).squaredNorm()});
        }
      }
      if (found.empty()) break;
      std::sort(found.begin(), found.end(), [](const Neighbor& a, const Neighbor& b) {
        return a.dist2 < b.dist2 || (a.dist2 == b.dist2 && a.index < b.index);
      });
      for (const Neighbor& f : found) {
        apply(f.index);
        ++cell.verification_clips;
      }
    }
  }

  cell.vertices = std::move(poly.verts);
  cell.faces = std::move(poly.faces);
  merge_close_vertices(cell, options.merge_rel * scale);
  if (cell.faces.size() < 4) throw Error(ErrorCode::DegenerateCell, "compute_cell: fewer than four faces");
  return cell;
}

std::vector<int> VolumeMesh::oriented_face(int face, int seed_id) const {
  const MeshFace& f = faces[static_cast<std::size_t>(face)];
  if (f.seed_a == seed_id) return f.vertices;
  return std::vector<int>(f.vertices.rbegin(), f.vertices.rend());
}

double VolumeMesh::cell_volume(const MeshCell& cell) const {
  if (cell.faces.empty()) return 0.0;
  const Vec3 ref = vertices[static_cast<std::size_t>(faces[static_cast<std::size_t>(cell.faces[0])].vertices[0])];
  double vol = 0.0;
  for (int f : cell.faces) vol += loop_volume_term(vertices, oriented_face(f, cell.seed_id), ref);
  return vol;
}

double VolumeMesh::total_volume() const {
  double vol = 0.0;
  for (const auto& c : cells) vol += cell_volume(c);
  return vol;
}

MeshResult compute_mesh(const std::vector<Seed>& seeds, const Eigen::AlignedBox3d& clip_box,
                        const VoronoiOptions& options) {
  std::vector<Vec3> positions;
  positions.reserve(seeds.size());
  for (std::size_t i = 0; i < seeds.size(); ++i) {
    if (seeds[i].id != static_cast<int>(i)) {
      throw Error(ErrorCode::InvalidArgument, "compute_mesh: seeds must be ordered by id");
    }
    positions.push_back(seeds[i].position);
  }
  const PointIndex index(positions);
  const double scale = 0.5 * clip_box.sizes().maxCoeff();
  const double weld = options.weld_rel * scale;

  MeshResult result;
  MeshStats& st = result.stats;
  const auto is_volume = [&](int id) { return id >= 0 && seeds[static_cast<std::size_t>(id)].kind != SeedKind::Upper; };

  std::vector<int> volume_ids;
  std::vector<int> upper_ids;
  for (const Seed& s : seeds) (s.kind == SeedKind::Upper ? upper_ids : volume_ids).push_back(s.id);

  std::vector<VoronoiCell> cells(volume_ids.size());
  parallel_for(volume_ids.size(), [&](std::size_t n) {
    cells[n] = compute_cell(volume_ids[n], index, clip_box, options);
  });

  // Weld vertices of all volume cells.
  std::vector<std::size_t> offset(cells.size() + 1, 0);
  for (std::size_t n = 0; n < cells.size(); ++n) offset[n + 1] = offset[n] + cells[n].vertices.size();
  UnionFind uf(offset.back());
  SpatialHash grid(std::max(weld, 1e-300) * 8.0);
  std::vector<Vec3> raw(offset.back());
  for (std::size_t n = 0; n < cells.size(); ++n) {
    for (std::size_t v = 0; v < cells[n].vertices.size(); ++v) raw[offset[n] + v] = cells[n].vertices[v];
  }
  for (std::size_t g = 0; g < raw.size(); ++g) {
    grid.for_each_candidate(raw[g], weld, [&](int other) {
      if ((raw[static_cast<std::size_t>(other)] - raw[g]).norm() <= weld) uf.unite(static_cast<int>(g), other);
    });
    grid.insert(static_cast<int>(g), raw[g]);
  }
  std::vector<int> welded(raw.size(), -1);
  VolumeMesh& mesh = result.mesh;
  for (std::size_t g = 0; g < raw.size(); ++g) {
    const auto root = static_cast<std::size_t>(uf.find(static_cast<int>(g)));
    if (welded[root] < 0) {
      welded[root] = static_cast<int>(mesh.vertices.size());
      mesh.vertices.push_back(raw[root]);
    }
    welded[g] = welded[root];
  }

  const PointIndex pool(mesh.vertices);
  std::unordered_map<std::uint64_t, int> face_of_pair;
  for (std::size_t n = 0; n < cells.size(); ++n) {
    const VoronoiCell& c = cells[n];
    ++st.cells_computed;
    if (c.security_radius_reached) ++st.security_radius_cells;
    st.verification_clips += static_cast<std::size_t>(c.verification_clips);
    if (c.touches_boundary()) ++st.bounded_volume_violations;
    MeshCell mc{c.seed_id, seeds[static_cast<std::size_t>(c.seed_id)].kind, {}};
    for (const VoronoiFace& f : c.faces) {
      std::vector<int> loop;
      for (int v : f.vertices) loop.push_back(welded[offset[n] + static_cast<std::size_t>(v)]);
      squeeze_loop(loop);
      if (loop.size() < 3) continue;
      split_edges_at_vertices(loop, pool, weld);
      if (f.neighbor >= 0 && !is_volume(f.neighbor)) {
        if (mc.kind == SeedKind::Interior) ++st.interior_upper_faces;
      }
      if (f.neighbor >= 0 && !is_volume(f.neighbor)) {
        face_of_pair.emplace(pair_key(c.seed_id, f.neighbor), static_cast<int>(mesh.faces.size()));
      } else if (is_volume(f.neighbor)) {
        const std::uint64_t key = pair_key(c.seed_id, f.neighbor);
        const auto it = face_of_pair.find(key);
        if (it != face_of_pair.end()) {
          ++st.internal_faces;
          const MeshFace& other = mesh.faces[static_cast<std::size_t>(it->second)];
          if (other.seed_b == c.seed_id && sorted_copy(other.vertices) == sorted_copy(loop)) {
            ++st.mirrored_faces;
            mc.faces.push_back(it->second);
            continue;
          }
        } else {
          face_of_pair.emplace(key, static_cast<int>(mesh.faces.size()));
        }
      }
      mc.faces.push_back(static_cast<int>(mesh.faces.size()));
      mesh.faces.push_back({std::move(loop), c.seed_id, f.neighbor});
    }
    mesh.cells.push_back(std::move(mc));
  }
  std::vector<VoronoiCell>().swap(cells);

  // Upper cells: compare each face toward a volume cell with the stored one.
  std::vector<std::size_t> agree(upper_ids.size(), 0);
  std::vector<std::size_t> total(upper_ids.size(), 0);
  std::vector<std::size_t> proven(upper_ids.size(), 0);
  std::vector<std::size_t> clips(upper_ids.size(), 0);
  const auto lookup_vertex = [&](const Vec3& x) {
    int found = -1;
    grid.for_each_candidate(x, weld, [&](int g) {
      if (found < 0 && (raw[static_cast<std::size_t>(g)] - x).norm() <= weld) found = welded[static_cast<std::size_t>(g)];
    });
    return found;
  };
  parallel_for(upper_ids.size(), [&](std::size_t n) {
    const VoronoiCell c = compute_cell(upper_ids[n], index, clip_box, options);
    proven[n] = c.security_radius_reached ? 1 : 0;
    clips[n] = static_cast<std::size_t>(c.verification_clips);
    for (const VoronoiFace& f : c.faces) {
      if (!is_volume(f.neighbor)) continue;
      std::vector<int> loop;
      bool all_found = true;
      for (int v : f.vertices) {
        const int w = lookup_vertex(c.vertices[static_cast<std::size_t>(v)]);
        if (w < 0) all_found = false;
        loop.push_back(w);
      }
      squeeze_loop(loop);
      if (loop.size() < 3) continue;
      if (all_found) split_edges_at_vertices(loop, pool, weld);
      ++total[n];
      const auto it = face_of_pair.find(pair_key(c.seed_id, f.neighbor));
      if (all_found && it != face_of_pair.end()) {
        const MeshFace& stored = mesh.faces[static_cast<std::size_t>(it->second)];
        if (sorted_copy(stored.vertices) == sorted_copy(loop)) ++agree[n];
      }
    }
  });
  st.cells_computed += upper_ids.size();
  for (std::size_t n = 0; n < upper_ids.size(); ++n) {
    st.upper_volume_faces += total[n];
    st.upper_volume_mirrored += agree[n];
    st.security_radius_cells += proven[n];
    st.verification_clips += clips[n];
  }
  for (const MeshFace& f : mesh.faces) {
    if (f.seed_b >= 0 && !is_volume(f.seed_b)) ++st.volume_upper_faces;
  }
  return result;
}

ReconSurface extract_surface(const VolumeMesh& mesh, const SampleSet& samples) {
  std::unordered_map<int, SeedKind> kind;
  for (const MeshCell& c : mesh.cells) kind.emplace(c.seed_id, c.kind);
  const auto kind_of = [&](int id) {
    const auto it = kind.find(id);
    return it == kind.end() ? SeedKind::Upper : it->second;
  };

  ReconSurface out;
  std::vector<int> remap(mesh.vertices.size(), -1);
  for (const MeshFace& f : mesh.faces) {
    if (f.seed_b < 0) continue;
    const SeedKind ka = kind_of(f.seed_a);
    const SeedKind kb = kind_of(f.seed_b);
    std::vector<int> loop;
    int lower = -1;
    int upper = -1;
    if (ka == SeedKind::Lower && kb == SeedKind::Upper) {
      loop = f.vertices;
      lower = f.seed_a;
      upper = f.seed_b;
    } else if (ka == SeedKind::Upper && kb == SeedKind::Lower) {
      loop.assign(f.vertices.rbegin(), f.vertices.rend());
      lower = f.seed_b;
      upper = f.seed_a;
    } else {
      continue;
    }
    for (int& v : loop) {
      if (remap[static_cast<std::size_t>(v)] < 0) {
        remap[static_cast<std::size_t>(v)] = static_cast<int>(out.vertices.size());
        out.vertices.push_back(mesh.vertices[static_cast<std::size_t>(v)]);
      }
      v = remap[static_cast<std::size_t>(v)];
    }
    out.facets.push_back({std::move(loop), upper, lower});
  }

  out.provenance.assign(out.vertices.size(), VertexProvenance::Steiner);
  out.sample_of_vertex.assign(out.vertices.size(), -1);
  if (!samples.samples.empty()) {
    const PointIndex index(samples.positions());
    parallel_for(out.vertices.size(), [&](std::size_t v) {
      const Neighbor nb = index.nearest(out.vertices[v]);
      const double limit = 1e-8 * samples.samples[static_cast<std::size_t>(nb.index)].lfs;
      if (std::sqrt(nb.dist2) <= limit) {
        out.provenance[v] = VertexProvenance::SamplePoint;
        out.sample_of_vertex[v] = nb.index;
      }
    });
  }
  return out;
}

}  // namespace vorocrust
