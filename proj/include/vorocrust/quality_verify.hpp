#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "vorocrust/interior_seeder.hpp"
#include "vorocrust/parametric_bounds.hpp"
#include "vorocrust/voronoi_mesher.hpp"

namespace vorocrust {

struct Plane {
  Vec3 normal;  // outward unit normal
  double offset;
};

/// A bounded convex cell as half-spaces normal . x <= offset plus its vertices.
struct CellGeometry {
  Vec3 seed = Vec3::Zero();
  std::vector<Vec3> vertices;
  std::vector<Plane> planes;
};

CellGeometry cell_geometry(const VoronoiCell& cell);

/// Planes of a mesh cell: bisectors for faces between seeds, the face's own
/// plane for clip-box faces.
CellGeometry cell_geometry(const VolumeMesh& mesh, const MeshCell& cell, const std::vector<Seed>& seeds);

/// Smallest ball enclosing the points (move-to-front Welzl).
Ball minimal_enclosing_ball(std::vector<Vec3> points);

struct InscribedBall {
  Vec3 center;
  double radius;
};

/// Largest ball inside the half-spaces: maximize t with normal . x + t <= offset.
/// `start` must lie inside. Throws DegenerateCell if the program is unbounded.
InscribedBall largest_inscribed_ball(const std::vector<Plane>& planes, const Vec3& start);

struct CellFatness {
  double outradius = 0.0;       // radius of the minimal enclosing ball of the vertices
  double seed_outradius = 0.0;  // max vertex distance to the seed, an upper bound
  double inradius = 0.0;
  double fatness = 0.0;         // outradius / inradius
};

CellFatness cell_fatness(const CellGeometry& cell);

struct FatnessSummary {
  std::size_t interior_cells = 0;
  std::size_t boundary_cells = 0;
  double max_interior = 0.0;
  double max_boundary = 0.0;
  int worst_interior_seed = -1;
  int worst_boundary_seed = -1;
  /// max over volume cells of seed_outradius / lfs_ext(seed)
  double max_outradius_ratio = 0.0;
};

/// Fatness of every Interior and Lower cell of the mesh.
FatnessSummary verify_fatness(const VolumeMesh& mesh, const std::vector<Seed>& seeds,
                              const ExtendedLfs& field);

struct SurfaceTopology {
  std::size_t vertices = 0;
  std::size_t edges = 0;
  std::size_t facets = 0;
  std::size_t open_edges = 0;         // edges with fewer than two facets
  std::size_t nonmanifold_edges = 0;  // edges with more than two facets
  std::size_t nonmanifold_vertices = 0;
  bool watertight = false;
  bool manifold = false;
  int components = 0;
  long euler = 0;
  std::optional<long> genus;  // for a single closed component
};

SurfaceTopology surface_topology(const ReconSurface& recon);

struct SurfaceDistance {
  double max_surface_to_recon = 0.0;  // over lfs at the probe
  double max_recon_to_surface = 0.0;  // over lfs at the projection
  std::size_t surface_probes = 0;
  std::size_t recon_probes = 0;
};

/// Two-sided distance between M and the reconstruction, relative to lfs.
SurfaceDistance two_sided_distance(const ReconSurface& recon, const SurfaceSpec& spec,
                                   std::size_t probe_count);

struct SandwichResult {
  bool ok = false;
  std::size_t points = 0;
  std::size_t outside = 0;
  /// max over tested points of min_i (|x - c_i| / r_i - 1), at most 0 when ok
  double worst_violation = 0.0;
};

/// Facet vertices plus `interior_probes` points inside each facet must lie
/// in the closed union of balls.
SandwichResult verify_sandwich(const ReconSurface& recon, const BallIndex& idx,
                               std::size_t interior_probes = 10);

struct GuideTriangleStats {
  std::size_t triangles = 0;
  double max_circumradius = 0.0;          // over delta lfs of the smallest-lfs vertex
  double max_normal_deviation = 0.0;      // radians, triangle normal vs that vertex
  double max_vertex_normal_variation = 0.0;
  double min_angle = kPi;
  double max_angle = 0.0;
  double max_edge_ratio = 1.0;
  double min_altitude = 1.0;              // altitude over its base, worst base
};

/// Quality of the triangles p_i p_j p_k of the exposed guide pairs.
GuideTriangleStats verify_guide_triangles(const std::vector<GuidePair>& guides, const SampleSet& s);

struct CrossingResult {
  bool ok = false;
  std::size_t probes = 0;
  std::size_t multi_crossing_count = 0;
  std::size_t missing_crossing_count = 0;
};

/// For probes x on M, counts crossings of the segment x +- reach lfs(x) n_x
/// with the reconstruction; ok iff every segment crosses exactly once.
CrossingResult normal_line_crossing(const ReconSurface& recon, const SurfaceSpec& spec,
                                    std::size_t probe_count, double reach);

/// Monte Carlo estimate of the integral of lfs_ext^-3 over the inside of M.
struct LfsIntegral {
  double value = 0.0;
  double relative_ci = 0.0;  // half-width of the 95% interval over value
  std::size_t points = 0;
};

LfsIntegral integrate_inverse_cubed_lfs(const SurfaceSpec& spec, const ExtendedLfs& field,
                                        std::size_t points, std::uint64_t rng_seed);

// Report -------------------------------------------------------------------

struct ReportParams {
  std::string surface;
  double eps = 0.0;
  double sigma = 0.0;
  double delta = 0.0;
  bool delta_overridden = false;
  std::uint64_t rng_seed = 0;
  std::size_t probe_count = 100'000;
  bool allow_seeds_in_union = false;
  bool skip_interior = false;
};

enum class Relation { AtMost, AtLeast, Equal };

struct Check {
  std::string name;
  std::string reference;  // the bounded property
  std::optional<double> measured;
  std::optional<double> bound;
  Relation relation = Relation::AtMost;
  std::optional<bool> pass;  // empty when the bound is undefined
  bool enforced = true;
  std::string note;
};

struct QualityReport {
  ReportParams params;
  std::vector<Check> checks;
  SurfaceTopology topology;
  SurfaceDistance distance;
  std::vector<std::pair<std::string, std::int64_t>> counts;
  std::vector<std::pair<std::string, double>> timing_ms;

  const Check* find(const std::string& name) const;
  /// True when every enforced check passes.
  bool passed() const;
};

/// What a run leaves behind; every report is computed from these alone.
struct RunArtifacts {
  SurfaceSpec spec = SurfaceSpec::sphere(1.0);
  SampleSet samples;
  std::vector<Seed> seeds;  // ordered by id
  VolumeMesh mesh;
};

QualityReport build_report(const RunArtifacts& artifacts, const ReportParams& params);

}  // namespace vorocrust
