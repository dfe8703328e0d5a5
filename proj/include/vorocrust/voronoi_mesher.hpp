#pragma once

#include <vector>

#include "vorocrust/ball_union.hpp"
#include "vorocrust/point_index.hpp"

namespace vorocrust {

inline constexpr int kBoundaryNeighbor = -1;

struct VoronoiFace {
  std::vector<int> vertices;  // counter-clockwise seen from outside
  int neighbor;               // seed id, or kBoundaryNeighbor on the clip box
  Vec3 normal;                // outward unit normal of the supporting plane
  double offset;              // plane: normal . x = offset
};

struct VoronoiCell {
  int seed_id = -1;
  Vec3 seed = Vec3::Zero();
  std::vector<Vec3> vertices;
  std::vector<VoronoiFace> faces;
  /// How termination was established.
  bool security_radius_reached = false;
  int verification_clips = 0;

  double volume() const;
  bool touches_boundary() const;
  /// Strict interior test against every face plane with band tol.
  bool contains(const Vec3& x, double tol) const;
};

struct VoronoiOptions {
  std::size_t initial_neighbors = 24;
  /// Tolerances relative to the clip-box half-width: plane side tests,
  /// merging within one cell, and welding across cells.
  double on_plane_rel = 1e-12;
  double merge_rel = 1e-11;
  double weld_rel = 1e-8;
};

/// Voronoi cell of seeds[seed_id] within clip_box, by incremental half-space
/// clipping against seeds in increasing distance. Clipping stops at the
/// security radius (next candidate farther than twice the farthest vertex);
/// otherwise every vertex is checked against its nearest seed and any strictly
/// closer seed is clipped until none remains.
VoronoiCell compute_cell(int seed_id, const PointIndex& seeds, const Eigen::AlignedBox3d& clip_box,
                         const VoronoiOptions& options = {});

struct MeshFace {
  std::vector<int> vertices;  // oriented outward from seed_a's cell
  int seed_a;
  int seed_b;  // kBoundaryNeighbor on the clip box
};

struct MeshCell {
  int seed_id;
  SeedKind kind;
  std::vector<int> faces;
};

/// Lower and interior cells sharing a welded vertex pool. A face between two
/// volume cells is stored once when both cells agree on it.
struct VolumeMesh {
  std::vector<Vec3> vertices;
  std::vector<MeshFace> faces;
  std::vector<MeshCell> cells;

  /// Face vertex loop oriented outward from the given cell.
  std::vector<int> oriented_face(int face, int seed_id) const;
  double cell_volume(const MeshCell& cell) const;
  double total_volume() const;
};

struct MeshStats {
  std::size_t cells_computed = 0;
  std::size_t security_radius_cells = 0;
  std::size_t verification_clips = 0;
  std::size_t internal_faces = 0;         // faces between two volume cells
  std::size_t mirrored_faces = 0;         // of which both cells agree
  std::size_t volume_upper_faces = 0;     // stored faces toward an upper cell
  std::size_t upper_volume_faces = 0;     // upper-cell faces toward a volume cell
  std::size_t upper_volume_mirrored = 0;  // of which a stored face agrees
  std::size_t interior_upper_faces = 0;   // faces between interior and upper cells
  std::size_t bounded_volume_violations = 0;  // volume cells touching the clip box
};

struct MeshResult {
  VolumeMesh mesh;
  MeshStats stats;
};

/// Computes all cells; keeps Lower and Interior cells as the volume mesh.
/// Upper cells are checked against the stored faces and then dropped.
/// Seeds must be ordered by id.
MeshResult compute_mesh(const std::vector<Seed>& seeds, const Eigen::AlignedBox3d& clip_box,
                        const VoronoiOptions& options = {});

enum class VertexProvenance { SamplePoint, Steiner };

struct ReconFacet {
  std::vector<int> vertices;  // outward: from the lower cell toward the upper cell
  int upper_seed;
  int lower_seed;
};

struct ReconSurface {
  std::vector<Vec3> vertices;
  std::vector<ReconFacet> facets;
  std::vector<VertexProvenance> provenance;
  std::vector<int> sample_of_vertex;  // matching sample index, -1 for Steiner
};

/// Faces of the volume mesh between a lower and an upper cell. A vertex is a
/// SamplePoint when within 1e-8 lfs of a sample.
ReconSurface extract_surface(const VolumeMesh& mesh, const SampleSet& samples);

}  // namespace vorocrust
