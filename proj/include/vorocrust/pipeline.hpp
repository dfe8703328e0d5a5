#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>

#include "vorocrust/io.hpp"

namespace vorocrust {

struct RunConfig {
  SurfaceSpec surface = SurfaceSpec::sphere(1.0);
  double eps = 0.05;
  double sigma = 0.75;
  std::optional<double> delta;  // 2 eps when empty
  std::uint64_t rng_seed = 42;
  std::size_t probe_count = 100'000;
  std::size_t max_samples = 4'000'000;
  bool allow_seeds_in_union = false;
  bool skip_interior = false;
};

/// Throws InvalidArgument for parameters outside the supported ranges.
void validate(const RunConfig& cfg);

struct RunResult {
  RunArtifacts artifacts;
  ReconSurface surface;
  MeshStats mesh_stats;
  QualityReport report;
};

/// Sample, balls, seeds, octree, Voronoi, extraction and verification.
/// Stage failures are rethrown as Error with the stage named in the message.
/// Progress lines go to `log` when given.
RunResult run_pipeline(const RunConfig& cfg, std::ostream* log = nullptr);

struct RunPaths {
  std::string samples;
  std::string seeds;
  std::string mesh;
  std::string surface;
  std::string report;
};

RunPaths run_paths(const std::string& dir);

/// Creates the directory and writes the five artifacts.
void write_run(const std::string& dir, const RunResult& run);

struct VerifyOutcome {
  QualityReport report;        // recomputed from the artifacts
  bool report_matches = false; // stored report equals the recomputed one, timing aside
  bool surface_matches = false;
  std::string difference;      // first mismatch, empty when both match
};

/// Reads the artifacts, recomputes the report and compares it with the stored one.
VerifyOutcome verify_artifacts(const RunPaths& paths);

/// Report JSON without timing, as compared by verify_artifacts.
nlohmann::json comparable(nlohmann::json report);

}  // namespace vorocrust
