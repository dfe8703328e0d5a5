#include "vorocrust/pipeline.hpp"

#include <chrono>
#include <filesystem>
#include <ostream>
#include <sstream>

namespace vorocrust {

namespace {

class StageTimer {
 public:
  StageTimer(std::vector<std::pair<std::string, double>>& timing, std::ostream* log)
      : timing_(timing), log_(log) {}

  template <typename Fn>
  auto run(const std::string& stage, Fn&& fn) {
    const auto t0 = std::chrono::steady_clock::now();
    try {
      if constexpr (std::is_void_v<decltype(fn())>) {
        fn();
        finish(stage, t0);
      } else {
        auto out = fn();
        finish(stage, t0);
        return out;
      }
    } catch (const Error& e) {
      throw Error(e.code(), "stage '" + stage + "': " + e.what());
    }
  }

 private:
  void finish(const std::string& stage, std::chrono::steady_clock::time_point t0) {
    const double ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
    timing_.emplace_back(stage, ms);
    if (log_) *log_ << stage << ": " << ms / 1000.0 << " s\n";
  }

  std::vector<std::pair<std::string, double>>& timing_;
  std::ostream* log_;
};

std::string serialize(const auto& write) {
  std::ostringstream out;
  write(out);
  return out.str();
}

}  // namespace

void validate(const RunConfig& cfg) {
  if (!(cfg.eps > 0.0 && cfg.eps <= 0.1)) throw Error(ErrorCode::InvalidArgument, "eps must be in (0, 0.1]");
  if (!(cfg.sigma >= 0.5 && cfg.sigma <= 1.0)) throw Error(ErrorCode::InvalidArgument, "sigma must be in [0.5, 1]");
  if (cfg.delta && !(*cfg.delta > 0.0 && *cfg.delta < 1.0 / 3.0)) {
    throw Error(ErrorCode::InvalidArgument, "delta must be in (0, 1/3)");
  }
  if (!cfg.delta && !(2.0 * cfg.eps < 1.0 / 3.0)) {
    throw Error(ErrorCode::InvalidArgument, "default delta = 2 eps must be below 1/3");
  }
  if (cfg.probe_count == 0) throw Error(ErrorCode::InvalidArgument, "probe count must be positive");
}

RunResult run_pipeline(const RunConfig& cfg, std::ostream* log) {
  validate(cfg);
  RunResult run;
  std::vector<std::pair<std::string, double>> timing;
  StageTimer stage(timing, log);
  RunArtifacts& art = run.artifacts;
  art.spec = cfg.surface;

  SamplerOptions so;
  so.delta = cfg.delta.value_or(0.0);
  so.max_samples = cfg.max_samples;
  art.samples = stage.run("sample", [&] { return generate_sample(cfg.surface, cfg.eps, cfg.sigma, cfg.rng_seed, so); });
  if (log) *log << "  " << art.samples.size() << " samples\n";

  const BallIndex idx = stage.run("balls", [&] { return build_ball_index(art.samples); });
  SurfaceSeeds surface = stage.run("seeds", [&] {
    return place_surface_seeds(exposed_guides(idx, cfg.surface), seed_merge_distance(idx));
  });
  art.seeds = surface.upper;
  art.seeds.insert(art.seeds.end(), surface.lower.begin(), surface.lower.end());
  if (log) *log << "  " << surface.upper.size() << " upper, " << surface.lower.size() << " lower seeds\n";

  const Eigen::AlignedBox3d root = default_root_box(art.samples);
  if (!cfg.skip_interior) {
    Octree tree = stage.run("octree", [&] { return build_octree(art.samples, art.samples.delta, root); });
    mark_surface_seeds(tree, art.seeds);
    InteriorOptions io;
    io.allow_seeds_in_union = cfg.allow_seeds_in_union;
    std::vector<Seed> interior = stage.run("interior", [&] { return place_interior_seeds(tree, idx, cfg.surface, io); });
    for (Seed& s : interior) {
      s.id = static_cast<int>(art.seeds.size());
      art.seeds.push_back(s);
    }
    if (log) *log << "  " << interior.size() << " interior seeds\n";
  }

  MeshResult mesh = stage.run("voronoi", [&] { return compute_mesh(art.seeds, root); });
  art.mesh = std::move(mesh.mesh);
  run.mesh_stats = mesh.stats;
  if (log) {
    *log << "  " << art.mesh.cells.size() << " volume cells, " << mesh.stats.mirrored_faces << "/"
         << mesh.stats.internal_faces << " internal faces mirrored\n";
  }
  run.surface = stage.run("extract", [&] { return extract_surface(art.mesh, art.samples); });

  ReportParams params;
  params.surface = cfg.surface.to_string();
  params.eps = cfg.eps;
  params.sigma = cfg.sigma;
  params.delta = art.samples.delta;
  params.delta_overridden = cfg.delta.has_value() && *cfg.delta != 2.0 * cfg.eps;
  params.rng_seed = cfg.rng_seed;
  params.probe_count = cfg.probe_count;
  params.allow_seeds_in_union = cfg.allow_seeds_in_union;
  params.skip_interior = cfg.skip_interior;
  run.report = stage.run("verify", [&] { return build_report(art, params); });
  timing.insert(timing.end(), run.report.timing_ms.begin(), run.report.timing_ms.end());
  run.report.timing_ms = std::move(timing);
  return run;
}

RunPaths run_paths(const std::string& dir) {
  const std::filesystem::path d(dir);
  return {(d / "samples.vcsample").string(), (d / "seeds.vcseed").string(), (d / "mesh.vcmesh").string(),
          (d / "surface.obj").string(), (d / "report.json").string()};
}

void write_run(const std::string& dir, const RunResult& run) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw Error(ErrorCode::Io, "cannot create " + dir + ": " + ec.message());
  const RunPaths p = run_paths(dir);
  const RunArtifacts& a = run.artifacts;
  save_text(p.samples, serialize([&](std::ostream& o) { write_samples(o, a.samples); }));
  save_text(p.seeds, serialize([&](std::ostream& o) { write_seeds(o, a.seeds); }));
  save_text(p.mesh, serialize([&](std::ostream& o) { write_mesh(o, a.mesh); }));
  save_text(p.surface, serialize([&](std::ostream& o) { write_obj(o, run.surface); }));
  save_text(p.report, report_to_json(run.report).dump(2) + "\n");
}

nlohmann::json comparable(nlohmann::json report) {
  report.erase("timing_ms");
  return report;
}

VerifyOutcome verify_artifacts(const RunPaths& paths) {
  RunArtifacts art;
  {
    std::istringstream in(load_text(paths.samples));
    art.samples = read_samples(in, paths.samples);
  }
  {
    std::istringstream in(load_text(paths.seeds));
    art.seeds = read_seeds(in, paths.seeds);
  }
  {
    std::istringstream in(load_text(paths.mesh));
    art.mesh = read_mesh(in, paths.mesh);
  }
  const auto check_seed = [&](int id) {
    if (id >= static_cast<int>(art.seeds.size())) {
      throw Error(ErrorCode::Parse, paths.mesh + ": seed id " + std::to_string(id) + " not in " + paths.seeds);
    }
  };
  for (const MeshFace& f : art.mesh.faces) {
    check_seed(f.seed_a);
    check_seed(f.seed_b);
  }
  for (const MeshCell& c : art.mesh.cells) check_seed(c.seed_id);
  for (const Seed& s : art.seeds) {
    for (int b : s.triple) {
      if (b >= static_cast<int>(art.samples.size())) {
        throw Error(ErrorCode::Parse, paths.seeds + ": sample index " + std::to_string(b) + " out of range");
      }
    }
  }

  nlohmann::json stored;
  try {
    stored = nlohmann::json::parse(load_text(paths.report));
  } catch (const nlohmann::json::parse_error& e) {
    throw Error(ErrorCode::Parse, paths.report + ": " + e.what());
  }
  if (!stored.is_object() || !stored.contains("params")) {
    throw Error(ErrorCode::Parse, paths.report + ": missing params");
  }
  const ReportParams params = params_from_json(stored["params"]);
  try {
    art.spec = SurfaceSpec::parse(params.surface);
  } catch (const Error& e) {
    throw Error(ErrorCode::Parse, paths.report + ": " + e.what());
  }

  VerifyOutcome out;
  out.report = build_report(art, params);
  const nlohmann::json fresh = comparable(report_to_json(out.report));
  const nlohmann::json old = comparable(stored);
  out.report_matches = fresh == old;
  if (!out.report_matches) {
    out.difference = "report differs from recomputation";
    const auto& fc = fresh["checks"];
    const auto& oc = old.contains("checks") ? old["checks"] : nlohmann::json::array();
    for (std::size_t i = 0; i < fc.size(); ++i) {
      if (i >= oc.size() || fc[i] != oc[i]) {
        out.difference = "check '" + fc[i]["name"].get<std::string>() + "' differs from recomputation";
        break;
      }
    }
  }
  const ReconSurface recon = extract_surface(art.mesh, art.samples);
  out.surface_matches = serialize([&](std::ostream& o) { write_obj(o, recon); }) == load_text(paths.surface);
  if (!out.surface_matches && out.difference.empty()) out.difference = "surface differs from the mesh";
  return out;
}

}  // namespace vorocrust
