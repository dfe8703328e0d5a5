// Acceptance suite: prints one PASS/FAIL line per criterion and exits
// nonzero when a criterion fails that is not marked as expected.

#include <sys/wait.h>

#include <chrono>
#include <cstdio>
#include <iostream>
#include <random>
#include <sstream>

#include "vorocrust/parametric_bounds.hpp"
#include "vorocrust/pipeline.hpp"

using namespace vorocrust;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;
};

struct Line {
  int id;
  std::string label;
  Outcome outcome;
  bool expected_fail = false;
};

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), f, v);
  return buf;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

struct Run {
  std::string name;
  RunResult result;
  BallIndex idx;
  double seconds = 0.0;
};

Run make_run(const std::string& name, const SurfaceSpec& spec, double eps, std::optional<double> delta) {
  RunConfig cfg;
  cfg.surface = spec;
  cfg.eps = eps;
  cfg.delta = delta;
  cfg.rng_seed = 42;
  cfg.probe_count = 100'000;
  Run r;
  r.name = name;
  const auto t0 = std::chrono::steady_clock::now();
  r.result = run_pipeline(cfg);
  r.seconds = seconds_since(t0);
  r.idx = build_ball_index(r.result.artifacts.samples);
  std::cerr << name << ": " << fmt("%.1f", r.seconds) << " s\n";
  return r;
}

std::string serialize_run(const RunResult& run) {
  std::ostringstream out;
  write_samples(out, run.artifacts.samples);
  write_seeds(out, run.artifacts.seeds);
  write_mesh(out, run.artifacts.mesh);
  write_obj(out, run.surface);
  out << comparable(report_to_json(run.report)).dump();
  return out.str();
}

Outcome closed_surface(const Run& r, long euler, double time_limit) {
  const SurfaceTopology t = surface_topology(r.result.surface);
  Outcome o;
  o.pass = t.watertight && t.manifold && t.components == 1 && t.euler == euler && r.seconds < time_limit;
  o.detail = r.name + ": " + fmt("%.1f s", r.seconds) + ", watertight " + (t.watertight ? "yes" : "no") +
             ", manifold " + (t.manifold ? "yes" : "no") + ", components " + std::to_string(t.components) +
             ", euler " + std::to_string(t.euler);
  return o;
}

Outcome samples_are_vertices(const std::vector<const Run*>& runs) {
  Outcome o;
  for (const Run* r : runs) {
    const SampleSet& s = r->result.artifacts.samples;
    const PointIndex verts(r->result.surface.vertices);
    std::size_t missing = 0;
    for (const SurfaceSample& p : s.samples) {
      if (std::sqrt(verts.nearest(p.position).dist2) > 1e-8 * p.lfs) ++missing;
    }
    o.pass = o.pass && missing == 0;
    o.detail += r->name + ": " + std::to_string(s.size() - missing) + "/" + std::to_string(s.size()) + "  ";
  }
  return o;
}

Outcome disk_caps(const std::vector<const Run*>& runs) {
  Outcome o;
  for (const Run* r : runs) {
    const RunArtifacts& a = r->result.artifacts;
    const auto caps = verify_disk_caps(r->idx, a.samples, a.spec, exposed_guides(r->idx, a.spec));
    const auto ok = std::count_if(caps.begin(), caps.end(), [](const DiskCapResult& c) { return c.ok && c.pole_ok; });
    o.pass = o.pass && static_cast<std::size_t>(ok) == caps.size();
    o.detail += r->name + ": " + std::to_string(ok) + "/" + std::to_string(caps.size()) + "  ";
  }
  return o;
}

Outcome elevation(const std::vector<const Run*>& runs) {
  Outcome o;
  for (const Run* r : runs) {
    const RunArtifacts& a = r->result.artifacts;
    const double eps = a.samples.eps;
    const double bound = std::asin(0.5 - 5 * eps + 2 * eps * eps * eps);
    const auto by_ball = seeds_by_ball(r->idx, a.seeds);
    std::size_t violations = 0;
    double worst = kPi;
    for (std::size_t i = 0; i < by_ball.size(); ++i) {
      const SurfaceSample& p = a.samples.samples[i];
      for (int k : by_ball[i]) {
        const Vec3 d = a.seeds[static_cast<std::size_t>(k)].position - p.position;
        const double angle = std::asin(std::min(1.0, std::abs(p.normal.dot(d)) / d.norm()));
        worst = std::min(worst, angle);
        if (angle < bound) ++violations;
      }
    }
    o.pass = o.pass && violations == 0;
    o.detail += r->name + ": min " + fmt("%.2f", degrees(worst)) + " deg >= " + fmt("%.2f", degrees(bound)) +
                ", " + std::to_string(violations) + " violations  ";
  }
  return o;
}

Outcome distance(const Run& r) {
  const SurfaceDistance& d = r.result.report.distance;
  const double eps = r.result.artifacts.samples.eps;
  const double bound = 30.52 * eps * eps;
  Outcome o;
  o.pass = d.max_surface_to_recon <= bound && d.max_recon_to_surface <= bound && d.surface_probes >= 100'000 &&
           d.recon_probes >= 100'000 && r.seconds < 600.0;
  o.detail = r.name + ": M->recon " + fmt("%.3g", d.max_surface_to_recon) + ", recon->M " +
             fmt("%.3g", d.max_recon_to_surface) + " <= " + fmt("%.6f", bound) + ", probes " +
             std::to_string(d.surface_probes) + "/" + std::to_string(d.recon_probes) + ", " + fmt("%.0f s", r.seconds);
  return o;
}

Outcome sandwich(const std::vector<const Run*>& runs) {
  Outcome o;
  for (const Run* r : runs) {
    const SandwichResult s = verify_sandwich(r->result.surface, r->idx, 10);
    o.pass = o.pass && s.ok && s.outside == 0;
    o.detail += r->name + ": " + std::to_string(s.points - s.outside) + "/" + std::to_string(s.points) + "  ";
  }
  return o;
}

struct FatnessOutcome {
  Outcome interior;
  bool boundary_defined = true;
  bool boundary_pass = true;
  std::string boundary_detail;
};

FatnessOutcome fatness(const std::vector<const Run*>& runs) {
  FatnessOutcome out;
  for (const Run* r : runs) {
    const RunArtifacts& a = r->result.artifacts;
    const double delta = a.samples.delta;
    const ParametricBounds b = parametric_bounds(a.samples.eps, a.samples.sigma, delta);
    const FatnessSummary f = verify_fatness(a.mesh, a.seeds, ExtendedLfs(a.samples));
    const double interior = 8 * std::sqrt(3.0) * (1 + delta) / (1 - 3 * delta);
    out.interior.pass = out.interior.pass && f.max_interior <= interior;
    out.interior.detail += r->name + ": interior max " + fmt("%.2f", f.max_interior) + " <= " + fmt("%.2f", interior);
    out.interior.detail += ", boundary max " + fmt("%.2f", f.max_boundary);
    if (b.boundary_fatness) {
      out.boundary_pass = out.boundary_pass && f.max_boundary <= *b.boundary_fatness;
      out.interior.detail += " <= " + fmt("%.2f", *b.boundary_fatness) + "  ";
    } else {
      out.boundary_defined = false;
      out.boundary_pass = false;
      out.interior.detail += " (bound undefined, alpha2 = " + fmt("%.2f", b.alpha2) + " >= 1/4)  ";
    }
  }
  return out;
}

Outcome seed_count(const std::vector<const Run*>& runs) {
  Outcome o;
  for (const Run* r : runs) {
    const RunArtifacts& a = r->result.artifacts;
    const LfsIntegral in = integrate_inverse_cubed_lfs(a.spec, ExtendedLfs(a.samples), 1'000'000, 42);
    const double eps = a.samples.eps;
    const double bound = 18 * std::sqrt(3.0) / kPi * std::pow(eps, -3) * in.value;
    const auto count = std::count_if(a.seeds.begin(), a.seeds.end(), [](const Seed& s) { return s.kind == SeedKind::Interior; });
    o.pass = o.pass && static_cast<double>(count) <= bound && in.relative_ci <= 0.02;
    o.detail += r->name + ": " + std::to_string(count) + " <= " + fmt("%.0f", bound) + " (CI " +
                fmt("%.2f%%", 100 * in.relative_ci) + ")  ";
  }
  return o;
}

Outcome octree_bands(const std::vector<const Run*>& runs) {
  Outcome o;
  std::mt19937_64 rng(42);
  for (const Run* r : runs) {
    const SampleSet& s = r->result.artifacts.samples;
    const double d = s.delta;
    const Octree t = build_octree(s, d, default_root_box(s));
    const BoxBalance bal = verify_box_balance(t);
    const ExtendedLfs field(s);
    const std::vector<int> leaves = t.leaves();
    std::size_t bad = 0;
    for (int leaf : leaves) {
      const OctreeBox& b = t.box(leaf);
      const double ratio = b.radius() / field(b.center);
      if (ratio < d / (2 + d) || ratio > d) ++bad;
    }
    std::uniform_int_distribution<std::size_t> pick(0, leaves.size() - 1);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    std::size_t tested = 0;
    while (tested < 10'000) {
      const OctreeBox& b = t.box(leaves[pick(rng)]);
      const Vec3 p = b.center + b.half_width * Vec3(u(rng), u(rng), u(rng));
      if (signed_side(r->result.artifacts.spec, p) != Side::Inside) continue;
      ++tested;
      const double ratio = b.radius() / field(p);
      if (ratio < d / (2 * (1 + d)) || ratio > d / (1 - d)) ++bad;
    }
    o.pass = o.pass && bal.ok && bal.worst_ratio <= 2.0 && bad == 0;
    o.detail += r->name + ": worst ratio " + fmt("%.0f", bal.worst_ratio) + ", " + std::to_string(leaves.size()) +
                " leaves, band violations " + std::to_string(bad) + "  ";
  }
  return o;
}

/// Point location by clipped cells against brute-force nearest seed.
Outcome oracle_queries(const std::vector<Vec3>& seeds, const std::vector<int>& cells_to_build,
                       const Eigen::AlignedBox3d& box, const Eigen::AlignedBox3d& query_box, std::uint64_t rng_seed,
                       const std::string& name) {
  const PointIndex index(seeds);
  std::vector<VoronoiCell> cells(seeds.size());
  std::vector<Eigen::AlignedBox3d> bounds(seeds.size());
  for (int i : cells_to_build) {
    cells[static_cast<std::size_t>(i)] = compute_cell(i, index, box);
    Eigen::AlignedBox3d bb;
    for (const Vec3& v : cells[static_cast<std::size_t>(i)].vertices) bb.extend(v);
    bounds[static_cast<std::size_t>(i)] = bb;
  }
  const PointIndex centers(seeds);
  double max_reach = 0.0;
  for (int i : cells_to_build) {
    for (const Vec3& v : cells[static_cast<std::size_t>(i)].vertices) {
      max_reach = std::max(max_reach, (v - seeds[static_cast<std::size_t>(i)]).norm());
    }
  }
  std::mt19937_64 rng(rng_seed);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::size_t tested = 0;
  std::size_t agree = 0;
  std::size_t skipped = 0;
  while (tested < 10'000) {
    const Vec3 q = query_box.min() + query_box.sizes().cwiseProduct(Vec3(u(rng), u(rng), u(rng)));
    double d1 = std::numeric_limits<double>::infinity();
    double d2 = d1;
    int nearest = -1;
    for (int i = 0; i < static_cast<int>(seeds.size()); ++i) {
      const double d = (seeds[static_cast<std::size_t>(i)] - q).norm();
      if (d < d1) {
        d2 = d1;
        d1 = d;
        nearest = i;
      } else if (d < d2) {
        d2 = d;
      }
    }
    if (d2 - d1 < 1e-9) {
      ++skipped;
      continue;
    }
    ++tested;
    int hits = 0;
    int found = -1;
    for (int i : centers.within(q, max_reach)) {
      if (!bounds[static_cast<std::size_t>(i)].contains(q)) continue;
      if (cells[static_cast<std::size_t>(i)].contains(q, 1e-12)) {
        ++hits;
        found = i;
      }
    }
    if (hits == 1 && found == nearest) ++agree;
  }
  Outcome o;
  o.pass = agree == tested;
  o.detail = name + ": " + std::to_string(agree) + "/" + std::to_string(tested) + " (" + std::to_string(skipped) +
             " in tie band)  ";
  return o;
}

Outcome oracle_equivalence(const Run& sphere) {
  std::mt19937_64 rng(200);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::vector<Vec3> random;
  for (int i = 0; i < 200; ++i) random.emplace_back(u(rng), u(rng), u(rng));
  std::vector<int> all(200);
  std::iota(all.begin(), all.end(), 0);
  const Eigen::AlignedBox3d box(Vec3::Constant(-1.5), Vec3::Constant(1.5));
  Outcome a = oracle_queries(random, all, box, box, 1, "200 random seeds");

  const RunArtifacts& art = sphere.result.artifacts;
  std::vector<Vec3> seeds;
  for (const Seed& s : art.seeds) seeds.push_back(s.position);
  std::vector<int> every(seeds.size());
  std::iota(every.begin(), every.end(), 0);
  const Eigen::AlignedBox3d root = default_root_box(art.samples);
  const Outcome b = oracle_queries(seeds, every, root, root, 2, sphere.name);
  a.pass = a.pass && b.pass;
  a.detail += b.detail;
  return a;
}

Outcome volume(const Run& r) {
  const double eps = r.result.artifacts.samples.eps;
  const double exact = 4.0 * kPi / 3.0;
  const double rel = std::abs(r.result.artifacts.mesh.total_volume() - exact) / exact;
  const double bound = 3 * 30.52 * eps * eps;
  Outcome o;
  o.pass = rel <= bound;
  o.detail = r.name + ": relative error " + fmt("%.3g", rel) + " <= " + fmt("%.4f", bound);
  return o;
}

Outcome unit_suite_and_determinism(const Run& sphere) {
  Outcome o;
  const std::string cmd = std::string(VOROCRUST_UNIT_TESTS) + " --minimal >/dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  const bool unit_ok = WIFEXITED(status) && WEXITSTATUS(status) == 0;
  const Run again = make_run(sphere.name + " (repeat)", sphere.result.artifacts.spec, 0.05, 0.1);
  const bool same = serialize_run(again.result) == serialize_run(sphere.result);
  o.pass = unit_ok && same;
  o.detail = std::string("unit suite ") + (unit_ok ? "passed" : "FAILED") + ", repeat run " +
             (same ? "byte-identical" : "DIFFERS");
  return o;
}

}  // namespace

int main() {
  std::vector<Line> lines;
  const auto t0 = std::chrono::steady_clock::now();
  try {
    const Run sphere = make_run("sphere eps 0.05", SurfaceSpec::sphere(1.0), 0.05, 0.1);
    const Run torus = make_run("torus eps 0.05", SurfaceSpec::torus(1.0, 0.3), 0.05, std::nullopt);
    const std::vector<const Run*> coarse{&sphere, &torus};

    lines.push_back({1, "sphere run closed, manifold, one component, euler 2, under 120 s", closed_surface(sphere, 2, 120.0)});
    lines.push_back({2, "torus run closed, manifold, euler 0", closed_surface(torus, 0, 1e9)});
    lines.push_back({3, "every sample is a reconstruction vertex", samples_are_vertices(coarse)});
    lines.push_back({4, "every ball has uncovered poles and one cap per side", disk_caps(coarse)});

    const Run fine = make_run("sphere eps 0.02", SurfaceSpec::sphere(1.0), 0.02, std::nullopt);
    const std::vector<const Run*> all{&sphere, &torus, &fine};

    lines.push_back({5, "surface seed elevation above the tangent plane", elevation(all)});
    lines.push_back({6, "two-sided distance within h_t eps^2 at eps 0.02", distance(fine)});
    lines.push_back({7, "reconstruction inside the union of balls", sandwich(all)});
    const FatnessOutcome fat = fatness(all);
    Line l8{8, "interior and boundary cell fatness under their closed forms", fat.interior};
    l8.outcome.pass = fat.interior.pass && fat.boundary_pass;
    // Boundary closed form is undefined at every desk-scale eps.
    l8.expected_fail = fat.interior.pass && !fat.boundary_defined;
    lines.push_back(l8);
    lines.push_back({9, "interior seed count under the lfs^-3 integral bound", seed_count(all)});
    lines.push_back({10, "octree balance and leaf radius bands", octree_bands(all)});
    lines.push_back({11, "clipped cells agree with brute-force nearest seed", oracle_equivalence(sphere)});
    lines.push_back({12, "volume conservation at eps 0.02", volume(fine)});
    lines.push_back({13, "unit suite and byte-identical repeat run", unit_suite_and_determinism(sphere)});
  } catch (const std::exception& e) {
    std::cout << "FAIL  acceptance aborted: " << e.what() << '\n';
    return 1;
  }

  int unexpected = 0;
  for (const Line& l : lines) {
    const char* status = l.outcome.pass ? "PASS" : "FAIL";
    std::cout << status << "  " << (l.id < 10 ? " " : "") << l.id << "  " << l.label;
    if (!l.outcome.pass && l.expected_fail) std::cout << "  [expected failure]";
    std::cout << "\n        " << l.outcome.detail << '\n';
    if (!l.outcome.pass && !l.expected_fail) ++unexpected;
  }
  std::cout << lines.size() << " criteria, " << unexpected << " unexpected failures, "
            << fmt("%.0f s", seconds_since(t0)) << '\n';
  return unexpected == 0 ? 0 : 1;
}
