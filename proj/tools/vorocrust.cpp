// Command line front end: gen, verify and report.

#include <cstdio>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "vorocrust/parallel.hpp"
#include "vorocrust/pipeline.hpp"

namespace {

using namespace vorocrust;

constexpr int kExitPass = 0;
constexpr int kExitCheckFail = 1;
constexpr int kExitUsage = 2;
constexpr int kExitIo = 3;

int exit_code_for(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidArgument:
      return kExitUsage;
    case ErrorCode::Parse:
    case ErrorCode::Io:
      return kExitIo;
    default:
      return kExitCheckFail;
  }
}

void print_summary(const QualityReport& report, std::ostream& out) {
  for (const Check& c : report.checks) {
    const char* status = !c.pass ? "n/a " : (*c.pass ? "pass" : "FAIL");
    char line[256];
    std::snprintf(line, sizeof(line), "%-4s %-30s measured %-13s bound %-13s%s", status, c.name.c_str(),
                  c.measured ? std::to_string(*c.measured).c_str() : "-",
                  c.bound ? std::to_string(*c.bound).c_str() : "-", c.enforced ? "" : "  (not enforced)");
    out << line << '\n';
  }
  const SurfaceTopology& t = report.topology;
  out << "surface: V=" << t.vertices << " E=" << t.edges << " F=" << t.facets << " euler=" << t.euler
      << (t.genus ? " genus=" + std::to_string(*t.genus) : std::string()) << '\n';
  out << (report.passed() ? "all enforced checks pass" : "some enforced checks fail") << '\n';
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Conforming Voronoi meshing of a smooth closed surface from a union of balls"};
  app.require_subcommand(1);
  app.fallthrough();
  unsigned threads = 0;
  app.add_option("--threads", threads, "Worker threads (default: VOROCRUST_THREADS, else all cores)");

  RunConfig cfg;
  std::string surface_text;
  std::string out_dir;
  double delta = 0.0;
  auto* gen = app.add_subcommand("gen", "Run the pipeline and write samples, seeds, mesh, surface and report");
  gen->add_option("--surface", surface_text, "sphere:R | torus:R,r | ellipsoid:a,b,c")->required();
  gen->add_option("--eps", cfg.eps, "Sampling density in (0, 0.1]")->required();
  gen->add_option("--sigma", cfg.sigma, "Sparsity factor in [0.5, 1]")->capture_default_str();
  auto* delta_opt = gen->add_option("--delta", delta, "Ball radius factor (default 2 eps)");
  gen->add_option("--seed", cfg.rng_seed, "Random seed")->capture_default_str();
  gen->add_option("--probes", cfg.probe_count, "Verification probe count")->capture_default_str();
  gen->add_option("--max-samples", cfg.max_samples, "Sample budget")->capture_default_str();
  gen->add_option("--out-dir", out_dir, "Output directory")->required();
  gen->add_flag("--allow-seeds-in-union", cfg.allow_seeds_in_union, "Keep interior seeds inside the union of balls");
  gen->add_flag("--skip-interior", cfg.skip_interior, "Do not place interior seeds");

  std::string run_dir;
  bool as_json = false;
  auto* verify = app.add_subcommand("verify", "Recompute the report from a run directory and compare");
  verify->add_option("run-dir", run_dir, "Directory written by gen")->required();
  auto* report = app.add_subcommand("report", "Recompute and print the report of a run directory");
  report->add_option("run-dir", run_dir, "Directory written by gen")->required();
  report->add_flag("--json", as_json, "Print the JSON report");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }
  set_thread_count(threads);

  try {
    if (*gen) {
      try {
        cfg.surface = SurfaceSpec::parse(surface_text);
      } catch (const Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitUsage;
      }
      if (*delta_opt) cfg.delta = delta;
      try {
        validate(cfg);
      } catch (const Error& e) {
        std::cerr << "error: " << e.what() << '\n' << gen->help();
        return kExitUsage;
      }
      const RunResult run = run_pipeline(cfg, &std::cerr);
      write_run(out_dir, run);
      print_summary(run.report, std::cout);
      return run.report.passed() ? kExitPass : kExitCheckFail;
    }

    const VerifyOutcome v = verify_artifacts(run_paths(run_dir));
    if (*report) {
      if (as_json) {
        std::cout << report_to_json(v.report).dump(2) << '\n';
      } else {
        print_summary(v.report, std::cout);
      }
      return v.report.passed() ? kExitPass : kExitCheckFail;
    }
    print_summary(v.report, std::cout);
    if (!v.report_matches || !v.surface_matches) {
      std::cerr << "mismatch: " << v.difference << '\n';
      return kExitCheckFail;
    }
    std::cout << "stored report and surface match the artifacts\n";
    return v.report.passed() ? kExitPass : kExitCheckFail;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return exit_code_for(e.code());
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitCheckFail;
  }
}
