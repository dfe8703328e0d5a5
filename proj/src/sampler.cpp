#include "vorocrust/sampler.hpp"

#include <cmath>
#include <numeric>
#include <random>

#include "vorocrust/parallel.hpp"
#include "vorocrust/point_index.hpp"
#include "vorocrust/spatial_hash.hpp"

namespace vorocrust {

namespace {

constexpr double kCandidateSpacing = 0.15;  // in units of eps * min lfs
constexpr std::size_t kMaxCandidates = 60'000'000;
constexpr int kMaxGapFillRounds = 64;

void check_parameters(double eps, double sigma) {
  if (!(eps > 0.0 && eps <= 0.1)) {
    throw Error(ErrorCode::InvalidArgument, "eps must lie in (0, 0.1]");
  }
  if (!(sigma >= 0.5 && sigma <= 1.0)) {
    throw Error(ErrorCode::InvalidArgument, "sigma must lie in [0.5, 1]");
  }
}

struct ProbeScan {
  std::vector<double> ratio;
  std::vector<double> lfs;
};

ProbeScan scan_probes(const std::vector<Vec3>& probes, const PointIndex& index, const SurfaceSpec& spec,
                      double eps) {
  ProbeScan out;
  out.ratio.assign(probes.size(), std::numeric_limits<double>::infinity());
  out.lfs.resize(probes.size());
  parallel_for(probes.size(), [&](std::size_t i) {
    const double l = lfs(spec, probes[i]);
    out.lfs[i] = l;
    if (index.empty()) return;
    const Neighbor nb = index.nearest(probes[i]);
    out.ratio[i] = std::sqrt(nb.dist2) / (eps * l);
  });
  return out;
}

}  // namespace

std::vector<Vec3> SampleSet::positions() const {
  std::vector<Vec3> out;
  out.reserve(samples.size());
  for (const auto& s : samples) out.push_back(s.position);
  return out;
}

SurfaceSample make_sample(const SurfacePoint& p, double delta) {
  return {p.position, p.normal, p.lfs, delta * p.lfs};
}

SampleSet generate_sample(const SurfaceSpec& spec, double eps, double sigma, std::uint64_t rng_seed,
                          const SamplerOptions& options) {
  check_parameters(eps, sigma);
  SampleSet out;
  out.eps = eps;
  out.sigma = sigma;
  out.delta = options.delta > 0.0 ? options.delta : 2.0 * eps;
  out.rng_seed = rng_seed;

  const double lmin = spec.min_lfs();
  const double h = kCandidateSpacing * eps * lmin;
  const double wanted = std::ceil(spec.area() / (h * h * std::sqrt(3.0) / 2.0));
  if (wanted > static_cast<double>(kMaxCandidates)) {
    throw Error(ErrorCode::BudgetExceeded, "generate_sample: candidate pool too large for eps");
  }
  const std::vector<Vec3> cand = quasi_uniform_points(spec, static_cast<std::size_t>(wanted));
  std::vector<double> cand_lfs(cand.size());
  parallel_for(cand.size(), [&](std::size_t i) { cand_lfs[i] = lfs(spec, cand[i]); });
  const double lmax = *std::max_element(cand_lfs.begin(), cand_lfs.end());

  std::vector<std::size_t> order(cand.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::mt19937_64 rng(rng_seed);
  for (std::size_t i = order.size(); i > 1; --i) {
    std::swap(order[i - 1], order[static_cast<std::size_t>(rng() % i)]);
  }

  SpatialHash grid(sigma * eps * lmax);
  std::vector<Vec3> pos;
  std::vector<double> pos_lfs;
  const auto add = [&](const Vec3& p) {
    if (pos.size() >= options.max_samples) {
      throw Error(ErrorCode::BudgetExceeded, "generate_sample: sample budget exceeded");
    }
    grid.insert(static_cast<int>(pos.size()), p);
    pos.push_back(p);
    pos_lfs.push_back(lfs(spec, p));
  };

  for (std::size_t c : order) {
    const Vec3& x = cand[c];
    const double lx = cand_lfs[c];
    bool free = true;
    grid.for_each_candidate(x, sigma * eps * lx, [&](int id) {
      if (!free) return;
      const double limit = sigma * eps * std::min(lx, pos_lfs[static_cast<std::size_t>(id)]);
      if ((pos[static_cast<std::size_t>(id)] - x).squaredNorm() < limit * limit) free = false;
    });
    if (free) add(x);
  }

  // Gap filling: an uncovered probe is farther than eps * lfs from every
  // sample, so inserting it keeps the set sparse.
  for (int round = 0; round < kMaxGapFillRounds; ++round) {
    const std::size_t probe_count =
        options.probe_count > 0 ? options.probe_count : default_probe_count(pos.size());
    const std::vector<Vec3> probes = quasi_uniform_points(spec, probe_count);
    const PointIndex index(pos);
    const ProbeScan scan = scan_probes(probes, index, spec, eps);
    bool inserted = false;
    for (std::size_t i = 0; i < probes.size(); ++i) {
      if (scan.ratio[i] <= 1.0) continue;
      const double reach = eps * scan.lfs[i];
      bool covered = false;
      grid.for_each_candidate(probes[i], reach, [&](int id) {
        if ((pos[static_cast<std::size_t>(id)] - probes[i]).squaredNorm() <= reach * reach) covered = true;
      });
      if (covered) continue;
      add(probes[i]);
      inserted = true;
    }
    if (!inserted) break;
  }

  out.samples.resize(pos.size());
  parallel_for(pos.size(), [&](std::size_t i) {
    out.samples[i] = make_sample(project(spec, pos[i]), out.delta);
  });
  return out;
}

CoveringResult verify_covering(const SampleSet& s, const SurfaceSpec& spec, std::size_t probe_count) {
  CoveringResult res;
  res.probes = probe_count;
  const std::vector<Vec3> probes = quasi_uniform_points(spec, probe_count);
  res.probes = probes.size();
  const PointIndex index(s.positions());
  const ProbeScan scan = scan_probes(probes, index, spec, s.eps);
  for (std::size_t i = 0; i < probes.size(); ++i) {
    if (scan.ratio[i] > res.worst_ratio || i == 0) {
      res.worst_ratio = scan.ratio[i];
      res.worst_point = probes[i];
    }
  }
  res.ok = !probes.empty() && res.worst_ratio <= 1.0;
  return res;
}

SparsityResult verify_sparsity(const SampleSet& s) {
  SparsityResult res;
  const std::size_t n = s.size();
  if (n < 2) return res;
  const PointIndex index(s.positions());
  const double se = s.sigma * s.eps;
  std::vector<std::vector<int>> hits(n);
  parallel_for(n, [&](std::size_t i) {
    const auto& p = s.samples[i];
    index.for_each_within(p.position, se * p.lfs, [&](int j) {
      if (static_cast<std::size_t>(j) <= i) return;
      const auto& q = s.samples[static_cast<std::size_t>(j)];
      const double limit = se * std::min(p.lfs, q.lfs);
      if ((p.position - q.position).squaredNorm() < limit * limit) hits[i].push_back(j);
    });
    std::sort(hits[i].begin(), hits[i].end());
  });
  for (std::size_t i = 0; i < n; ++i) {
    for (int j : hits[i]) res.violations.emplace_back(static_cast<int>(i), j);
  }
  res.ok = res.violations.empty();
  return res;
}

}  // namespace vorocrust
