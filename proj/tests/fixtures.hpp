#pragma once

#include <string>
#include <vector>

#include "vorocrust/pipeline.hpp"

namespace vc_test {

/// Sphere(1), eps 0.05, delta 0.1, seed 42. Built once per process.
const vorocrust::RunResult& sphere_run();
const vorocrust::BallIndex& sphere_balls();
/// Exposed guide pairs of the sphere run.
const std::vector<vorocrust::GuidePair>& sphere_guides();
/// Octree of the sphere run with surface seeds marked.
const vorocrust::Octree& sphere_octree();

/// Sphere(1) sample at eps 0.02, seed 42, with its balls and exposed guides.
const vorocrust::SampleSet& fine_sphere_sample();
const std::vector<vorocrust::GuidePair>& fine_sphere_guides();

/// Closed triangulated sphere: subdivided icosahedron with vertices on the sphere.
vorocrust::ReconSurface icosphere(double radius, int level);

std::string serialize_samples(const vorocrust::SampleSet& s);

}  // namespace vc_test
