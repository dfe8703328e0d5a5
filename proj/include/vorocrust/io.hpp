#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include <json.hpp>

#include "vorocrust/quality_verify.hpp"

namespace vorocrust {

// Text formats are LF-terminated ASCII with shortest round-trip decimals.
// Readers throw Error(Parse) with "<source>:<line>: ..." messages.

/// Ball radii are not stored; the reader sets them to delta * lfs.
void write_samples(std::ostream& out, const SampleSet& s);
SampleSet read_samples(std::istream& in, const std::string& source);

void write_seeds(std::ostream& out, const std::vector<Seed>& seeds);
std::vector<Seed> read_seeds(std::istream& in, const std::string& source);

void write_mesh(std::ostream& out, const VolumeMesh& mesh);
VolumeMesh read_mesh(std::istream& in, const std::string& source);

/// `v` lines then 1-indexed polygonal `f` lines, oriented outward.
void write_obj(std::ostream& out, const ReconSurface& recon);

nlohmann::json report_to_json(const QualityReport& report);
ReportParams params_from_json(const nlohmann::json& params);

/// File wrappers; open failures throw Error(Io).
void save_text(const std::string& path, const std::string& text);
std::string load_text(const std::string& path);

}  // namespace vorocrust
