#include "vorocrust/io.hpp"

#include <charconv>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include "vorocrust/text_format.hpp"

namespace vorocrust {

namespace {

/// Line reader that splits on whitespace and reports positions.
class LineReader {
 public:
  LineReader(std::istream& in, std::string source) : in_(in), source_(std::move(source)) {}

  /// Next non-empty line as tokens; throws at end of input.
  std::vector<std::string> next(const std::string& expecting) {
    std::string line;
    while (std::getline(in_, line)) {
      ++line_;
      std::istringstream ss(line);
      std::vector<std::string> tokens;
      for (std::string t; ss >> t;) tokens.push_back(t);
      if (!tokens.empty()) return tokens;
    }
    fail("unexpected end of file, expected " + expecting);
  }

  std::vector<std::string> header(const std::string& magic, std::size_t fields) {
    auto t = next("header");
    if (t.size() < 2 || t[0] != magic) fail("expected header '" + magic + " 1 ...'");
    if (t[1] != "1") fail("unsupported " + magic + " version " + t[1]);
    arity(t, fields, "header");
    return t;
  }

  /// Expects `keyword N` and returns N.
  std::string counted(const std::string& keyword) {
    const auto t = next("'" + keyword + "'");
    if (t.size() != 2 || t[0] != keyword) fail("expected '" + keyword + " <count>'");
    return t[1];
  }

  void expect_end() {
    std::string line;
    while (std::getline(in_, line)) {
      ++line_;
      if (line.find_first_not_of(" \t\r") != std::string::npos) fail("trailing content");
    }
  }

  double real(const std::string& token) {
    try {
      return parse_double(token, "value");
    } catch (const Error& e) {
      fail(e.what());
    }
  }

  long long integer(const std::string& token) {
    long long v = 0;
    const char* end = token.data() + token.size();
    const auto res = std::from_chars(token.data(), end, v);
    if (token.empty() || res.ec != std::errc() || res.ptr != end) fail("cannot parse integer '" + token + "'");
    return v;
  }

  std::size_t count(const std::string& token) {
    const long long v = integer(token);
    if (v < 0) fail("negative count");
    return static_cast<std::size_t>(v);
  }

  int index(const std::string& token, std::size_t limit, bool allow_missing = false) {
    const long long v = integer(token);
    if ((allow_missing && v == -1) || (v >= 0 && static_cast<std::size_t>(v) < limit)) return static_cast<int>(v);
    fail("index " + token + " out of range");
  }

  [[noreturn]] void fail(const std::string& message) const {
    throw Error(ErrorCode::Parse, source_ + ":" + std::to_string(line_) + ": " + message);
  }

  void arity(const std::vector<std::string>& t, std::size_t n, const char* what) const {
    if (t.size() != n) fail(std::string("expected ") + std::to_string(n) + " fields in " + what);
  }

 private:
  std::istream& in_;
  std::string source_;
  std::size_t line_ = 0;
};

void put_vec(std::ostream& out, const Vec3& v) {
  out << format_double(v.x()) << ' ' << format_double(v.y()) << ' ' << format_double(v.z());
}

Vec3 get_vec(LineReader& r, const std::vector<std::string>& t, std::size_t at) {
  return {r.real(t[at]), r.real(t[at + 1]), r.real(t[at + 2])};
}

SeedKind kind_from_code(LineReader& r, const std::string& token) {
  if (token == "U") return SeedKind::Upper;
  if (token == "L") return SeedKind::Lower;
  if (token == "I") return SeedKind::Interior;
  r.fail("unknown seed kind '" + token + "'");
}

const char* relation_text(Relation r) {
  switch (r) {
    case Relation::AtMost:
      return "<=";
    case Relation::AtLeast:
      return ">=";
    case Relation::Equal:
      return "==";
  }
  return "?";
}

template <typename T>
nlohmann::json optional_json(const std::optional<T>& v) {
  return v ? nlohmann::json(*v) : nlohmann::json(nullptr);
}

}  // namespace

void write_samples(std::ostream& out, const SampleSet& s) {
  out << "vcsample 1 " << format_double(s.eps) << ' ' << format_double(s.sigma) << ' ' << format_double(s.delta)
      << ' ' << s.rng_seed << ' ' << s.size() << '\n';
  for (const SurfaceSample& p : s.samples) {
    put_vec(out, p.position);
    out << ' ';
    put_vec(out, p.normal);
    out << ' ' << format_double(p.lfs) << '\n';
  }
}

SampleSet read_samples(std::istream& in, const std::string& source) {
  LineReader r(in, source);
  const auto h = r.header("vcsample", 7);
  SampleSet s;
  s.eps = r.real(h[2]);
  s.sigma = r.real(h[3]);
  s.delta = r.real(h[4]);
  std::uint64_t seed = 0;
  const auto res = std::from_chars(h[5].data(), h[5].data() + h[5].size(), seed);
  if (res.ec != std::errc() || res.ptr != h[5].data() + h[5].size()) r.fail("cannot parse seed '" + h[5] + "'");
  s.rng_seed = seed;
  const std::size_t n = r.count(h[6]);
  s.samples.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    const auto t = r.next("sample line");
    r.arity(t, 7, "sample line");
    const double lfs = r.real(t[6]);
    s.samples.push_back({get_vec(r, t, 0), get_vec(r, t, 3), lfs, s.delta * lfs});
  }
  r.expect_end();
  return s;
}

void write_seeds(std::ostream& out, const std::vector<Seed>& seeds) {
  out << "vcseed 1 " << seeds.size() << '\n';
  for (const Seed& s : seeds) {
    out << s.id << ' ' << seed_kind_code(s.kind) << ' ';
    put_vec(out, s.position);
    out << ' ' << s.triple[0] << ' ' << s.triple[1] << ' ' << s.triple[2] << '\n';
  }
}

std::vector<Seed> read_seeds(std::istream& in, const std::string& source) {
  LineReader r(in, source);
  const std::size_t n = r.count(r.header("vcseed", 3)[2]);
  std::vector<Seed> out;
  out.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    const auto t = r.next("seed line");
    r.arity(t, 8, "seed line");
    Seed s;
    s.id = static_cast<int>(r.integer(t[0]));
    if (s.id != static_cast<int>(i)) r.fail("seed ids must be 0.." + std::to_string(n - 1) + " in order");
    s.kind = kind_from_code(r, t[1]);
    s.position = get_vec(r, t, 2);
    for (int k = 0; k < 3; ++k) s.triple[static_cast<std::size_t>(k)] = static_cast<int>(r.integer(t[5 + k]));
    out.push_back(s);
  }
  r.expect_end();
  return out;
}

void write_mesh(std::ostream& out, const VolumeMesh& mesh) {
  out << "vcmesh 1\n";
  out << "vertices " << mesh.vertices.size() << '\n';
  for (const Vec3& v : mesh.vertices) {
    put_vec(out, v);
    out << '\n';
  }
  out << "faces " << mesh.faces.size() << '\n';
  for (const MeshFace& f : mesh.faces) {
    out << f.vertices.size();
    for (int v : f.vertices) out << ' ' << v;
    out << ' ' << f.seed_a << ' ' << f.seed_b << '\n';
  }
  out << "cells " << mesh.cells.size() << '\n';
  for (const MeshCell& c : mesh.cells) {
    out << c.seed_id << ' ' << seed_kind_code(c.kind) << ' ' << c.faces.size();
    for (int f : c.faces) out << ' ' << f;
    out << '\n';
  }
}

VolumeMesh read_mesh(std::istream& in, const std::string& source) {
  LineReader r(in, source);
  r.header("vcmesh", 2);
  VolumeMesh mesh;
  const std::size_t nv = r.count(r.counted("vertices"));
  mesh.vertices.reserve(nv);
  for (std::size_t i = 0; i < nv; ++i) {
    const auto t = r.next("vertex line");
    r.arity(t, 3, "vertex line");
    mesh.vertices.push_back(get_vec(r, t, 0));
  }
  const std::size_t nf = r.count(r.counted("faces"));
  mesh.faces.reserve(nf);
  for (std::size_t i = 0; i < nf; ++i) {
    const auto t = r.next("face line");
    const std::size_t k = r.count(t.front());
    if (k < 3) r.fail("face with fewer than three vertices");
    r.arity(t, k + 3, "face line");
    MeshFace f;
    for (std::size_t j = 0; j < k; ++j) f.vertices.push_back(r.index(t[1 + j], nv));
    f.seed_a = static_cast<int>(r.integer(t[k + 1]));
    f.seed_b = static_cast<int>(r.integer(t[k + 2]));
    if (f.seed_a < 0 || f.seed_b < kBoundaryNeighbor) r.fail("invalid seed id on face");
    mesh.faces.push_back(std::move(f));
  }
  const std::size_t nc = r.count(r.counted("cells"));
  mesh.cells.reserve(nc);
  for (std::size_t i = 0; i < nc; ++i) {
    const auto t = r.next("cell line");
    if (t.size() < 3) r.fail("expected 'seed_id kind nf f1..fnf'");
    MeshCell c;
    c.seed_id = static_cast<int>(r.integer(t[0]));
    if (c.seed_id < 0) r.fail("invalid seed id on cell");
    c.kind = kind_from_code(r, t[1]);
    const std::size_t k = r.count(t[2]);
    r.arity(t, k + 3, "cell line");
    for (std::size_t j = 0; j < k; ++j) {
      const int f = r.index(t[3 + j], nf);
      const MeshFace& face = mesh.faces[static_cast<std::size_t>(f)];
      if (face.seed_a != c.seed_id && face.seed_b != c.seed_id) r.fail("cell lists a face it does not bound");
      c.faces.push_back(f);
    }
    mesh.cells.push_back(std::move(c));
  }
  r.expect_end();
  return mesh;
}

void write_obj(std::ostream& out, const ReconSurface& recon) {
  for (const Vec3& v : recon.vertices) {
    out << "v ";
    put_vec(out, v);
    out << '\n';
  }
  for (const ReconFacet& f : recon.facets) {
    out << 'f';
    for (int v : f.vertices) out << ' ' << v + 1;
    out << '\n';
  }
}

nlohmann::json report_to_json(const QualityReport& report) {
  using nlohmann::json;
  const ReportParams& p = report.params;
  json out;
  out["params"] = {{"surface", p.surface},
                   {"eps", p.eps},
                   {"sigma", p.sigma},
                   {"delta", p.delta},
                   {"delta_overridden", p.delta_overridden},
                   {"rng_seed", p.rng_seed},
                   {"probe_count", p.probe_count},
                   {"allow_seeds_in_union", p.allow_seeds_in_union},
                   {"skip_interior", p.skip_interior}};
  json checks = json::array();
  for (const Check& c : report.checks) {
    json j = {{"name", c.name},
              {"paper_ref", c.reference},
              {"measured", optional_json(c.measured)},
              {"bound", optional_json(c.bound)},
              {"relation", relation_text(c.relation)},
              {"pass", optional_json(c.pass)},
              {"enforced", c.enforced}};
    if (!c.note.empty()) j["note"] = c.note;
    checks.push_back(std::move(j));
  }
  out["checks"] = std::move(checks);
  const SurfaceTopology& t = report.topology;
  out["topology"] = {{"vertices", t.vertices},
                     {"edges", t.edges},
                     {"facets", t.facets},
                     {"open_edges", t.open_edges},
                     {"nonmanifold_edges", t.nonmanifold_edges},
                     {"nonmanifold_vertices", t.nonmanifold_vertices},
                     {"watertight", t.watertight},
                     {"manifold", t.manifold},
                     {"components", t.components},
                     {"euler", t.euler},
                     {"genus", optional_json(t.genus)}};
  const SurfaceDistance& d = report.distance;
  out["distance"] = {{"max_surface_to_recon_rel", d.max_surface_to_recon},
                     {"max_recon_to_surface_rel", d.max_recon_to_surface},
                     {"surface_probes", d.surface_probes},
                     {"recon_probes", d.recon_probes}};
  json counts = json::object();
  for (const auto& [k, v] : report.counts) counts[k] = v;
  out["counts"] = std::move(counts);
  json timing = json::object();
  for (const auto& [k, v] : report.timing_ms) timing[k] = v;
  out["timing_ms"] = std::move(timing);
  out["passed"] = report.passed();
  return out;
}

ReportParams params_from_json(const nlohmann::json& j) {
  try {
    ReportParams p;
    p.surface = j.at("surface").get<std::string>();
    p.eps = j.at("eps").get<double>();
    p.sigma = j.at("sigma").get<double>();
    p.delta = j.at("delta").get<double>();
    p.delta_overridden = j.at("delta_overridden").get<bool>();
    p.rng_seed = j.at("rng_seed").get<std::uint64_t>();
    p.probe_count = j.at("probe_count").get<std::size_t>();
    p.allow_seeds_in_union = j.at("allow_seeds_in_union").get<bool>();
    p.skip_interior = j.at("skip_interior").get<bool>();
    return p;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::Parse, std::string("report params: ") + e.what());
  }
}

void save_text(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::Io, "cannot open " + path + " for writing");
  out << text;
  if (!out) throw Error(ErrorCode::Io, "cannot write " + path);
}

std::string load_text(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::Io, "cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace vorocrust
