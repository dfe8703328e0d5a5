#include "vorocrust/parallel.hpp"

#include <atomic>
#include <cstdlib>
#include <string>

#include "vorocrust/geom_core.hpp"

namespace vorocrust {

namespace {

std::atomic<unsigned> g_threads{0};

unsigned default_threads() {
  if (const char* env = std::getenv("VOROCRUST_THREADS")) {
    try {
      const long v = std::stol(env);
      if (v > 0) return static_cast<unsigned>(v);
    } catch (...) {
    }
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

}  // namespace

void set_thread_count(unsigned count) { g_threads = count; }

unsigned thread_count() {
  const unsigned t = g_threads.load();
  return t == 0 ? default_threads() : t;
}

const char* to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::NoIntersection: return "NoIntersection";
    case ErrorCode::DegenerateCenters: return "DegenerateCenters";
    case ErrorCode::DegenerateTriangle: return "DegenerateTriangle";
    case ErrorCode::AmbiguousProjection: return "AmbiguousProjection";
    case ErrorCode::BudgetExceeded: return "BudgetExceeded";
    case ErrorCode::SideAmbiguous: return "SideAmbiguous";
    case ErrorCode::DepthCapExceeded: return "DepthCapExceeded";
    case ErrorCode::EmptyCell: return "EmptyCell";
    case ErrorCode::UnboundedCell: return "UnboundedCell";
    case ErrorCode::DegenerateCell: return "DegenerateCell";
    case ErrorCode::Parse: return "Parse";
    case ErrorCode::Io: return "Io";
  }
  return "Unknown";
}

}  // namespace vorocrust
