#pragma once

#include <string>
#include <variant>
#include <vector>

#include "vorocrust/geom_core.hpp"

namespace vorocrust {

struct SphereSurface {
  double radius;
};

/// Requires major >= 2 * minor, which makes lfs the constant tube radius.
struct TorusSurface {
  double major;
  double minor;
};

/// Semi-axes along x, y, z with a >= b >= c > 0.
struct EllipsoidSurface {
  double a;
  double b;
  double c;
};

class SurfaceSpec {
 public:
  using Shape = std::variant<SphereSurface, TorusSurface, EllipsoidSurface>;

  static SurfaceSpec sphere(double radius);
  static SurfaceSpec torus(double major, double minor);
  static SurfaceSpec ellipsoid(double a, double b, double c);

  /// Grammar: `sphere:R`, `torus:R,r`, `ellipsoid:a,b,c`.
  static SurfaceSpec parse(const std::string& text);
  std::string to_string() const;

  const Shape& shape() const { return shape_; }

  /// Largest extent of the surface, used to scale tolerances.
  double scale() const;
  double min_lfs() const;
  double area() const;
  double volume() const;
  Eigen::AlignedBox3d bounds() const;
  /// Euler characteristic of the closed surface.
  int euler_characteristic() const;

 private:
  explicit SurfaceSpec(Shape shape) : shape_(shape) {}
  Shape shape_;
};

enum class Side { Inside, On, Outside };

const char* to_string(Side side);

struct SurfacePoint {
  Vec3 position;
  Vec3 normal;  // outward unit normal
  double lfs;
};

Side signed_side(const SurfaceSpec& spec, const Vec3& x, const Tolerance& tol = {});

/// Exact local feature size at a point of the surface.
double lfs(const SurfaceSpec& spec, const Vec3& on_surface);
inline double lfs(const SurfaceSpec& spec, const SurfacePoint& x) { return lfs(spec, x.position); }

/// Closest surface point; throws AmbiguousProjection near the medial axis.
SurfacePoint project(const SurfaceSpec& spec, const Vec3& x, const Tolerance& tol = {});

/// Signed Euclidean distance (positive outside). Uses projection near the
/// surface, so it is exact wherever project() is defined.
double signed_distance(const SurfaceSpec& spec, const Vec3& x);

/// Deterministic quasi-uniform (area-weighted) points on the surface.
std::vector<Vec3> quasi_uniform_points(const SurfaceSpec& spec, std::size_t count);

}  // namespace vorocrust
