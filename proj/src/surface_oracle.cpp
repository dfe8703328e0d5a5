#include "vorocrust/surface_oracle.hpp"

#include <charconv>
#include <cmath>
#include <limits>
#include <sstream>

#include "vorocrust/text_format.hpp"

namespace vorocrust {

namespace {

constexpr double kGoldenAngle = 2.399963229728653;  // pi * (3 - sqrt(5))
constexpr double kInvPhi = 0.6180339887498949;
constexpr double kInvPlastic = 0.7548776662466927;

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

double frac(double v) { return v - std::floor(v); }

// Distance from q to the segment/filled ellipse {X^2/A^2 + Y^2/B^2 <= 1, z = 0}
// with A >= B >= 0.
double distance_to_focal_region(double A, double B, const Vec3& q) {
  const double x = std::abs(q.x());
  const double y = std::abs(q.y());
  const double z = q.z();
  double planar = 0.0;
  if (B <= 0.0) {
    if (A <= 0.0) {
      planar = std::hypot(x, y);
    } else {
      planar = std::hypot(std::max(x - A, 0.0), y);
    }
  } else if ((x / A) * (x / A) + (y / B) * (y / B) > 1.0) {
    // Outside the ellipse: root t > 0 of (A x/(A^2+t))^2 + (B y/(B^2+t))^2 = 1.
    const auto f = [&](double t) {
      const double u = A * x / (A * A + t);
      const double v = B * y / (B * B + t);
      return u * u + v * v - 1.0;
    };
    double lo = 0.0;
    double hi = A * std::hypot(x, y) * 1.5 + A * A;
    for (int it = 0; it < 300; ++it) {
      const double mid = 0.5 * (lo + hi);
      if (mid <= lo || mid >= hi) break;
      (f(mid) > 0.0 ? lo : hi) = mid;
    }
    const double t = 0.5 * (lo + hi);
    const double px = A * A * x / (A * A + t);
    const double py = B * B * y / (B * B + t);
    planar = std::hypot(x - px, y - py);
  }
  return std::hypot(planar, z);
}

struct EllipsoidClosest {
  Vec3 point;
  bool ambiguous;
};

// Closest point on the ellipsoid with semi-axes e (descending). Solves the
// Lagrange-multiplier equation sum (e_i y_i / (e_i^2 + t))^2 = 1 for the root
// t >= -e_2^2, parameterized by s = t + e_2^2 for precision.
EllipsoidClosest closest_on_ellipsoid(const EllipsoidSurface& el, const Vec3& q) {
  const std::array<double, 3> e{el.a, el.b, el.c};
  const std::array<double, 3> y{std::abs(q.x()), std::abs(q.y()), std::abs(q.z())};
  const double c2 = e[2] * e[2];
  const auto denom = [&](int i, double s) { return e[i] * e[i] - c2 + s; };
  const auto f = [&](double s) {
    double sum = -1.0;
    for (int i = 0; i < 3; ++i) {
      if (y[i] == 0.0) continue;
      const double r = e[i] * y[i] / denom(i, s);
      sum += r * r;
    }
    return sum;
  };

  // With no data along the smallest axes the root may sit at s = 0, where
  // the closest point leaves the symmetry plane.
  bool small_axis_data = false;
  for (int i = 0; i < 3; ++i) {
    if (e[i] * e[i] - c2 <= 0.0 && y[i] != 0.0) small_axis_data = true;
  }
  std::array<double, 3> x{};
  bool ambiguous = false;
  if (!small_axis_data && f(0.0) <= 0.0) {
    double g = 0.0;
    for (int i = 0; i < 3; ++i) {
      if (e[i] * e[i] - c2 <= 0.0) continue;
      x[i] = e[i] * e[i] * y[i] / (e[i] * e[i] - c2);
      g += (x[i] / e[i]) * (x[i] / e[i]);
    }
    const double h = e[2] * std::sqrt(std::max(0.0, 1.0 - g));
    ambiguous = h > 0.0;
    // Put the free height on the z axis (or the first small axis).
    for (int i = 0; i < 3; ++i) {
      if (e[i] * e[i] - c2 <= 0.0) {
        x[i] = h;
        break;
      }
    }
  } else {
    double lo = 0.0;
    double hi = std::sqrt(3.0) * e[0] * std::hypot(std::hypot(y[0], y[1]), y[2]) + c2;
    for (int it = 0; it < 400; ++it) {
      const double mid = 0.5 * (lo + hi);
      if (mid <= lo || mid >= hi) break;
      (f(mid) > 0.0 ? lo : hi) = mid;
    }
    double s = 0.5 * (lo + hi);
    // Newton polish on the bracketed root.
    for (int it = 0; it < 3; ++it) {
      double fs = -1.0;
      double df = 0.0;
      for (int i = 0; i < 3; ++i) {
        if (y[i] == 0.0) continue;
        const double d = denom(i, s);
        const double r = e[i] * y[i] / d;
        fs += r * r;
        df += -2.0 * r * r / d;
      }
      if (df == 0.0) break;
      const double next = s - fs / df;
      if (!(next > lo && next < hi)) break;
      s = next;
    }
    for (int i = 0; i < 3; ++i) {
      x[i] = y[i] == 0.0 ? 0.0 : e[i] * e[i] * y[i] / denom(i, s);
    }
  }
  return {Vec3(std::copysign(x[0], q.x()), std::copysign(x[1], q.y()),
               std::copysign(x[2], q.z())),
          ambiguous};
}

Vec3 ellipsoid_normal(const EllipsoidSurface& el, const Vec3& p) {
  return Vec3(p.x() / (el.a * el.a), p.y() / (el.b * el.b), p.z() / (el.c * el.c)).normalized();
}

double ellipsoid_level(const EllipsoidSurface& el, const Vec3& x) {
  return std::sqrt((x.x() / el.a) * (x.x() / el.a) + (x.y() / el.b) * (x.y() / el.b) +
                   (x.z() / el.c) * (x.z() / el.c));
}

double focal_a(const EllipsoidSurface& el) { return (el.a * el.a - el.c * el.c) / el.a; }
double focal_b(const EllipsoidSurface& el) { return (el.b * el.b - el.c * el.c) / el.b; }

// Distance from x to the medial axis of the surface.
double medial_distance(const SurfaceSpec& spec, const Vec3& x) {
  return std::visit(
      Overloaded{
          [&](const SphereSurface&) { return x.norm(); },
          [&](const TorusSurface& t) {
            const double rho = std::hypot(x.x(), x.y());
            return std::min(std::hypot(rho - t.major, x.z()), rho);
          },
          [&](const EllipsoidSurface& el) {
            return distance_to_focal_region(focal_a(el), focal_b(el), x);
          },
      },
      spec.shape());
}

std::vector<Vec3> fibonacci_sphere(std::size_t n) {
  std::vector<Vec3> out;
  out.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double z = 1.0 - (2.0 * static_cast<double>(i) + 1.0) / static_cast<double>(n);
    const double r = std::sqrt(std::max(0.0, 1.0 - z * z));
    const double phi = kGoldenAngle * static_cast<double>(i);
    out.emplace_back(r * std::cos(phi), r * std::sin(phi), z);
  }
  return out;
}

double ellipsoid_area(const EllipsoidSurface& el) {
  // Midpoint rule over the unit-sphere parameterization.
  const int nt = 600;
  const int np = 1200;
  double area = 0.0;
  for (int i = 0; i < nt; ++i) {
    const double th = kPi * (i + 0.5) / nt;
    const double st = std::sin(th);
    const double ct = std::cos(th);
    for (int j = 0; j < np; ++j) {
      const double ph = 2.0 * kPi * (j + 0.5) / np;
      const Vec3 d(st * std::cos(ph), st * std::sin(ph), ct);
      const double w = el.a * el.b * el.c *
                       std::sqrt((d.x() / el.a) * (d.x() / el.a) + (d.y() / el.b) * (d.y() / el.b) +
                                 (d.z() / el.c) * (d.z() / el.c));
      area += w * st;
    }
  }
  return area * (kPi / nt) * (2.0 * kPi / np);
}

}  // namespace

const char* to_string(Side side) {
  switch (side) {
    case Side::Inside: return "Inside";
    case Side::On: return "On";
    case Side::Outside: return "Outside";
  }
  return "?";
}

SurfaceSpec SurfaceSpec::sphere(double radius) {
  if (!(radius > 0.0) || !std::isfinite(radius)) {
    throw Error(ErrorCode::InvalidArgument, "sphere radius must be positive");
  }
  return SurfaceSpec(SphereSurface{radius});
}

SurfaceSpec SurfaceSpec::torus(double major, double minor) {
  if (!(minor > 0.0) || !(major >= 2.0 * minor) || !std::isfinite(major)) {
    throw Error(ErrorCode::InvalidArgument, "torus requires minor > 0 and major >= 2 * minor");
  }
  return SurfaceSpec(TorusSurface{major, minor});
}

SurfaceSpec SurfaceSpec::ellipsoid(double a, double b, double c) {
  if (!(c > 0.0) || !(b >= c) || !(a >= b) || !std::isfinite(a)) {
    throw Error(ErrorCode::InvalidArgument, "ellipsoid requires a >= b >= c > 0");
  }
  return SurfaceSpec(EllipsoidSurface{a, b, c});
}

SurfaceSpec SurfaceSpec::parse(const std::string& text) {
  const auto colon = text.find(':');
  if (colon == std::string::npos) {
    throw Error(ErrorCode::InvalidArgument, "surface spec '" + text + "' lacks ':'");
  }
  const std::string kind = text.substr(0, colon);
  std::vector<double> values;
  std::stringstream rest(text.substr(colon + 1));
  std::string item;
  while (std::getline(rest, item, ',')) {
    values.push_back(parse_double(item, "surface spec"));
  }
  const auto need = [&](std::size_t n) {
    if (values.size() != n) {
      throw Error(ErrorCode::InvalidArgument,
                  "surface spec '" + text + "' expects " + std::to_string(n) + " parameters");
    }
  };
  if (kind == "sphere") {
    need(1);
    return sphere(values[0]);
  }
  if (kind == "torus") {
    need(2);
    return torus(values[0], values[1]);
  }
  if (kind == "ellipsoid") {
    need(3);
    return ellipsoid(values[0], values[1], values[2]);
  }
  throw Error(ErrorCode::InvalidArgument, "unknown surface kind '" + kind + "'");
}

std::string SurfaceSpec::to_string() const {
  return std::visit(
      Overloaded{
          [](const SphereSurface& s) { return "sphere:" + format_double(s.radius); },
          [](const TorusSurface& t) {
            return "torus:" + format_double(t.major) + "," + format_double(t.minor);
          },
          [](const EllipsoidSurface& e) {
            return "ellipsoid:" + format_double(e.a) + "," + format_double(e.b) + "," +
                   format_double(e.c);
          },
      },
      shape_);
}

double SurfaceSpec::scale() const { return bounds().sizes().maxCoeff() * 0.5; }

double SurfaceSpec::min_lfs() const {
  return std::visit(Overloaded{
                        [](const SphereSurface& s) { return s.radius; },
                        [](const TorusSurface& t) { return t.minor; },
                        [&](const EllipsoidSurface& e) {
                          double m = e.c * e.c / e.a;
                          for (const Vec3& p : quasi_uniform_points(*this, 20000)) {
                            m = std::min(m, lfs(*this, p));
                          }
                          return m;
                        },
                    },
                    shape_);
}

double SurfaceSpec::area() const {
  return std::visit(Overloaded{
                        [](const SphereSurface& s) { return 4.0 * kPi * s.radius * s.radius; },
                        [](const TorusSurface& t) { return 4.0 * kPi * kPi * t.major * t.minor; },
                        [](const EllipsoidSurface& e) { return ellipsoid_area(e); },
                    },
                    shape_);
}

double SurfaceSpec::volume() const {
  return std::visit(
      Overloaded{
          [](const SphereSurface& s) { return 4.0 / 3.0 * kPi * s.radius * s.radius * s.radius; },
          [](const TorusSurface& t) { return 2.0 * kPi * kPi * t.major * t.minor * t.minor; },
          [](const EllipsoidSurface& e) { return 4.0 / 3.0 * kPi * e.a * e.b * e.c; },
      },
      shape_);
}

Eigen::AlignedBox3d SurfaceSpec::bounds() const {
  const Vec3 half = std::visit(Overloaded{
                                   [](const SphereSurface& s) -> Vec3 { return Vec3::Constant(s.radius); },
                                   [](const TorusSurface& t) {
                                     return Vec3(t.major + t.minor, t.major + t.minor, t.minor);
                                   },
                                   [](const EllipsoidSurface& e) { return Vec3(e.a, e.b, e.c); },
                               },
                               shape_);
  return Eigen::AlignedBox3d(-half, half);
}

int SurfaceSpec::euler_characteristic() const {
  return std::holds_alternative<TorusSurface>(shape_) ? 0 : 2;
}

Side signed_side(const SurfaceSpec& spec, const Vec3& x, const Tolerance& tol) {
  const double band = tol.band(spec.scale());
  double d = 0.0;
  if (const auto* el = std::get_if<EllipsoidSurface>(&spec.shape())) {
    const double level = ellipsoid_level(*el, x);
    if (level < 0.999) return Side::Inside;
    if (level > 1.001) return Side::Outside;
  }
  d = signed_distance(spec, x);
  if (d < -band) return Side::Inside;
  if (d > band) return Side::Outside;
  return Side::On;
}

double signed_distance(const SurfaceSpec& spec, const Vec3& x) {
  return std::visit(
      Overloaded{
          [&](const SphereSurface& s) { return x.norm() - s.radius; },
          [&](const TorusSurface& t) {
            return std::hypot(std::hypot(x.x(), x.y()) - t.major, x.z()) - t.minor;
          },
          [&](const EllipsoidSurface& el) {
            const auto closest = closest_on_ellipsoid(el, x);
            const double d = (x - closest.point).norm();
            return ellipsoid_level(el, x) < 1.0 ? -d : d;
          },
      },
      spec.shape());
}

double lfs(const SurfaceSpec& spec, const Vec3& on_surface) {
  return std::visit(Overloaded{
                        [](const SphereSurface& s) { return s.radius; },
                        [](const TorusSurface& t) { return t.minor; },
                        [&](const EllipsoidSurface&) { return medial_distance(spec, on_surface); },
                    },
                    spec.shape());
}

SurfacePoint project(const SurfaceSpec& spec, const Vec3& x, const Tolerance& tol) {
  if (medial_distance(spec, x) <= tol.band(spec.scale())) {
    throw Error(ErrorCode::AmbiguousProjection, "project: point lies on the medial axis");
  }
  return std::visit(
      Overloaded{
          [&](const SphereSurface& s) {
            const Vec3 n = x.normalized();
            return SurfacePoint{s.radius * n, n, s.radius};
          },
          [&](const TorusSurface& t) {
            const Vec3 radial = Vec3(x.x(), x.y(), 0.0).normalized();
            const Vec3 core = t.major * radial;
            const Vec3 n = (x - core).normalized();
            return SurfacePoint{core + t.minor * n, n, t.minor};
          },
          [&](const EllipsoidSurface& el) {
            const auto closest = closest_on_ellipsoid(el, x);
            if (closest.ambiguous) {
              throw Error(ErrorCode::AmbiguousProjection, "project: point lies on the medial axis");
            }
            return SurfacePoint{closest.point, ellipsoid_normal(el, closest.point),
                                medial_distance(spec, closest.point)};
          },
      },
      spec.shape());
}

std::vector<Vec3> quasi_uniform_points(const SurfaceSpec& spec, std::size_t count) {
  return std::visit(
      Overloaded{
          [&](const SphereSurface& s) {
            auto pts = fibonacci_sphere(count);
            for (Vec3& p : pts) p *= s.radius;
            return pts;
          },
          [&](const TorusSurface& t) {
            std::vector<Vec3> pts;
            pts.reserve(count);
            const double n = static_cast<double>(count);
            for (std::size_t i = 0; i < count; ++i) {
              const double s = (static_cast<double>(i) + 0.5) / n;
              const double u = 2.0 * kPi * frac(static_cast<double>(i) * kInvPhi);
              // Invert the area CDF (R v + r sin v) / (2 pi R) = s.
              double v = 2.0 * kPi * s;
              for (int it = 0; it < 30; ++it) {
                const double g = (t.major * v + t.minor * std::sin(v)) / (2.0 * kPi * t.major) - s;
                const double dg = (t.major + t.minor * std::cos(v)) / (2.0 * kPi * t.major);
                const double step = g / dg;
                v -= step;
                if (std::abs(step) < 1e-15) break;
              }
              const double ring = t.major + t.minor * std::cos(v);
              pts.emplace_back(ring * std::cos(u), ring * std::sin(u), t.minor * std::sin(v));
            }
            return pts;
          },
          [&](const EllipsoidSurface& el) {
            // Fibonacci directions mapped onto the ellipsoid, thinned by the
            // area element relative to its maximum a*b.
            const double rate = spec.area() / (4.0 * kPi * el.a * el.b);
            auto m = static_cast<std::size_t>(std::ceil(static_cast<double>(count) / rate));
            std::vector<Vec3> pts;
            while (pts.size() < count) {
              pts.clear();
              std::size_t i = 0;
              for (const Vec3& d : fibonacci_sphere(m)) {
                const double w = el.c * std::sqrt((d.x() / el.a) * (d.x() / el.a) +
                                                  (d.y() / el.b) * (d.y() / el.b) +
                                                  (d.z() / el.c) * (d.z() / el.c));
                const double u = frac(static_cast<double>(i++) * kInvPlastic);
                if (u < w) pts.emplace_back(el.a * d.x(), el.b * d.y(), el.c * d.z());
              }
              m += m / 50 + 1;
            }
            // Excess dropped at an even stride.
            std::vector<Vec3> out;
            out.reserve(count);
            for (std::size_t k = 0; k < count; ++k) out.push_back(pts[k * pts.size() / count]);
            pts = std::move(out);
            return pts;
          },
      },
      spec.shape());
}

}  // namespace vorocrust
