#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>
#include <utility>

#include <Eigen/Dense>

namespace vorocrust {

template <typename Scalar>
using Vector3 = Eigen::Matrix<Scalar, 3, 1>;

using Vec3 = Vector3<double>;

enum class ErrorCode {
  InvalidArgument,
  NoIntersection,
  DegenerateCenters,
  DegenerateTriangle,
  AmbiguousProjection,
  BudgetExceeded,
  SideAmbiguous,
  DepthCapExceeded,
  EmptyCell,
  UnboundedCell,
  DegenerateCell,
  Parse,
  Io,
};

const char* to_string(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

/// Boundary classifications use max(abs_eps, rel_eps * scale), where scale is
/// the radius or length the classified quantity is compared against.
struct Tolerance {
  double rel_eps = 1e-10;
  double abs_eps = 1e-12;

  template <typename Scalar>
  Scalar band(Scalar scale) const {
    using std::abs;
    return std::max(Scalar(abs_eps), Scalar(rel_eps) * abs(scale));
  }
};

template <typename Scalar>
struct BallT {
  Vector3<Scalar> center;
  Scalar radius;
};

using Ball = BallT<double>;

enum class BallSide { Inside, Boundary, Outside };

/// Power distance between weighted points (p, w_p) and (q, w_q).
template <typename DerivedP, typename DerivedQ>
typename DerivedP::Scalar power_distance(const Eigen::MatrixBase<DerivedP>& p,
                                         typename DerivedP::Scalar w_p,
                                         const Eigen::MatrixBase<DerivedQ>& q,
                                         typename DerivedP::Scalar w_q) {
  return (p - q).squaredNorm() - w_p - w_q;
}

template <typename Scalar>
BallSide point_in_ball(const Vector3<Scalar>& x, const BallT<Scalar>& b,
                       const Tolerance& tol = {}) {
  const Scalar d = (x - b.center).norm();
  const Scalar band = tol.band(b.radius);
  if (d < b.radius - band) return BallSide::Inside;
  if (d <= b.radius + band) return BallSide::Boundary;
  return BallSide::Outside;
}

enum class TriSphereStatus { Ok, NoIntersection, DegenerateCenters };

/// Non-throwing form of tri_sphere_intersect; `out` is written only on Ok.
template <typename Scalar>
TriSphereStatus try_tri_sphere_intersect(const BallT<Scalar>& b1, const BallT<Scalar>& b2,
                                         const BallT<Scalar>& b3, std::array<Vector3<Scalar>, 2>& out,
                                         const Tolerance& tol = {}) {
  using std::sqrt;
  const Vector3<Scalar> u = b2.center - b1.center;
  const Vector3<Scalar> v = b3.center - b1.center;
  const Scalar d = u.norm();
  const Scalar scale = std::max({d, v.norm(), b1.radius, b2.radius, b3.radius});
  const Scalar band = tol.band(scale);
  if (d <= band) return TriSphereStatus::DegenerateCenters;
  const Vector3<Scalar> ex = u / d;
  const Scalar i = ex.dot(v);
  Vector3<Scalar> ey = v - i * ex;
  const Scalar j = ey.norm();
  if (j <= band) return TriSphereStatus::DegenerateCenters;
  ey /= j;
  const Vector3<Scalar> ez = ex.cross(ey);

  const Scalar r1s = b1.radius * b1.radius;
  const Scalar x = (r1s - b2.radius * b2.radius + d * d) / (2 * d);
  const Scalar y = (r1s - b3.radius * b3.radius + i * i + j * j) / (2 * j) - i * x / j;
  const Scalar z2 = r1s - x * x - y * y;
  // Tangency (z2 ~ 0) yields no usable pair.
  if (z2 <= band * band) return TriSphereStatus::NoIntersection;
  const Scalar z = sqrt(z2);
  const Vector3<Scalar> base = b1.center + x * ex + y * ey;
  out = {base - z * ez, base + z * ez};
  return TriSphereStatus::Ok;
}

/// The two common points of three spheres. The pair is ordered by signed
/// offset along (c2 - c1) x (c3 - c1): element 0 lies on the negative side.
template <typename Scalar>
std::array<Vector3<Scalar>, 2> tri_sphere_intersect(const BallT<Scalar>& b1,
                                                    const BallT<Scalar>& b2,
                                                    const BallT<Scalar>& b3,
                                                    const Tolerance& tol = {}) {
  std::array<Vector3<Scalar>, 2> out;
  switch (try_tri_sphere_intersect(b1, b2, b3, out, tol)) {
    case TriSphereStatus::DegenerateCenters:
      throw Error(ErrorCode::DegenerateCenters, "tri_sphere_intersect: coincident or collinear centers");
    case TriSphereStatus::NoIntersection:
      throw Error(ErrorCode::NoIntersection, "tri_sphere_intersect: spheres do not meet in two points");
    case TriSphereStatus::Ok:
      break;
  }
  return out;
}

template <typename Scalar>
struct Circumcircle {
  Vector3<Scalar> center;
  Scalar radius;
};

template <typename Scalar>
Circumcircle<Scalar> circumcenter_radius(const Vector3<Scalar>& a, const Vector3<Scalar>& b,
                                         const Vector3<Scalar>& c, const Tolerance& tol = {}) {
  const Vector3<Scalar> u = b - a;
  const Vector3<Scalar> v = c - a;
  const Vector3<Scalar> w = u.cross(v);
  const Scalar w2 = w.squaredNorm();
  const Scalar scale = u.norm() * v.norm();
  if (w.norm() <= tol.band(scale)) {
    throw Error(ErrorCode::DegenerateTriangle, "circumcenter_radius: collinear points");
  }
  const Vector3<Scalar> offset =
      (u.squaredNorm() * v.cross(w) + v.squaredNorm() * w.cross(u)) / (2 * w2);
  return {a + offset, offset.norm()};
}

template <typename Scalar>
struct TriangleQuality {
  Scalar min_angle;
  Scalar max_angle;
  Scalar edge_ratio;
  Scalar min_altitude_over_longest_edge;
};

template <typename Scalar>
TriangleQuality<Scalar> triangle_quality(const Vector3<Scalar>& a, const Vector3<Scalar>& b,
                                         const Vector3<Scalar>& c, const Tolerance& tol = {}) {
  using std::atan2;
  const std::array<Vector3<Scalar>, 3> p{a, b, c};
  std::array<Scalar, 3> edge{};
  std::array<Scalar, 3> angle{};
  for (int k = 0; k < 3; ++k) {
    const Vector3<Scalar> e1 = p[(k + 1) % 3] - p[k];
    const Vector3<Scalar> e2 = p[(k + 2) % 3] - p[k];
    angle[k] = atan2(e1.cross(e2).norm(), e1.dot(e2));
    edge[k] = (p[(k + 2) % 3] - p[(k + 1) % 3]).norm();  // opposite vertex k
  }
  const Scalar longest = *std::max_element(edge.begin(), edge.end());
  const Scalar shortest = *std::min_element(edge.begin(), edge.end());
  const Scalar twice_area = (b - a).cross(c - a).norm();
  if (shortest <= tol.band(longest) || twice_area <= tol.band(longest * longest)) {
    throw Error(ErrorCode::DegenerateTriangle, "triangle_quality: degenerate triangle");
  }
  return {*std::min_element(angle.begin(), angle.end()),
          *std::max_element(angle.begin(), angle.end()), longest / shortest,
          twice_area / (longest * longest)};
}

inline constexpr double kPi = std::numbers::pi;

inline double degrees(double radians) { return radians * 180.0 / kPi; }

}  // namespace vorocrust
