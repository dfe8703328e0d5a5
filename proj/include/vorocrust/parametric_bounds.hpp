#pragma once

#include <optional>

namespace vorocrust {

/// Hausdorff-type distance constant h_t.
inline constexpr double kDistanceConstant = 30.52;
/// Angle between a surface normal and a guide triangle normal is at most
/// (eta_s + kTriangleNormalConstant) * delta.
inline constexpr double kTriangleNormalConstant = 4.57;

/// Closed-form limits evaluated at (eps, sigma, delta). A bound is empty
/// when its formula is undefined at these parameters (the circumradius
/// family needs alpha2 < 1/4, which only holds for small eps).
struct ParametricBounds {
  double eps = 0.0;
  double sigma = 0.0;
  double delta = 0.0;

  double kappa = 0.0;      // 2 / (1 - delta)
  double kappa_eps = 0.0;  // sigma eps / (1 + sigma eps)
  double alpha2 = 0.0;     // squared orthoradius shift of a guide triangle
  double eta_s = 0.0;      // sample normal variation over one edge, per delta
  double eta_t = 0.0;      // triangle normal deviation, per delta

  std::optional<double> c_rad;      // circumradius over orthoradius
  std::optional<double> rho_f;      // circumradius over delta lfs(p_i)
  std::optional<double> rho_f_bar;  // circumradius over any edge
  std::optional<double> rho_v;      // boundary inradius over delta lfs(p_i)
  double h_s_hat = 0.0;             // seed height over the triangle plane

  double edge_ratio = 0.0;              // longest over shortest guide edge
  std::optional<double> min_angle;      // radians
  std::optional<double> min_altitude;   // altitude over its base edge
  double elevation = 0.0;               // radians; assumes delta = 2 eps
  double normal_deviation = 0.0;        // radians
  double vertex_normal_variation = 0.0; // radians

  double interior_fatness = 0.0;
  std::optional<double> boundary_fatness;
  double outradius_factor = 0.0;  // outradius over lfs(seed)
  double seed_count_factor = 0.0; // interior seeds over the integral of lfs^-3

  double leaf_center_low = 0.0;   // leaf radius over lfs(center)
  double leaf_center_high = 0.0;
  double leaf_point_low = 0.0;    // leaf radius over lfs(p) for p in the leaf
  double leaf_point_high = 0.0;

  double distance = 0.0;        // h_t eps^2
  double volume_relative = 0.0; // 3 h_t eps^2
};

/// Requires eps in (0, 0.1], sigma > 0 and delta in (0, 1/3).
ParametricBounds parametric_bounds(double eps, double sigma, double delta);

}  // namespace vorocrust
