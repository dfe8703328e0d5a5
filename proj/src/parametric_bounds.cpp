#include "vorocrust/parametric_bounds.hpp"

#include <cmath>
#include <numbers>

#include "vorocrust/geom_core.hpp"

namespace vorocrust {

ParametricBounds parametric_bounds(double eps, double sigma, double delta) {
  if (!(eps > 0.0 && eps <= 0.1)) throw Error(ErrorCode::InvalidArgument, "parametric_bounds: eps outside (0, 0.1]");
  if (!(sigma > 0.0)) throw Error(ErrorCode::InvalidArgument, "parametric_bounds: sigma must be positive");
  if (!(delta > 0.0 && delta < 1.0 / 3.0)) {
    throw Error(ErrorCode::InvalidArgument, "parametric_bounds: delta outside (0, 1/3)");
  }
  ParametricBounds b;
  b.eps = eps;
  b.sigma = sigma;
  b.delta = delta;

  b.kappa = 2.0 / (1.0 - delta);
  b.kappa_eps = sigma * eps / (1.0 + sigma * eps);
  const double kd = b.kappa * delta;
  const double se = sigma * eps;
  b.alpha2 = b.kappa * delta * delta * delta * (2.0 + kd) / (se * se * (1.0 - kd) * (1.0 - kd));
  b.eta_s = b.kappa / (1.0 - kd);
  b.eta_t = b.eta_s + kTriangleNormalConstant;
  b.h_s_hat = 0.5 - (5.0 + 2.0 * b.eta_t) * eps;

  if (b.alpha2 < 0.25) {
    b.c_rad = 1.0 / std::sqrt(1.0 - 4.0 * b.alpha2);
    b.rho_f = *b.c_rad * (1.0 + kd);
    b.rho_f_bar = delta * *b.c_rad / (se * (1.0 - kd));
    b.min_angle = std::asin(std::min(1.0, 1.0 / (2.0 * *b.rho_f_bar)));
    b.min_altitude = 1.0 / (4.0 * *b.rho_f_bar);
    if (b.h_s_hat > 0.0) {
      b.rho_v = b.h_s_hat / (1.0 + 3.0 / (2.0 * sigma * *b.rho_f_bar));
      b.boundary_fatness =
          4.0 * (1.0 + delta) / ((1.0 - 3.0 * delta) * (1.0 - delta) * (1.0 - delta) * *b.rho_v);
    }
  }

  b.edge_ratio = kd / b.kappa_eps;
  b.elevation = std::asin(0.5 - 5.0 * eps + 2.0 * eps * eps * eps);
  b.normal_deviation = b.eta_t * delta;
  b.vertex_normal_variation = b.eta_s * delta;

  b.interior_fatness = 8.0 * std::numbers::sqrt3 * (1.0 + delta) / (1.0 - 3.0 * delta);
  b.outradius_factor = 2.0 * delta / (1.0 - 3.0 * delta);
  b.seed_count_factor = 18.0 * std::numbers::sqrt3 / std::numbers::pi / (eps * eps * eps);

  b.leaf_center_low = delta / (2.0 + delta);
  b.leaf_center_high = delta;
  b.leaf_point_low = delta / (2.0 * (1.0 + delta));
  b.leaf_point_high = delta / (1.0 - delta);

  b.distance = kDistanceConstant * eps * eps;
  b.volume_relative = 3.0 * b.distance;
  return b;
}

}  // namespace vorocrust
