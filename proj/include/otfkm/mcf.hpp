#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "otfkm/clifford.hpp"

namespace otfkm {

// The family M_+^β, 0 < β < π/4, moves by mean curvature with
//   cos 2β(t) = cos 2β(0) e^{4(l-m-1)t},
// reaching the singular time T where cos 2β(T) = 1.

struct FlowConfig {
  SystemPtr system;
  double beta0 = 0.0;  // in (0, π/4)
  double dt = 1e-4;
  int n_points = 200;
  std::uint64_t seed = 42;
};

/// Validates 0 < beta0 < π/4, dt > 0, n_points >= 1 and l - m - 1 >= 1.
void validate(const FlowConfig& config);

/// T = -ln(cos 2β0) / (4(l-m-1)). Empty when the flow is stationary
/// (β0 = π/4 to rounding: M_+ is minimal and never becomes singular).
std::optional<double> singular_time(double beta0, int l, int m);

/// β(t) = arccos(cos 2β0 e^{4(l-m-1)t}) / 2 for t < T; the solution is
/// ancient, so any negative t is accepted. Throws ErrorCode::domain for t >= T.
double beta_closed_form(double beta0, int l, int m, double t);

/// β as a function of the remaining time s = T - t > 0, evaluated without the
/// cancellation in cos 2β ≈ 1: 2β = arccos(e^{-4(l-m-1)s}).
double beta_from_remaining(double remaining, int l, int m);

/// dβ/dt = -2(l-m-1) cot 2β.
double beta_rate(double beta, int l, int m);

/// sup |B|^2 on M_+^β = 2m(l-m-1) + (l-m-1)(tan^2 β + cot^2 β).
double sup_norm_sq(double beta, int l, int m);

struct BetaTrajectory {
  std::vector<std::pair<double, double>> samples;  // (t, β)
  bool truncated = false;                          // t_end was pulled back to T - dt
};

/// RK4 on the scalar β equation with step config.dt from t = 0.
BetaTrajectory integrate_beta(const FlowConfig& config, double t_end);

struct FlowState {
  double time = 0.0;
  double beta = 0.0;                  // mean of the per-point recovered angles
  double singular_time = 0.0;
  std::vector<Vector> cloud;          // points of M_+^{β(t)} in R^{2l}
  std::vector<Vector> base;           // (x, y) on M_+ with |x| = |y| = 1/sqrt(2)
  bool handed_off = false;            // integration stopped at β < 0.01
  bool consistent = true;             // per-point β agree to 1e-10
  double beta_spread = 0.0;           // max - min of the per-point β
  double max_constraint_residual = 0.0;
  double max_closed_form_error = 0.0; // vs (sqrt2 cos β(t) x, sqrt2 sin β(t) y)
  double max_sphere_error = 0.0;      // | |z|^2 - 1 |
  int steps = 0;
};

/// Evolves a cloud sampled on M_+ by RK4 on dz/dt = H(z), with the mean
/// curvature field H(z) = 2(l-m-1) cot 2β (tan β u, -cot β v) for z = (u, v)
/// and β = arcsin |v|. The step is min(dt, (T - t)/64) so the grid refines
/// towards the singular time; once β < 0.01 the cloud is moved to t_end by
/// the closed form. Throws ErrorCode::integration when a point leaves
/// M_+^{β} by more than 1e-6.
FlowState flow_point_cloud(const FlowConfig& config, double t_end);

/// Angle recovered from a cloud point, arcsin |v| clamped to (0, π/4].
double recovered_beta(std::span<const double> z, int l);

/// Mean curvature vector field of the family at z = (u, v).
Vector mean_curvature_field(std::span<const double> z, int l, int m);

struct BlowupReport {
  std::vector<double> remaining;  // T - t_j = T 2^{-j}, j = 1..24
  std::vector<double> products;   // sup|B|^2(t_j) (T - t_j)
  double initial_product = 0.0;   // sup|B|^2(β0) T, the value at t = 0
  double limit = 0.0;             // two-level Richardson extrapolation in T - t
  double sup_product = 0.0;       // empirical C in sup|B|^2 <= C / (T - t)
  bool monotone = true;           // products decrease towards T
};

BlowupReport blowup_profile(const FlowConfig& config);

/// Largest distance from a cloud point to S^{l-1} × {0}.
double convergence_check(const FlowState& state);

/// CSV with header t,beta,sup_B2,product,cloud_residual; one row per sample.
/// Cloud residual is the worst constraint residual of the closed-form cloud.
std::string trajectory_csv(const FlowConfig& config, double t_end, int rows);

}  // namespace otfkm
