#pragma once

#include <span>
#include <vector>

#include "otfkm/manifold.hpp"

namespace otfkm {

/// Second fundamental form of a submanifold of S^{2l-1}(1), stored as one
/// symmetric matrix per normal direction:
///   components[α](a, b) = <B(e_a, e_b), ξ_α>,
/// with e_a the frame's tangent basis and ξ_α its normal basis. With this
/// convention <A_ξ X, Y> = <B(X, Y), ξ> and A_ξ X = -(D_X ξ)^T.
struct SecondFundamentalForm {
  Frame frame;
  std::vector<Matrix> components;

  std::size_t dim() const { return frame.tangent.size(); }
  /// H = Σ_α tr(A_α) ξ_α as an ambient vector (sphere-ambient).
  Vector mean_curvature_vector() const;
  double mean_curvature_sq() const;
  /// |B|^2 = Σ_{α,a,b} components[α](a, b)^2
  double norm_sq() const;
  /// Mean curvature vector of the submanifold viewed in R^{2l}: H - n z.
  Vector euclidean_mean_curvature() const;
  /// Shape operator matrix for an ambient vector w in the normal span:
  /// Σ_α <w, ξ_α> components[α].
  Matrix contract(std::span<const double> w) const;
  /// B(e_a, e_b) as an ambient vector.
  Vector ambient_value(std::size_t a, std::size_t b) const;
};

/// Converts a Euclidean second fundamental form value B_E(X, Y) of a
/// submanifold lying in the unit sphere into the sphere-ambient one:
///   B_S(X, Y) = B_E(X, Y) + <X, Y> z.
/// This is the single place where the two conventions meet.
Vector sphere_from_euclidean(std::span<const double> b_euclidean, double inner_xy,
                             std::span<const double> z);

/// Shape operators of M_+^t with respect to Q_0 z, ..., Q_m z, from
/// A_α X = -(Q_α X)^T. Requires a point on M_+^t.
SecondFundamentalForm analytic_shape_operators(const SurfacePoint& point);
SecondFundamentalForm analytic_shape_operators(const Frame& frame);

struct FiniteDifferenceOptions {
  double step = 1e-4;
  bool richardson = false;
};

/// Estimates B by retracting z ± h X onto the manifold and taking the normal
/// part of the central second difference; off-diagonal entries come from
/// polarisation along (e_a + e_b)/sqrt(2). Step must lie in [1e-6, 1e-2].
/// Retraction failures surface as ErrorCode::estimation.
SecondFundamentalForm numeric_second_fundamental_form(const Frame& frame,
                                                      const FiniteDifferenceOptions& options = {});
SecondFundamentalForm numeric_second_fundamental_form(const SurfacePoint& point, double fd_step);

}  // namespace otfkm
