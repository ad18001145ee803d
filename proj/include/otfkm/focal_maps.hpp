#pragma once

#include <cstdint>
#include <string>

#include "otfkm/shape.hpp"

namespace otfkm {

enum class FocalFamily { phi, psi };

/// phi_± : M_{i+1} -> S^{l-1}, z -> (z ± P_{i+1} z)/sqrt2, 0 <= i <= m-1.
/// psi_± : N_{i-1} -> S^{l-1}, z -> (z ± P_i z)/sqrt2, 2 <= i <= m.
/// Both land in the ±1-eigenspace of P, a copy of S^{l-1}.
struct FocalMapSpec {
  FocalFamily family = FocalFamily::phi;
  int i = 0;
  int sign = 1;
};

void validate(const FocalMapSpec& spec, const CliffordSystem& sys);

/// Matrix P_{i+1} (phi) or P_i (psi).
const Matrix& focal_matrix(const FocalMapSpec& spec, const CliffordSystem& sys);

/// Chain member the map is defined on: M_{i+1} for phi, N_{i-1} for psi.
ManifoldSpec focal_domain(const FocalMapSpec& spec, SystemPtr sys);

/// Common eigenvalue of the coordinate functions: the domain dimension,
/// 2l-i-3 for phi and l+i-2 for psi.
int focal_eigenvalue(const FocalMapSpec& spec, const CliffordSystem& sys);

/// Throws ErrorCode::domain unless point lies on focal_domain(spec).
Vector apply_focal_map(const FocalMapSpec& spec, const SurfacePoint& point);

struct EigenmapReport {
  std::string domain;            // name of the chain member used as domain
  int eigenvalue = 0;
  int expected_rank = 0;         // l - 1
  int min_rank = 0;              // smallest numeric rank of the differential
  int samples = 0;
  double max_unit_error = 0.0;        // | |phi(z)| - 1 |
  double max_eigenspace_error = 0.0;  // |P phi(z) - sign phi(z)|_inf
  double max_mean_curvature = 0.0;    // |H_eucl + n z|, numeric form
  double max_cross_inner = 0.0;       // |<phi_+(z), phi_-(z)>|
  double min_singular_value = 0.0;    // smallest nonzero singular value seen
};

EigenmapReport verify_eigenmap(const FocalMapSpec& spec, SystemPtr sys, int samples,
                               std::uint64_t seed, double fd_step = 1e-4);

}  // namespace otfkm
