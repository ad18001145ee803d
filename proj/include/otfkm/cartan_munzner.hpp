#pragma once

#include <cstdint>
#include <span>

#include "otfkm/clifford.hpp"

namespace otfkm {

/// F(x) = |x|^4 - 2 Σ_a <P_a x, x>^2 on R^{2l}, the g = 4 Cartan-Münzner
/// polynomial of the family with multiplicities (m, l - m - 1).
class FkmPolynomial {
 public:
  static constexpr int g = 4;

  explicit FkmPolynomial(SystemPtr system);

  const CliffordSystem& system() const { return *system_; }
  int m1() const { return system_->m1(); }
  int m2() const { return system_->m2(); }
  /// Representable but not an isoparametric family with four curvatures.
  bool degenerate() const { return system_->degenerate(); }

  double value(std::span<const double> x) const;
  /// 4|x|^2 x - 8 Σ <P_a x, x> P_a x
  Vector gradient(std::span<const double> x) const;
  /// Trace of the Hessian assembled from the matrices:
  ///   4(2l + 2)|x|^2 - 8 Σ_a (2|P_a x|^2 + <P_a x, x> tr P_a),
  /// which reduces to 8(l - 2m - 1)|x|^2 for a Clifford system.
  double laplacian(std::span<const double> x) const;

 private:
  SystemPtr system_;
};

struct CmIdentityReport {
  double max_grad_residual = 0.0;  // | |∇F|^2 - 16|x|^6 | / max(1, |x|^6)
  double max_lap_residual = 0.0;   // | ∆F - (m2 - m1)/2 * 16 |x|^2 | / max(1, |x|^2)
  int samples = 0;
  bool pass = false;
};

/// Checks both Münzner identities at `samples` standard Gaussian points.
CmIdentityReport verify_cm_identities(const FkmPolynomial& poly, int samples, std::uint64_t seed,
                                      double tol);

}  // namespace otfkm
