#include "otfkm/cartan_munzner.hpp"

#include <algorithm>
#include <cmath>

#include "otfkm/error.hpp"

namespace otfkm {

FkmPolynomial::FkmPolynomial(SystemPtr system) : system_(std::move(system)) {
  if (!system_) fail(ErrorCode::domain, "FkmPolynomial needs a Clifford system");
}

double FkmPolynomial::value(std::span<const double> x) const {
  const double r2 = dot(x, x);
  double s = 0.0;
  for (const auto& p : system_->matrices()) {
    const double q = bilinear(p, x, x);
    s += q * q;
  }
  return r2 * r2 - 2.0 * s;
}

Vector FkmPolynomial::gradient(std::span<const double> x) const {
  Vector g = scaled(x, 4.0 * dot(x, x));
  for (const auto& p : system_->matrices()) {
    const Vector px = p.apply(x);
    axpy(-8.0 * dot(px, x), px, g);
  }
  return g;
}

double FkmPolynomial::laplacian(std::span<const double> x) const {
  const double r2 = dot(x, x);
  const double n = static_cast<double>(x.size());
  double lap = 4.0 * (n + 2.0) * r2;
  for (const auto& p : system_->matrices()) {
    const Vector px = p.apply(x);
    lap -= 8.0 * (2.0 * dot(px, px) + dot(px, x) * p.trace());
  }
  return lap;
}

CmIdentityReport verify_cm_identities(const FkmPolynomial& poly, int samples, std::uint64_t seed,
                                      double tol) {
  if (samples < 1) fail(ErrorCode::domain, "verify_cm_identities needs at least one sample");
  const auto n = static_cast<std::size_t>(poly.system().ambient_dim());
  const double lap_coeff = 0.5 * (poly.m2() - poly.m1()) * FkmPolynomial::g * FkmPolynomial::g;
  Rng rng(seed, 0xC0FFEE);
  CmIdentityReport rep;
  rep.samples = samples;
  for (int s = 0; s < samples; ++s) {
    const Vector x = rng.gaussian_vector(n);
    const double r2 = dot(x, x);
    const double r6 = r2 * r2 * r2;
    const Vector g = poly.gradient(x);
    rep.max_grad_residual =
        std::max(rep.max_grad_residual, std::abs(dot(g, g) - 16.0 * r6) / std::max(1.0, r6));
    rep.max_lap_residual = std::max(
        rep.max_lap_residual, std::abs(poly.laplacian(x) - lap_coeff * r2) / std::max(1.0, r2));
  }
  rep.pass = rep.max_grad_residual <= tol && rep.max_lap_residual <= tol;
  return rep;
}

}  // namespace otfkm
