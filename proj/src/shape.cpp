#include "otfkm/shape.hpp"

#include <cmath>

#include "otfkm/error.hpp"

namespace otfkm {

Vector SecondFundamentalForm::mean_curvature_vector() const {
  Vector h(frame.point.z.size(), 0.0);
  for (std::size_t a = 0; a < components.size(); ++a) axpy(components[a].trace(), frame.normal[a], h);
  return h;
}

double SecondFundamentalForm::mean_curvature_sq() const {
  double s = 0.0;
  for (const auto& c : components) s += c.trace() * c.trace();
  return s;
}

double SecondFundamentalForm::norm_sq() const {
  double s = 0.0;
  for (const auto& c : components) s += dot(c.data(), c.data());
  return s;
}

Vector SecondFundamentalForm::euclidean_mean_curvature() const {
  Vector h = mean_curvature_vector();
  axpy(-static_cast<double>(dim()), frame.point.z, h);
  return h;
}

Matrix SecondFundamentalForm::contract(std::span<const double> w) const {
  Matrix a(dim(), dim());
  for (std::size_t k = 0; k < components.size(); ++k) a += dot(w, frame.normal[k]) * components[k];
  return a;
}

Vector SecondFundamentalForm::ambient_value(std::size_t a, std::size_t b) const {
  Vector v(frame.point.z.size(), 0.0);
  for (std::size_t k = 0; k < components.size(); ++k) axpy(components[k](a, b), frame.normal[k], v);
  return v;
}

Vector sphere_from_euclidean(std::span<const double> b_euclidean, double inner_xy,
                             std::span<const double> z) {
  Vector b(b_euclidean.begin(), b_euclidean.end());
  axpy(inner_xy, z, b);
  return b;
}

SecondFundamentalForm analytic_shape_operators(const Frame& frame) {
  const ManifoldSpec& spec = frame.point.spec;
  if (spec.kind() != ManifoldKind::m_plus_t)
    fail(ErrorCode::domain, "analytic shape operators are only available on M_+^t");
  const auto& sys = spec.system();
  SecondFundamentalForm sff{frame, {}};
  for (int alpha = 0; alpha <= sys.m(); ++alpha) {
    const Matrix q = alpha == 0 ? q0_matrix(sys.l(), spec.angle()) : sys.P(alpha);
    sff.components.push_back(-1.0 * restrict_form(q, frame.tangent));
  }
  return sff;
}

SecondFundamentalForm analytic_shape_operators(const SurfacePoint& point) {
  return analytic_shape_operators(tangent_normal_frame(point));
}

namespace {

/// Sphere-ambient value of B(X, X) for unit X, from a central second
/// difference of the retracted line z + s X.
Vector second_difference(const ManifoldSpec& spec, std::span<const double> z, std::span<const double> x,
                         double h) {
  Vector plus(z.begin(), z.end());
  Vector minus(z.begin(), z.end());
  axpy(h, x, plus);
  axpy(-h, x, minus);
  Vector rp, rm;
  try {
    rp = spec.retract(plus);
    rm = spec.retract(minus);
  } catch (const Error& e) {
    fail(ErrorCode::estimation, std::string("second fundamental form estimate failed: ") + e.what());
  }
  Vector d(z.size());
  for (std::size_t k = 0; k < z.size(); ++k) d[k] = ((rp[k] - z[k]) + (rm[k] - z[k])) / (h * h);
  return sphere_from_euclidean(d, dot(x, x), z);
}

Vector diff_quotient(const ManifoldSpec& spec, std::span<const double> z, std::span<const double> x,
                     const FiniteDifferenceOptions& opts) {
  Vector d = second_difference(spec, z, x, opts.step);
  if (!opts.richardson) return d;
  const Vector half = second_difference(spec, z, x, 0.5 * opts.step);
  for (std::size_t k = 0; k < d.size(); ++k) d[k] = (4.0 * half[k] - d[k]) / 3.0;
  return d;
}

}  // namespace

SecondFundamentalForm numeric_second_fundamental_form(const Frame& frame,
                                                      const FiniteDifferenceOptions& options) {
  if (!(options.step >= 1e-6 && options.step <= 1e-2))
    fail(ErrorCode::domain, "finite-difference step must lie in [1e-6, 1e-2]");
  const ManifoldSpec& spec = frame.point.spec;
  const Vector& z = frame.point.z;
  const std::size_t n = frame.tangent.size();
  const std::size_t p = frame.normal.size();

  std::vector<Vector> diag(n);
  for (std::size_t a = 0; a < n; ++a) diag[a] = diff_quotient(spec, z, frame.tangent[a], options);

  SecondFundamentalForm sff{frame, std::vector<Matrix>(p, Matrix(n, n))};
  for (std::size_t k = 0; k < p; ++k)
    for (std::size_t a = 0; a < n; ++a) sff.components[k](a, a) = dot(diag[a], frame.normal[k]);

  const double r = 1.0 / std::sqrt(2.0);
  for (std::size_t a = 0; a < n; ++a) {
    for (std::size_t b = a + 1; b < n; ++b) {
      Vector u = scaled(frame.tangent[a], r);
      axpy(r, frame.tangent[b], u);
      const Vector d = diff_quotient(spec, z, u, options);
      // B(u, u) = (B_aa + B_bb)/2 + B_ab for u = (e_a + e_b)/sqrt(2).
      for (std::size_t k = 0; k < p; ++k) {
        auto& c = sff.components[k];
        const double v = dot(d, frame.normal[k]) - 0.5 * (c(a, a) + c(b, b));
        c(a, b) = v;
        c(b, a) = v;
      }
    }
  }
  return sff;
}

SecondFundamentalForm numeric_second_fundamental_form(const SurfacePoint& point, double fd_step) {
  return numeric_second_fundamental_form(tangent_normal_frame(point), FiniteDifferenceOptions{fd_step, false});
}

}  // namespace otfkm
