#include "otfkm/focal_maps.hpp"

#include <algorithm>
#include <cmath>

#include "otfkm/error.hpp"

namespace otfkm {

void validate(const FocalMapSpec& spec, const CliffordSystem& sys) {
  if (spec.sign != 1 && spec.sign != -1) fail(ErrorCode::domain, "focal map sign must be +1 or -1");
  const int m = sys.m();
  if (spec.family == FocalFamily::phi) {
    if (spec.i < 0 || spec.i > m - 1) fail(ErrorCode::domain, "phi needs 0 <= i <= m-1");
  } else if (spec.i < 2 || spec.i > m) {
    fail(ErrorCode::domain, "psi needs 2 <= i <= m");
  }
}

const Matrix& focal_matrix(const FocalMapSpec& spec, const CliffordSystem& sys) {
  validate(spec, sys);
  return sys.P(spec.family == FocalFamily::phi ? spec.i + 1 : spec.i);
}

ManifoldSpec focal_domain(const FocalMapSpec& spec, SystemPtr sys) {
  validate(spec, *sys);
  if (spec.family == FocalFamily::phi) return ManifoldSpec::m_chain(std::move(sys), spec.i + 1);
  return ManifoldSpec::n_chain(std::move(sys), spec.i - 1);
}

int focal_eigenvalue(const FocalMapSpec& spec, const CliffordSystem& sys) {
  validate(spec, sys);
  const int l = sys.l();
  return spec.family == FocalFamily::phi ? 2 * l - spec.i - 3 : l + spec.i - 2;
}

namespace {

bool same_domain(const ManifoldSpec& a, const ManifoldSpec& b) {
  return a.kind() == b.kind() && a.index() == b.index() && &a.system() == &b.system();
}

Vector focal_image(const Matrix& p, std::span<const double> x, int sign) {
  Vector w = p.apply(x);
  for (std::size_t k = 0; k < w.size(); ++k) w[k] = (x[k] + sign * w[k]) / std::sqrt(2.0);
  return w;
}

}  // namespace

Vector apply_focal_map(const FocalMapSpec& spec, const SurfacePoint& point) {
  const auto domain = focal_domain(spec, point.spec.system_ptr());
  if (!same_domain(domain, point.spec) && domain.constraint_residual(point.z) > 1e-10)
    fail(ErrorCode::domain, "point does not lie on " + domain.name());
  return focal_image(focal_matrix(spec, point.spec.system()), point.z, spec.sign);
}

EigenmapReport verify_eigenmap(const FocalMapSpec& spec, SystemPtr sys, int samples,
                               std::uint64_t seed, double fd_step) {
  if (samples < 1) fail(ErrorCode::domain, "need at least one sample");
  const auto domain = focal_domain(spec, sys);
  const Matrix& p = focal_matrix(spec, *sys);
  EigenmapReport rep;
  rep.domain = domain.name();
  rep.eigenvalue = focal_eigenvalue(spec, *sys);
  rep.expected_rank = sys->l() - 1;
  rep.min_rank = static_cast<int>(domain.ambient_dim());
  rep.min_singular_value = INFINITY;
  rep.samples = samples;
  const double n = static_cast<double>(domain.dimension());

  for (int s = 0; s < samples; ++s) {
    const auto point = sample_point(domain, seed + 104729ULL * static_cast<std::uint64_t>(s));
    const Vector w = apply_focal_map(spec, point);
    const Vector other = focal_image(p, point.z, -spec.sign);
    rep.max_unit_error = std::max(rep.max_unit_error, std::abs(norm(w) - 1.0));
    Vector pw = p.apply(w);
    axpy(-spec.sign, w, pw);
    rep.max_eigenspace_error = std::max(rep.max_eigenspace_error, max_abs(pw));
    rep.max_cross_inner = std::max(rep.max_cross_inner, std::abs(dot(w, other)));

    const Frame frame = tangent_normal_frame(point);
    const auto sff = numeric_second_fundamental_form(frame, {fd_step, false});
    Vector h = sff.euclidean_mean_curvature();
    axpy(n, point.z, h);
    rep.max_mean_curvature = std::max(rep.max_mean_curvature, norm(h));

    // Singular values of X -> (X ± P X)/sqrt2 on the tangent space, read off
    // the augmented matrix [[0, D], [D^T, 0]] whose spectrum is ±σ.
    std::vector<Vector> images;
    for (const auto& x : frame.tangent) images.push_back(focal_image(p, x, spec.sign));
    const std::size_t d = images.size(), rows = domain.ambient_dim();
    Matrix aug(rows + d, rows + d);
    for (std::size_t b = 0; b < d; ++b)
      for (std::size_t a = 0; a < rows; ++a) {
        aug(a, rows + b) = images[b][a];
        aug(rows + b, a) = images[b][a];
      }
    const auto eig = symmetric_eigen(SymmetricMatrix(aug));
    int rank = 0;
    for (double sv : eig.values) {
      if (sv > 1e-8) {
        ++rank;
        rep.min_singular_value = std::min(rep.min_singular_value, sv);
      }
    }
    rep.min_rank = std::min(rep.min_rank, rank);
  }
  return rep;
}

}  // namespace otfkm
