#include "otfkm/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "otfkm/error.hpp"

namespace otfkm {

QIdentityReport verify_q_identities(const SurfacePoint& point) {
  const ManifoldSpec& spec = point.spec;
  if (spec.kind() != ManifoldKind::m_plus_t)
    fail(ErrorCode::domain, "the Q-orthogonality identities live on M_+^t");
  const auto& sys = spec.system();
  const double t = spec.angle();
  const double rhs = -2.0 / std::tan(2.0 * t);
  const int m = sys.m();
  const Vector& z = point.z;

  const Matrix q0 = q0_matrix(sys.l(), t);
  const Vector q0z = q0.apply(z);
  const Vector q0q0z = q0.apply(q0z);
  std::vector<Vector> qz(static_cast<std::size_t>(m + 1));
  std::vector<Vector> q0qz(static_cast<std::size_t>(m + 1));
  std::vector<Vector> qq0z(static_cast<std::size_t>(m + 1));
  for (int a = 1; a <= m; ++a) {
    const auto i = static_cast<std::size_t>(a);
    qz[i] = sys.P(a).apply(z);
    q0qz[i] = q0.apply(qz[i]);
    qq0z[i] = sys.P(a).apply(q0z);
  }

  QIdentityReport rep;
  auto& r = rep.residuals;
  r[0] = std::abs(dot(q0q0z, q0z) - rhs);
  for (int a = 1; a <= m; ++a) {
    const auto i = static_cast<std::size_t>(a);
    r[1] = std::max(r[1], std::abs(dot(qq0z[i], q0z)));
    r[2] = std::max(r[2], std::abs(dot(q0qz[i], q0z)));
    r[3] = std::max(r[3], std::abs(dot(q0q0z, qz[i])));
    for (int b = 1; b <= m; ++b) {
      const auto j = static_cast<std::size_t>(b);
      r[4] = std::max(r[4], std::abs(dot(sys.P(a).apply(qz[j]), q0z)));
      r[5] = std::max(r[5], std::abs(dot(qq0z[i], qz[j])));
      r[6] = std::max(r[6], std::abs(dot(q0qz[i], qz[j]) - (a == b ? rhs : 0.0)));
    }
  }
  rep.max_residual = *std::max_element(r.begin(), r.end());
  return rep;
}

namespace {

Vector three_level_spectrum(double low, int low_mult, int zero_mult, double high, int high_mult) {
  Vector v;
  v.insert(v.end(), static_cast<std::size_t>(low_mult), low);
  v.insert(v.end(), static_cast<std::size_t>(zero_mult), 0.0);
  v.insert(v.end(), static_cast<std::size_t>(high_mult), high);
  return v;
}

void require_angle(double t) {
  if (!(t > 0.0 && t <= std::numbers::pi / 4 + 1e-15)) fail(ErrorCode::domain, "angle must lie in (0, pi/4]");
}

}  // namespace

Vector expected_m_plus_spectrum(int l, int m, double t, int alpha) {
  const int outer = l - m - 1;
  if (alpha == 0) return three_level_spectrum(-std::tan(t), outer, m, 1.0 / std::tan(t), outer);
  return three_level_spectrum(-1.0, outer, m, 1.0, outer);
}

Vector shape_spectrum(const Matrix& shape_operator) {
  return symmetric_eigen(SymmetricMatrix(shape_operator)).values;
}

double m_plus_norm_sq(int l, int m, double t) {
  const double tn = std::tan(t);
  return 2.0 * m * (l - m - 1) + (l - m - 1) * (tn * tn + 1.0 / (tn * tn));
}

double m_plus_mean_curvature_sq(int l, int m, double t) {
  const double h = 2.0 * (l - m - 1) / std::tan(2.0 * t);
  return h * h;
}

double scalar_curvature_analytic(int l, int m, double t) {
  require_angle(t);
  const double tn = std::tan(t);
  return static_cast<double>((2 * l - m - 2) * (2 * l - m - 3)) - 2.0 * (l - m - 1) * (l - 1) +
         static_cast<double>((l - m - 1) * (l - m - 2)) * (tn * tn + 1.0 / (tn * tn));
}

double scalar_curvature_numeric(const SecondFundamentalForm& sff) {
  const auto n = static_cast<double>(sff.dim());
  return n * (n - 1.0) + sff.mean_curvature_sq() - sff.norm_sq();
}

// --- σ ---------------------------------------------------------------------------

double maximize_normal_curvature_sq(const SecondFundamentalForm& sff, Rng& rng, int starts) {
  const std::size_t n = sff.dim();
  if (n == 0) return 0.0;
  const auto& comps = sff.components;
  auto objective = [&](const Vector& x, Vector* grad) {
    double val = 0.0;
    if (grad) grad->assign(n, 0.0);
    for (const auto& a : comps) {
      const Vector ax = a.apply(x);
      const double h = dot(ax, x);
      val += h * h;
      if (grad) axpy(4.0 * h, ax, *grad);
    }
    return val;
  };

  double best = 0.0;
  for (int s = 0; s < starts; ++s) {
    Vector x = rng.unit_vector(n);
    Vector g;
    double val = objective(x, &g);
    double step = 0.5;
    for (int it = 0; it < 5000; ++it) {
      axpy(-dot(g, x), x, g);
      if (norm(g) < 1e-13) break;
      Vector trial = x;
      axpy(step, g, trial);
      trial = normalized(trial);
      Vector tg;
      const double tv = objective(trial, &tg);
      if (tv > val) {
        x = std::move(trial);
        g = std::move(tg);
        val = tv;
        step = std::min(step * 1.5, 10.0);
      } else {
        step *= 0.5;
        if (step < 1e-14) break;
        objective(x, &g);
      }
    }
    best = std::max(best, val);
  }
  return best;
}

SigmaResult sigma_extrinsic(const ManifoldSpec& spec, int restarts, std::uint64_t seed, double fd_step) {
  const bool analytic = spec.kind() == ManifoldKind::m_plus_t;
  if (analytic && std::abs(spec.angle() - std::numbers::pi / 4) > 1e-12)
    fail(ErrorCode::domain, "σ is defined here for the focal submanifolds M_+ = M_+^{pi/4} and M_-");
  if (!analytic && spec.kind() != ManifoldKind::m_minus)
    fail(ErrorCode::domain, "σ is defined here for the focal submanifolds M_+ = M_+^{pi/4} and M_-");
  if (restarts < 1) fail(ErrorCode::domain, "σ needs at least one restart");

  SigmaResult out;
  out.restarts = restarts;
  out.worst_restart = std::numeric_limits<double>::infinity();
  Rng rng(seed, 0x51C3A);
  for (int r = 0; r < restarts; ++r) {
    const SurfacePoint p = sample_point(spec, seed + 7919ULL * static_cast<std::uint64_t>(r + 1));
    const Frame f = tangent_normal_frame(p);
    const SecondFundamentalForm sff =
        analytic ? analytic_shape_operators(f) : numeric_second_fundamental_form(f, {fd_step, false});
    const double v = maximize_normal_curvature_sq(sff, rng, 1);
    out.best = std::max(out.best, v);
    out.worst_restart = std::min(out.worst_restart, v);
  }
  return out;
}

// --- isoparametric functions ---------------------------------------------------

namespace {

struct LevelFunction {
  int matrix_index;       // P index defining the function
  double lap_coefficient; // ∆f = lap_coefficient * f
};

LevelFunction chain_function(const ManifoldSpec& spec) {
  const auto& sys = spec.system();
  const int i = spec.index();
  switch (spec.kind()) {
    case ManifoldKind::m_chain:
    case ManifoldKind::level_u:
      if (i > sys.m() - 1) fail(ErrorCode::domain, "f_i needs 0 <= i <= m-1");
      return {i + 1, -4.0 * (sys.l() - i - 1)};
    case ManifoldKind::n_chain:
    case ManifoldKind::m_minus:
    case ManifoldKind::level_v:
      if (i < 2) fail(ErrorCode::domain, "g_i needs 2 <= i <= m");
      return {i, -4.0 * i};
    default:
      fail(ErrorCode::domain, "no chain function on " + spec.name());
  }
}

}  // namespace

IsoparametricReport isoparametric_identity_check(const SurfacePoint& point, double fd_step) {
  const ManifoldSpec& spec = point.spec;
  if (spec.kind() != ManifoldKind::m_chain && spec.kind() != ManifoldKind::n_chain &&
      spec.kind() != ManifoldKind::m_minus)
    fail(ErrorCode::domain, "isoparametric check runs on M_i or N_i");
  const LevelFunction fn = chain_function(spec);
  const Matrix& p = spec.system().P(fn.matrix_index);
  const Frame frame = tangent_normal_frame(point);
  const Vector& z = point.z;

  IsoparametricReport rep;
  const Vector grad_ambient = scaled(p.apply(z), 2.0);
  rep.value = 0.5 * dot(grad_ambient, z);
  const Vector grad = project(grad_ambient, frame.tangent);
  rep.gradient_sq = dot(grad, grad);
  rep.gradient_expected = 4.0 * (1.0 - rep.value * rep.value);
  rep.gradient_residual = std::abs(rep.gradient_sq - rep.gradient_expected);

  double hess_trace = 0.0;
  for (const auto& e : frame.tangent) hess_trace += 2.0 * bilinear(p, e, e);
  const SecondFundamentalForm sff = numeric_second_fundamental_form(frame, {fd_step, false});
  rep.laplacian = hess_trace + dot(grad_ambient, sff.euclidean_mean_curvature());
  rep.laplacian_expected = fn.lap_coefficient * rep.value;
  rep.laplacian_residual = std::abs(rep.laplacian - rep.laplacian_expected);
  return rep;
}

Vector level_set_spectrum(const SurfacePoint& point, double fd_step) {
  const ManifoldSpec& spec = point.spec;
  if (spec.kind() != ManifoldKind::level_u && spec.kind() != ManifoldKind::level_v)
    fail(ErrorCode::domain, "level_set_spectrum needs a U_c or V_c point");
  const LevelFunction fn = chain_function(spec);
  const Matrix& p = spec.system().P(fn.matrix_index);
  const Vector& z = point.z;
  if (std::abs(bilinear(p, z, z)) >= 1.0 - 1e-6)
    fail(ErrorCode::domain, "point is within 1e-6 of a focal set; level-set spectrum degenerates");

  const ManifoldSpec enclosing = spec.kind() == ManifoldKind::level_u
                                     ? ManifoldSpec::m_chain(spec.system_ptr(), spec.index())
                                     : ManifoldSpec::n_chain(spec.system_ptr(), spec.index());
  const Frame outer = tangent_normal_frame(make_point(enclosing, z));
  const Vector xi = normalized(project(scaled(p.apply(z), 2.0), outer.tangent));
  const SecondFundamentalForm sff = numeric_second_fundamental_form(point, fd_step);
  // Numeric components are symmetric by construction; the contraction only
  // mixes them linearly.
  return shape_spectrum(sff.contract(xi));
}

Vector expected_level_spectrum(const ManifoldSpec& spec) {
  const double c = spec.level();
  const int l = spec.system().l();
  const int i = spec.index();
  const double low = -std::sqrt((1.0 - c) / (1.0 + c));
  const double high = std::sqrt((1.0 + c) / (1.0 - c));
  if (spec.kind() == ManifoldKind::level_u) return three_level_spectrum(low, l - i - 2, i + 1, high, l - i - 2);
  if (spec.kind() == ManifoldKind::level_v) return three_level_spectrum(low, i - 1, l - i, high, i - 1);
  fail(ErrorCode::domain, "expected_level_spectrum needs a level-set spec");
}

double max_relative_second_fundamental_form(const SecondFundamentalForm& sff,
                                            const std::vector<Vector>& outer_tangent) {
  double worst = 0.0;
  for (std::size_t a = 0; a < sff.dim(); ++a)
    for (std::size_t b = a; b < sff.dim(); ++b)
      worst = std::max(worst, norm(project(sff.ambient_value(a, b), outer_tangent)));
  return worst;
}

double relative_mean_curvature(const SecondFundamentalForm& sff, const std::vector<Vector>& outer_tangent) {
  return norm(project(sff.mean_curvature_vector(), outer_tangent));
}

}  // namespace otfkm
