#include "otfkm/mcf.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <sstream>

#include "otfkm/error.hpp"
#include "otfkm/manifold.hpp"

namespace otfkm {

namespace {

constexpr double kQuarterPi = std::numbers::pi / 4;
constexpr double kHandoffBeta = 0.01;
constexpr double kDriftLimit = 1e-6;
constexpr int kBlowupLevels = 24;

int flow_rate(int l, int m) {
  const int n = l - m - 1;
  if (n < 1) fail(ErrorCode::domain, "mean curvature flow needs l - m - 1 >= 1");
  return n;
}

void require_angle(double beta0) {
  if (!(beta0 > 0.0 && beta0 <= kQuarterPi))
    fail(ErrorCode::domain, "beta0 must lie in (0, pi/4]");
}

/// Point of M_+^β over the base (x, y) of M_+ (|x| = |y| = 1/sqrt2).
Vector place(const Vector& base, std::size_t l, double beta) {
  Vector z(base.size());
  const double c = std::sqrt(2.0) * std::cos(beta);
  const double s = std::sqrt(2.0) * std::sin(beta);
  for (std::size_t i = 0; i < l; ++i) {
    z[i] = c * base[i];
    z[l + i] = s * base[l + i];
  }
  return z;
}

struct CloudDiagnostics {
  double mean_beta = 0.0;
  double spread = 0.0;
  double residual = 0.0;
  double closed_form_error = 0.0;
  double sphere_error = 0.0;
};

CloudDiagnostics diagnose(const ManifoldSpec& mplus, const std::vector<Vector>& cloud,
                          const std::vector<Vector>& base, int l, double beta_exact) {
  CloudDiagnostics d;
  double lo = kQuarterPi, hi = 0.0;
  for (const auto& z : cloud) {
    const double b = recovered_beta(z, l);
    lo = std::min(lo, b);
    hi = std::max(hi, b);
    d.mean_beta += b;
  }
  d.mean_beta /= static_cast<double>(cloud.size());
  d.spread = hi - lo;
  const auto spec = ManifoldSpec::m_plus_t(mplus.system_ptr(), d.mean_beta);
  for (std::size_t j = 0; j < cloud.size(); ++j) {
    const auto& z = cloud[j];
    d.residual = std::max(d.residual, spec.constraint_residual(z));
    d.sphere_error = std::max(d.sphere_error, std::abs(dot(z, z) - 1.0));
    const Vector exact = place(base[j], static_cast<std::size_t>(l), beta_exact);
    d.closed_form_error = std::max(d.closed_form_error, max_abs(subtract(z, exact)));
  }
  return d;
}

}  // namespace

void validate(const FlowConfig& config) {
  if (!config.system) fail(ErrorCode::domain, "flow config has no Clifford system");
  flow_rate(config.system->l(), config.system->m());
  if (!(config.beta0 > 0.0 && config.beta0 < kQuarterPi))
    fail(ErrorCode::domain, "beta0 must lie in (0, pi/4)");
  if (!(config.dt > 0.0)) fail(ErrorCode::domain, "dt must be positive");
  if (config.n_points < 1) fail(ErrorCode::domain, "cloud needs at least one point");
}

std::optional<double> singular_time(double beta0, int l, int m) {
  require_angle(beta0);
  const int n = flow_rate(l, m);
  const double c = std::cos(2.0 * beta0);
  if (c < 1e-15) return std::nullopt;
  return -std::log(c) / (4.0 * n);
}

double beta_closed_form(double beta0, int l, int m, double t) {
  const auto T = singular_time(beta0, l, m);
  if (!T) return kQuarterPi;
  if (!(t < *T)) fail(ErrorCode::domain, "beta is only defined before the singular time");
  return beta_from_remaining(*T - t, l, m);
}

double beta_from_remaining(double remaining, int l, int m) {
  if (!(remaining > 0.0)) fail(ErrorCode::domain, "remaining time must be positive");
  const double y = 4.0 * flow_rate(l, m) * remaining;
  // sin 2β = sqrt(1 - e^{-2y}) keeps full relative precision as β -> 0.
  return 0.5 * std::asin(std::sqrt(-std::expm1(-2.0 * y)));
}

double beta_rate(double beta, int l, int m) {
  return -2.0 * flow_rate(l, m) / std::tan(2.0 * beta);
}

double sup_norm_sq(double beta, int l, int m) {
  const int n = flow_rate(l, m);
  const double tn = std::tan(beta);
  return 2.0 * m * n + n * (tn * tn + 1.0 / (tn * tn));
}

BetaTrajectory integrate_beta(const FlowConfig& config, double t_end) {
  validate(config);
  const int l = config.system->l(), m = config.system->m();
  const double T = *singular_time(config.beta0, l, m);
  BetaTrajectory out;
  if (!(t_end > 0.0)) fail(ErrorCode::domain, "t_end must be positive");
  if (t_end >= T - config.dt) {
    t_end = T - config.dt;
    out.truncated = true;
    if (!(t_end > 0.0)) fail(ErrorCode::domain, "dt is larger than the singular time");
  }
  const VectorField f = [l, m](double, std::span<const double> y) {
    return Vector{beta_rate(y[0], l, m)};
  };
  for (const auto& s : rk4_integrate(f, Vector{config.beta0}, 0.0, t_end, config.dt))
    out.samples.emplace_back(s.t, s.y[0]);
  return out;
}

double recovered_beta(std::span<const double> z, int l) {
  const double v = norm(z.subspan(static_cast<std::size_t>(l)));
  return std::clamp(std::asin(std::min(v, 1.0)), 1e-300, kQuarterPi);
}

Vector mean_curvature_field(std::span<const double> z, int l, int m) {
  const auto L = static_cast<std::size_t>(l);
  const double beta = recovered_beta(z, l);
  const double k = 2.0 * flow_rate(l, m) / std::tan(2.0 * beta);
  const double tb = std::tan(beta);
  Vector h(z.size());
  for (std::size_t i = 0; i < L; ++i) {
    h[i] = k * tb * z[i];
    h[L + i] = -k / tb * z[L + i];
  }
  return h;
}

FlowState flow_point_cloud(const FlowConfig& config, double t_end) {
  validate(config);
  const int l = config.system->l(), m = config.system->m();
  const double T = *singular_time(config.beta0, l, m);
  if (!(t_end >= 0.0 && t_end < T)) fail(ErrorCode::domain, "t_end must lie in [0, T)");

  const auto mplus = ManifoldSpec::m_plus_t(config.system, kQuarterPi);
  FlowState st;
  st.singular_time = T;
  for (int j = 0; j < config.n_points; ++j) {
    const auto p = sample_point(mplus, config.seed + static_cast<std::uint64_t>(j) * 0x9E3779B9ULL);
    st.base.push_back(p.z);
    st.cloud.push_back(place(p.z, static_cast<std::size_t>(l), config.beta0));
  }

  const VectorField field = [l, m](double, std::span<const double> z) {
    return mean_curvature_field(z, l, m);
  };
  double t = 0.0;
  while (t < t_end) {
    const double beta_now = recovered_beta(st.cloud.front(), l);
    if (beta_now < kHandoffBeta) {
      st.handed_off = true;
      break;
    }
    double h = std::min({config.dt, (T - t) / 64.0, t_end - t});
    if (t_end - t - h < 1e-15 * T) h = t_end - t;
    for (auto& z : st.cloud) {
      z = rk4_step(field, t, z, h);
      for (double v : z)
        if (!std::isfinite(v)) fail(ErrorCode::integration, "cloud point became non-finite");
    }
    t += h;
    ++st.steps;
    if (st.steps % 64 == 0 || t >= t_end) {
      const auto d = diagnose(mplus, st.cloud, st.base, l, beta_closed_form(config.beta0, l, m, t));
      if (d.residual > kDriftLimit)
        fail(ErrorCode::integration, "cloud drifted off M_+^beta (residual " + std::to_string(d.residual) + ")");
    }
  }
  if (st.handed_off) {
    const double beta_end = beta_closed_form(config.beta0, l, m, t_end);
    for (std::size_t j = 0; j < st.cloud.size(); ++j)
      st.cloud[j] = place(st.base[j], static_cast<std::size_t>(l), beta_end);
    t = t_end;
  }
  st.time = t_end;
  const double exact = t_end > 0.0 ? beta_closed_form(config.beta0, l, m, t_end) : config.beta0;
  const auto d = diagnose(mplus, st.cloud, st.base, l, exact);
  if (d.residual > kDriftLimit)
    fail(ErrorCode::integration, "cloud drifted off M_+^beta (residual " + std::to_string(d.residual) + ")");
  st.beta = d.mean_beta;
  st.beta_spread = d.spread;
  st.consistent = d.spread <= 1e-10;
  st.max_constraint_residual = d.residual;
  st.max_closed_form_error = d.closed_form_error;
  st.max_sphere_error = d.sphere_error;
  return st;
}

BlowupReport blowup_profile(const FlowConfig& config) {
  validate(config);
  const int l = config.system->l(), m = config.system->m();
  const double T = *singular_time(config.beta0, l, m);
  BlowupReport r;
  r.initial_product = sup_norm_sq(config.beta0, l, m) * T;
  r.sup_product = r.initial_product;
  for (int j = 1; j <= kBlowupLevels; ++j) {
    const double s = std::ldexp(T, -j);
    const double p = sup_norm_sq(beta_from_remaining(s, l, m), l, m) * s;
    if (!r.products.empty() && p > r.products.back()) r.monotone = false;
    r.remaining.push_back(s);
    r.products.push_back(p);
    r.sup_product = std::max(r.sup_product, p);
  }
  // p(s) = 1/2 + a s + b s^2 + ...; eliminate the s and s^2 terms.
  const std::size_t n = r.products.size();
  const double p0 = r.products[n - 3], p1 = r.products[n - 2], p2 = r.products[n - 1];
  const double r1 = 2.0 * p1 - p0, r2 = 2.0 * p2 - p1;
  r.limit = (4.0 * r2 - r1) / 3.0;
  return r;
}

double convergence_check(const FlowState& state) {
  double worst = 0.0;
  for (const auto& z : state.cloud) {
    const std::size_t l = z.size() / 2;
    const std::span<const double> u(z.data(), l), v(z.data() + l, l);
    const double nu = norm(u);
    double d2 = dot(v, v);
    for (std::size_t i = 0; i < l; ++i) {
      const double e = u[i] - u[i] / nu;
      d2 += e * e;
    }
    worst = std::max(worst, std::sqrt(d2));
  }
  return worst;
}

std::string trajectory_csv(const FlowConfig& config, double t_end, int rows) {
  validate(config);
  if (rows < 2) fail(ErrorCode::domain, "trajectory needs at least two rows");
  const int l = config.system->l(), m = config.system->m();
  const double T = *singular_time(config.beta0, l, m);
  if (!(t_end > 0.0 && t_end < T)) fail(ErrorCode::domain, "t_end must lie in (0, T)");
  const auto mplus = ManifoldSpec::m_plus_t(config.system, kQuarterPi);
  std::vector<Vector> base;
  for (int j = 0; j < config.n_points; ++j)
    base.push_back(sample_point(mplus, config.seed + static_cast<std::uint64_t>(j) * 0x9E3779B9ULL).z);

  std::ostringstream os;
  os << "t,beta,sup_B2,product,cloud_residual\n";
  char line[256];
  for (int r = 0; r < rows; ++r) {
    const double t = t_end * r / (rows - 1);
    const double beta = beta_closed_form(config.beta0, l, m, t);
    const double sup = sup_norm_sq(beta, l, m);
    const auto spec = ManifoldSpec::m_plus_t(config.system, beta);
    double res = 0.0;
    for (const auto& b : base)
      res = std::max(res, spec.constraint_residual(place(b, static_cast<std::size_t>(l), beta)));
    std::snprintf(line, sizeof line, "%.17g,%.17g,%.17g,%.17g,%.17g\n", t, beta, sup, sup * (T - t), res);
    os << line;
  }
  return os.str();
}

}  // namespace otfkm
