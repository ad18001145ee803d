#include "otfkm/manifold.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include "otfkm/error.hpp"

namespace otfkm {

namespace {

constexpr double kUnitTol = 1e-12;
constexpr double kConstraintTol = 1e-10;
constexpr int kSampleRetries = 10;

void require_geometric(const SystemPtr& sys) {
  if (!sys) fail(ErrorCode::domain, "manifold needs a Clifford system");
  if (sys->degenerate())
    fail(ErrorCode::domain, "geometry requires l - m - 1 > 0 (got m = " + std::to_string(sys->m()) +
                                ", l = " + std::to_string(sys->l()) + ")");
}

void require_range(int i, int lo, int hi, const char* what) {
  if (i < lo || i > hi)
    fail(ErrorCode::domain, std::string(what) + " index " + std::to_string(i) + " outside [" +
                                std::to_string(lo) + ", " + std::to_string(hi) + "]");
}

void require_open_level(double c) {
  if (!(c > -1.0 && c < 1.0)) fail(ErrorCode::domain, "level value must lie in (-1, 1)");
}

}  // namespace

Matrix q0_matrix(int l, double t) {
  const auto n = static_cast<std::size_t>(l);
  Matrix q(2 * n, 2 * n);
  const double a = std::tan(t);
  const double b = 1.0 / std::tan(t);
  for (std::size_t i = 0; i < n; ++i) {
    q(i, i) = a;
    q(n + i, n + i) = -b;
  }
  return q;
}

ManifoldSpec::ManifoldSpec(ManifoldKind kind, SystemPtr sys, int index, double level, double angle,
                           int sign)
    : kind_(kind), system_(std::move(sys)), index_(index), level_(level), angle_(angle), sign_(sign) {
  build_constraints();
}

ManifoldSpec ManifoldSpec::m_chain(SystemPtr sys, int i) {
  require_geometric(sys);
  require_range(i, 0, sys->m(), "M-chain");
  return ManifoldSpec(ManifoldKind::m_chain, std::move(sys), i, 0.0, 0.0, 1);
}

ManifoldSpec ManifoldSpec::n_chain(SystemPtr sys, int i) {
  require_geometric(sys);
  require_range(i, 1, sys->m(), "N-chain");
  return ManifoldSpec(ManifoldKind::n_chain, std::move(sys), i, 0.0, 0.0, 1);
}

ManifoldSpec ManifoldSpec::m_plus_t(SystemPtr sys, double t) {
  require_geometric(sys);
  if (!(t > 0.0 && t <= std::numbers::pi / 4 + 1e-15))
    fail(ErrorCode::domain, "M_+^t requires 0 < t <= pi/4");
  return ManifoldSpec(ManifoldKind::m_plus_t, std::move(sys), 0, 0.0, std::min(t, std::numbers::pi / 4), 1);
}

ManifoldSpec ManifoldSpec::m_minus(SystemPtr sys) {
  require_geometric(sys);
  const int m = sys->m();
  return ManifoldSpec(ManifoldKind::m_minus, std::move(sys), m, 0.0, 0.0, 1);
}

ManifoldSpec ManifoldSpec::level_u(SystemPtr sys, int i, double c) {
  require_geometric(sys);
  require_range(i, 0, sys->m() - 1, "U level set");
  require_open_level(c);
  return ManifoldSpec(ManifoldKind::level_u, std::move(sys), i, c, 0.0, 1);
}

ManifoldSpec ManifoldSpec::level_v(SystemPtr sys, int i, double c) {
  require_geometric(sys);
  require_range(i, 2, sys->m(), "V level set");
  require_open_level(c);
  return ManifoldSpec(ManifoldKind::level_v, std::move(sys), i, c, 0.0, 1);
}

ManifoldSpec ManifoldSpec::focal_u(SystemPtr sys, int i, int sign) {
  require_geometric(sys);
  require_range(i, 0, sys->m() - 1, "focal set");
  if (sign != 1 && sign != -1) fail(ErrorCode::domain, "focal set sign must be +1 or -1");
  return ManifoldSpec(ManifoldKind::focal_u, std::move(sys), i, sign, 0.0, sign);
}

void ManifoldSpec::build_constraints() {
  auto list = std::make_shared<std::vector<Quadratic>>();
  switch (kind_) {
    case ManifoldKind::m_chain:
      for (int j = 0; j <= index_; ++j) list->push_back({system_->P(j), 0.0});
      break;
    case ManifoldKind::m_plus_t:
      list->push_back({q0_matrix(system_->l(), angle_), 0.0});
      for (int a = 1; a <= system_->m(); ++a) list->push_back({system_->P(a), 0.0});
      break;
    case ManifoldKind::level_u:
      for (int j = 0; j <= index_; ++j) list->push_back({system_->P(j), 0.0});
      list->push_back({system_->P(index_ + 1), level_});
      break;
    default:
      break;
  }
  constraints_ = std::move(list);
}

int ManifoldSpec::dimension() const {
  const int l = system_->l();
  const int m = system_->m();
  switch (kind_) {
    case ManifoldKind::m_chain: return 2 * l - 2 - index_;
    case ManifoldKind::n_chain: return l + index_ - 1;
    case ManifoldKind::m_plus_t: return 2 * l - m - 2;
    case ManifoldKind::m_minus: return l + m - 1;
    case ManifoldKind::level_u: return 2 * l - 3 - index_;
    case ManifoldKind::level_v: return l + index_ - 2;
    case ManifoldKind::focal_u: return l - 1;
  }
  return 0;
}

std::string ManifoldSpec::name() const {
  std::ostringstream os;
  switch (kind_) {
    case ManifoldKind::m_chain: os << "M_" << index_; break;
    case ManifoldKind::n_chain: os << "N_" << index_; break;
    case ManifoldKind::m_plus_t: os << "M_+^t(t=" << angle_ << ")"; break;
    case ManifoldKind::m_minus: os << "M_-"; break;
    case ManifoldKind::level_u: os << "U_c(i=" << index_ << ",c=" << level_ << ")"; break;
    case ManifoldKind::level_v: os << "V_c(i=" << index_ << ",c=" << level_ << ")"; break;
    case ManifoldKind::focal_u: os << "U_" << (sign_ > 0 ? "+1" : "-1") << "(i=" << index_ << ")"; break;
  }
  return os.str();
}

std::vector<Vector> ManifoldSpec::constraint_gradients(std::span<const double> z) const {
  std::vector<Vector> grads;
  for (const auto& q : *constraints_) grads.push_back(scaled(q.form.apply(z), 2.0));
  return grads;
}

Vector ManifoldSpec::eigen_coefficients(std::span<const double> z) const {
  const int count = index_ + 1;
  Vector a = system_->quadratic_forms(z, count);
  if (kind_ == ManifoldKind::level_v) {
    // Pin the last coefficient to the level and rescale the others onto the
    // circle of radius sqrt(1 - c^2).
    Vector head(a.begin(), a.end() - 1);
    const double nh = norm(head);
    if (!(nh > 1e-14)) fail(ErrorCode::projection, "V_c retraction is undefined at this point");
    head = scaled(head, std::sqrt(1.0 - level_ * level_) / nh);
    head.push_back(level_);
    return head;
  }
  const double na = norm(a);
  if (!(na > 1e-14)) fail(ErrorCode::projection, "N_i retraction is undefined at this point");
  return scaled(a, 1.0 / na);
}

Vector ManifoldSpec::retract_eigenspace(std::span<const double> z) const {
  Vector w(z.begin(), z.end());
  if (kind_ == ManifoldKind::focal_u) {
    axpy(static_cast<double>(sign_), system_->P(index_ + 1).apply(z), w);
  } else {
    const Vector c = eigen_coefficients(z);
    axpy(1.0, unit_combination(*system_, c).apply(z), w);
  }
  return normalized(w);
}

Vector ManifoldSpec::retract(std::span<const double> z) const {
  if (!has_quadratic_constraints()) return retract_eigenspace(z);
  const auto& cons = *constraints_;
  const std::size_t n = ambient_dim();
  ConstraintFn fn = [&cons, n](std::span<const double> x) {
    ConstraintEval e;
    e.residual.resize(cons.size() + 1);
    e.jacobian = Matrix(cons.size() + 1, n);
    e.residual[0] = dot(x, x) - 1.0;
    for (std::size_t k = 0; k < n; ++k) e.jacobian(0, k) = 2.0 * x[k];
    for (std::size_t c = 0; c < cons.size(); ++c) {
      const Vector mx = cons[c].form.apply(x);
      e.residual[c + 1] = dot(mx, x) - cons[c].target;
      for (std::size_t k = 0; k < n; ++k) e.jacobian(c + 1, k) = 2.0 * mx[k];
    }
    return e;
  };
  ProjectionOptions opts;
  opts.tol = 1e-12;
  opts.max_iter = 100;
  opts.polish_steps = 3;
  return newton_project(Vector(z.begin(), z.end()), fn, opts).z;
}

double ManifoldSpec::constraint_residual(std::span<const double> z) const {
  double res = std::abs(norm(z) - 1.0);
  if (has_quadratic_constraints()) {
    for (const auto& q : *constraints_) res = std::max(res, std::abs(bilinear(q.form, z, z) - q.target));
    return res;
  }
  Vector pz;
  if (kind_ == ManifoldKind::focal_u) {
    pz = scaled(system_->P(index_ + 1).apply(z), static_cast<double>(sign_));
  } else {
    const Vector c = eigen_coefficients(z);
    pz = unit_combination(*system_, c).apply(z);
    if (kind_ == ManifoldKind::level_v)
      res = std::max(res, std::abs(bilinear(system_->P(index_), z, z) - level_));
  }
  return std::max(res, max_abs(subtract(pz, z)));
}

SurfacePoint make_point(const ManifoldSpec& spec, Vector z) {
  if (z.size() != spec.ambient_dim()) fail(ErrorCode::dimension, "point has wrong ambient dimension");
  if (std::abs(norm(z) - 1.0) >= kUnitTol)
    fail(ErrorCode::domain, "point is not on the unit sphere to 1e-12");
  const double res = spec.constraint_residual(z);
  if (!(res < kConstraintTol))
    fail(ErrorCode::domain, "point violates the equations of " + spec.name() + " (residual " +
                                std::to_string(res) + ")");
  return SurfacePoint{spec, std::move(z), res};
}

namespace {

Vector eigenspace_draw(const ManifoldSpec& spec, Rng& rng, std::span<const double> coeffs) {
  const Matrix pc = unit_combination(spec.system(), coeffs);
  for (;;) {
    Vector g = rng.gaussian_vector(spec.ambient_dim());
    Vector w = add(g, pc.apply(g));
    if (norm(w) > 1e-6) return normalized(w);
  }
}

Vector sample_m_plus_t(const ManifoldSpec& spec, Rng& rng) {
  const auto& sys = spec.system();
  const auto l = static_cast<std::size_t>(sys.l());
  const Vector x = rng.unit_vector(l);
  std::vector<Vector> excluded{x};
  for (const auto& e : sys.skew_source().generators) excluded.push_back(e.apply(x));
  // x, E_1 x, ..., E_{m-1} x are orthonormal; y is drawn from their complement.
  Vector y;
  do {
    y = reject(rng.gaussian_vector(l), excluded);
  } while (norm(y) < 1e-6);
  y = normalized(y);
  const double t = spec.angle();
  Vector z(2 * l);
  for (std::size_t i = 0; i < l; ++i) {
    z[i] = std::cos(t) * x[i];
    z[l + i] = std::sin(t) * y[i];
  }
  return z;
}

}  // namespace

SurfacePoint sample_point(const ManifoldSpec& spec, std::uint64_t seed) {
  Rng rng(seed, 0x5A3D1E);
  const std::size_t n = spec.ambient_dim();
  switch (spec.kind()) {
    case ManifoldKind::m_plus_t:
      return make_point(spec, sample_m_plus_t(spec, rng));
    case ManifoldKind::n_chain:
    case ManifoldKind::m_minus: {
      const Vector c = rng.unit_vector(static_cast<std::size_t>(spec.index() + 1));
      return make_point(spec, eigenspace_draw(spec, rng, c));
    }
    case ManifoldKind::level_v: {
      const auto i = static_cast<std::size_t>(spec.index());
      Vector c = scaled(rng.unit_vector(i), std::sqrt(1.0 - spec.level() * spec.level()));
      c.push_back(spec.level());
      return make_point(spec, eigenspace_draw(spec, rng, c));
    }
    case ManifoldKind::focal_u: {
      Vector c(static_cast<std::size_t>(spec.index() + 2), 0.0);
      c.back() = static_cast<double>(spec.sign());
      return make_point(spec, eigenspace_draw(spec, rng, c));
    }
    case ManifoldKind::m_chain:
    case ManifoldKind::level_u:
      break;
  }
  std::string last_error;
  for (int attempt = 0; attempt < kSampleRetries; ++attempt) {
    try {
      Vector z = spec.retract(rng.unit_vector(n));
      return make_point(spec, std::move(z));
    } catch (const Error& e) {
      last_error = e.what();
    }
  }
  fail(ErrorCode::sampling, "could not sample " + spec.name() + " after " +
                                std::to_string(kSampleRetries) + " draws: " + last_error);
}

namespace {

std::vector<Vector> eigenspace_columns(const Matrix& p, int sign) {
  const std::size_t n = p.rows();
  std::vector<Vector> cols;
  for (std::size_t j = 0; j < n; ++j) {
    Vector c = scaled(p.column(j), 0.5 * sign);
    c[j] += 0.5;
    cols.push_back(std::move(c));
  }
  return cols;
}

std::vector<Vector> n_chain_tangent(const SystemPtr& sys, int i, std::span<const double> z) {
  Vector a = sys->quadratic_forms(z, i + 1);
  a = scaled(a, 1.0 / norm(a));
  const Matrix pc = unit_combination(*sys, a);
  const std::vector<Vector> zset{Vector(z.begin(), z.end())};
  const auto l = static_cast<std::size_t>(sys->l());
  // Directions inside the eigenspace sphere, then the directions P_d z moving
  // the coefficient vector along S^i.
  std::vector<Vector> tangent = span_basis(eigenspace_columns(pc, 1), zset, 1e-8, l - 1);
  std::vector<Vector> moves;
  for (int j = 0; j <= i; ++j) moves.push_back(sys->P(j).apply(z));
  std::vector<Vector> against = tangent;
  against.push_back(zset.front());
  for (auto& v : span_basis(moves, against, 1e-8, static_cast<std::size_t>(i))) tangent.push_back(std::move(v));
  return tangent;
}

}  // namespace

Frame tangent_normal_frame(const SurfacePoint& point) {
  const ManifoldSpec& spec = point.spec;
  const auto& sys = spec.system_ptr();
  const std::size_t n = spec.ambient_dim();
  const Vector& z = point.z;
  const std::vector<Vector> zset{z};
  Frame frame{point, {}, {}};

  switch (spec.kind()) {
    case ManifoldKind::m_plus_t: {
      frame.normal.push_back(q0_matrix(sys->l(), spec.angle()).apply(z));
      for (int a = 1; a <= sys->m(); ++a) frame.normal.push_back(sys->P(a).apply(z));
      std::vector<Vector> used = frame.normal;
      used.push_back(z);
      frame.tangent = orthogonal_complement(used, n);
      break;
    }
    case ManifoldKind::m_chain:
    case ManifoldKind::level_u: {
      const auto grads = spec.constraint_gradients(z);
      frame.normal = span_basis(grads, zset, 1e-8);
      if (frame.normal.size() != grads.size())
        fail(ErrorCode::frame, "constraint gradients of " + spec.name() +
                                   " are dependent; point is not regular");
      std::vector<Vector> used = frame.normal;
      used.push_back(z);
      frame.tangent = orthogonal_complement(used, n);
      break;
    }
    case ManifoldKind::n_chain:
    case ManifoldKind::m_minus:
      frame.tangent = n_chain_tangent(sys, spec.index(), z);
      break;
    case ManifoldKind::level_v: {
      const std::vector<Vector> ambient = n_chain_tangent(sys, spec.index(), z);
      const Vector grad = project(scaled(sys->P(spec.index()).apply(z), 2.0), ambient);
      if (norm(grad) < 1e-8) fail(ErrorCode::frame, "level function has no gradient here");
      frame.tangent = span_basis(ambient, {normalized(grad)}, 1e-8,
                                 static_cast<std::size_t>(spec.dimension()));
      break;
    }
    case ManifoldKind::focal_u:
      frame.tangent = span_basis(eigenspace_columns(sys->P(spec.index() + 1), spec.sign()), zset, 1e-8,
                                 static_cast<std::size_t>(spec.dimension()));
      break;
  }
  if (frame.normal.empty() && spec.codimension() > 0) {
    std::vector<Vector> used = frame.tangent;
    used.push_back(z);
    frame.normal = orthogonal_complement(used, n);
  }
  if (frame.tangent.size() != static_cast<std::size_t>(spec.dimension()) ||
      frame.normal.size() != static_cast<std::size_t>(spec.codimension()))
    fail(ErrorCode::frame, "frame of " + spec.name() + " has " + std::to_string(frame.tangent.size()) +
                               " tangent and " + std::to_string(frame.normal.size()) +
                               " normal vectors; expected " + std::to_string(spec.dimension()) +
                               " and " + std::to_string(spec.codimension()));
  return frame;
}

double frame_orthonormality_error(const Frame& frame) {
  std::vector<Vector> all = frame.tangent;
  all.insert(all.end(), frame.normal.begin(), frame.normal.end());
  all.push_back(frame.point.z);
  double err = 0.0;
  for (std::size_t a = 0; a < all.size(); ++a)
    for (std::size_t b = a; b < all.size(); ++b)
      err = std::max(err, std::abs(dot(all[a], all[b]) - (a == b ? 1.0 : 0.0)));
  return err;
}

}  // namespace otfkm
