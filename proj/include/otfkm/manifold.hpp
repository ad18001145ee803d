#pragma once

#include <cstdint>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "otfkm/clifford.hpp"

namespace otfkm {

enum class ManifoldKind {
  m_chain,   // M_i = {z in S^{2l-1} : <P_j z, z> = 0, j <= i}
  n_chain,   // N_i = {z in S^{2l-1} : Σ_{j<=i} <P_j z, z>^2 = 1}
  m_plus_t,  // M_+^t = {(x, y) : |x| = cos t, |y| = sin t, x ⊥ y, x ⊥ E_a y}
  m_minus,   // M_- = N_m
  level_u,   // U_c = {z in M_i : <P_{i+1} z, z> = c}
  level_v,   // V_c = {z in N_i : <P_i z, z> = c}
  focal_u,   // U_{±1} = unit sphere of the ±1-eigenspace of P_{i+1}, inside M_i
};

/// A named submanifold of the unit sphere S^{2l-1} built from a Clifford
/// system. Construction validates index ranges and refuses systems with
/// l - m - 1 <= 0.
class ManifoldSpec {
 public:
  static ManifoldSpec m_chain(SystemPtr sys, int i);
  static ManifoldSpec n_chain(SystemPtr sys, int i);
  static ManifoldSpec m_plus_t(SystemPtr sys, double t);
  static ManifoldSpec m_minus(SystemPtr sys);
  static ManifoldSpec level_u(SystemPtr sys, int i, double c);
  static ManifoldSpec level_v(SystemPtr sys, int i, double c);
  static ManifoldSpec focal_u(SystemPtr sys, int i, int sign);

  ManifoldKind kind() const { return kind_; }
  int index() const { return index_; }
  double level() const { return level_; }
  double angle() const { return angle_; }
  int sign() const { return sign_; }
  const CliffordSystem& system() const { return *system_; }
  const SystemPtr& system_ptr() const { return system_; }
  std::size_t ambient_dim() const { return static_cast<std::size_t>(system_->ambient_dim()); }

  /// Intrinsic dimension: M_i 2l-2-i, N_i l+i-1, M_+^t 2l-m-2, M_- l+m-1,
  /// U_c 2l-3-i, V_c l+i-2, U_{±1} l-1.
  int dimension() const;
  /// Codimension inside S^{2l-1}.
  int codimension() const { return 2 * system_->l() - 1 - dimension(); }
  std::string name() const;

  /// Largest violation of the defining equations (unit norm included).
  double constraint_residual(std::span<const double> z) const;
  /// Smooth retraction from a neighbourhood onto the manifold; the identity
  /// on the manifold itself. Quadratic-constraint kinds use Gauss-Newton,
  /// the eigenspace kinds (N_i, M_-, V_c, U_{±1}) project onto an
  /// eigenspace of a unit combination of the P_a.
  Vector retract(std::span<const double> z) const;

  /// True for kinds cut out by regular quadratic equations (M_i, M_+^t, U_c).
  bool has_quadratic_constraints() const { return !constraints_->empty(); }
  /// Gradients (2 M z) of the quadratic constraints other than |z|^2 = 1.
  std::vector<Vector> constraint_gradients(std::span<const double> z) const;

 private:
  struct Quadratic {
    Matrix form;
    double target;
  };

  ManifoldSpec(ManifoldKind kind, SystemPtr sys, int index, double level, double angle, int sign);
  void build_constraints();
  Vector retract_eigenspace(std::span<const double> z) const;
  /// Unit coefficient vector c with z in E_+(P_c), for N_i / V_c.
  Vector eigen_coefficients(std::span<const double> z) const;

  ManifoldKind kind_;
  SystemPtr system_;
  int index_ = 0;
  double level_ = 0.0;
  double angle_ = 0.0;
  int sign_ = 1;
  std::shared_ptr<const std::vector<Quadratic>> constraints_;
};

/// The matrix Q_0 = diag(tan t I, -cot t I).
Matrix q0_matrix(int l, double t);

/// A unit vector on a manifold, validated at construction: | |z| - 1 | < 1e-12
/// and every defining equation holds to 1e-10.
struct SurfacePoint {
  ManifoldSpec spec;
  Vector z;
  double constraint_residual = 0.0;
};

/// Throws ErrorCode::domain when z is not on the manifold.
SurfacePoint make_point(const ManifoldSpec& spec, Vector z);

/// Deterministic draw of a point. M_+^t is built directly from a unit x and
/// a unit y orthogonal to x, E_1 x, ..., E_{m-1} x; the eigenspace kinds take
/// a unit vector in the +1-eigenspace of a random unit combination; the
/// quadratic kinds Newton-project a Gaussian start, redrawing up to 10 times.
SurfacePoint sample_point(const ManifoldSpec& spec, std::uint64_t seed);

/// Orthonormal tangent basis and orthonormal normal basis (normal inside the
/// sphere, so every vector is also orthogonal to z).
struct Frame {
  SurfacePoint point;
  std::vector<Vector> tangent;
  std::vector<Vector> normal;
};

/// For M_+^t the normal basis is exactly (Q_0 z, ..., Q_m z). Other kinds
/// orthonormalise constraint gradients or use the eigenspace description.
/// Throws ErrorCode::frame if the counts disagree with dim / codim.
Frame tangent_normal_frame(const SurfacePoint& point);

/// Largest deviation from orthonormality of tangent ∪ normal ∪ {z}.
double frame_orthonormality_error(const Frame& frame);

}  // namespace otfkm
