#pragma once

#include <array>
#include <cstdint>

#include "otfkm/shape.hpp"

namespace otfkm {

// --- M_+^t -------------------------------------------------------------------

/// Residuals of the seven orthogonality identities for Q_0 = diag(tan t, -cot t)
/// and Q_a = P_a at a point of M_+^t, in this order:
///   <Q0Q0z,Q0z> = -2cot2t, <QaQ0z,Q0z> = 0, <Q0Qaz,Q0z> = 0, <Q0Q0z,Qaz> = 0,
///   <QaQbz,Q0z> = 0, <QaQ0z,Qbz> = 0, <Q0Qaz,Qbz> = -2δ_ab cot2t
/// (a, b = 1..m). Each entry is the worst absolute residual over index pairs.
struct QIdentityReport {
  std::array<double, 7> residuals{};
  double max_residual = 0.0;
};

QIdentityReport verify_q_identities(const SurfacePoint& point);

/// Ascending principal curvatures of A_alpha on M_+^t:
/// {-tan t, 0, cot t} for alpha = 0 and {-1, 0, 1} otherwise, with
/// multiplicities (l-m-1, m, l-m-1).
Vector expected_m_plus_spectrum(int l, int m, double t, int alpha);

/// Ascending eigenvalues of a symmetric shape-operator matrix.
Vector shape_spectrum(const Matrix& shape_operator);

/// |B|^2 = 2m(l-m-1) + (l-m-1)(tan^2 t + cot^2 t) on M_+^t.
double m_plus_norm_sq(int l, int m, double t);
/// |H|^2 = (2(l-m-1) cot 2t)^2 on M_+^t.
double m_plus_mean_curvature_sq(int l, int m, double t);

/// (2l-m-2)(2l-m-3) - 2(l-m-1)(l-1) + (l-m-1)(l-m-2)(tan^2 t + cot^2 t),
/// for 0 < t <= pi/4.
double scalar_curvature_analytic(int l, int m, double t);
/// Gauss equation: n(n-1) + |H|^2 - |B|^2.
double scalar_curvature_numeric(const SecondFundamentalForm& sff);

// --- extrinsic σ ---------------------------------------------------------------

struct SigmaResult {
  double best = 0.0;           // max over restarts of Σ_α <A_α X, X>^2
  double worst_restart = 0.0;  // smallest per-restart maximum
  int restarts = 0;
};

/// Maximises |B(X, X)|^2 over unit tangent X by projected gradient ascent.
/// Every restart draws a fresh point and a fresh start vector. Only M_+^{π/4}
/// (analytic shape operators) and M_- (numeric form) are accepted.
SigmaResult sigma_extrinsic(const ManifoldSpec& spec, int restarts, std::uint64_t seed,
                            double fd_step = 1e-4);

/// max over unit X of Σ_α (X^T A_α X)^2 for one form, from `starts` random
/// initial vectors.
double maximize_normal_curvature_sq(const SecondFundamentalForm& sff, Rng& rng, int starts);

// --- isoparametric chains --------------------------------------------------------

struct IsoparametricReport {
  double value = 0.0;            // f_i(z) or g_i(z)
  double gradient_sq = 0.0;      // |∇f|^2 from the tangential projection
  double gradient_expected = 0.0;
  double gradient_residual = 0.0;
  double laplacian = 0.0;        // tr_T(Hess) + <ambient gradient, Euclidean H>
  double laplacian_expected = 0.0;
  double laplacian_residual = 0.0;
};

/// On M_i (0 <= i <= m-1) checks f_i = <P_{i+1} z, z> against
/// |∇f|^2 = 4(1 - f^2), ∆f = -4(l-i-1) f; on N_i (2 <= i <= m) checks
/// g_i = <P_i z, z> against |∇g|^2 = 4(1 - g^2), ∆g = -4 i g.
IsoparametricReport isoparametric_identity_check(const SurfacePoint& point, double fd_step = 1e-4);

/// Ascending principal curvatures of a level set U_c ⊂ M_i or V_c ⊂ N_i with
/// respect to the unit normal ∇f/|∇f| inside the enclosing chain member.
/// Throws ErrorCode::domain when |f(z)| >= 1 - 1e-6.
Vector level_set_spectrum(const SurfacePoint& point, double fd_step = 1e-4);

/// Expected ascending spectrum for a level-set spec: -sqrt((1-c)/(1+c)), 0,
/// sqrt((1+c)/(1-c)) with multiplicities (l-i-2, i+1, l-i-2) on U_c and
/// (i-1, l-i, i-1) on V_c.
Vector expected_level_spectrum(const ManifoldSpec& spec);

/// Largest |B(e_a, e_b)| after projecting onto span(outer_tangent): zero iff
/// the submanifold is totally geodesic in the enclosing manifold.
double max_relative_second_fundamental_form(const SecondFundamentalForm& sff,
                                            const std::vector<Vector>& outer_tangent);
/// |H| projected onto span(outer_tangent): zero iff minimal in the enclosing
/// manifold.
double relative_mean_curvature(const SecondFundamentalForm& sff,
                               const std::vector<Vector>& outer_tangent);

}  // namespace otfkm
