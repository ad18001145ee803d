#pragma once

#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "otfkm/linalg.hpp"

namespace otfkm {

/// Radon-Hurwitz dimension δ(m) of an irreducible module of the Clifford
/// algebra C_{m-1}: 1,2,4,4,8,8,8,8 for m = 1..8 and δ(m+8) = 16 δ(m).
int delta_dim(int m);

/// Orthogonal E_1..E_nu on R^l with E_a E_b + E_b E_a = -2 δ_ab I.
struct SkewGeneratorSet {
  int nu = 0;
  int l = 0;
  std::vector<Matrix> generators;
};

/// Builds the generators on R^{δ(nu+1)} and repeats them block-diagonally
/// l / δ(nu+1) times.
///
/// Irreducible pieces: for nu <= 7 the E_a are left multiplications by the
/// imaginary units of the Cayley-Dickson algebra of dimension δ(nu+1)
/// (complex numbers, quaternions, octonions). For nu >= 8 the set for nu - 8
/// is tensored with an explicit 16-dimensional set of eight generators plus
/// a symmetric involution anticommuting with all of them. All entries are
/// 0 or ±1.
SkewGeneratorSet build_skew_generators(int nu, int l);

/// Symmetric Clifford system P_0..P_m on R^{2l} with the block layout
///   P_0 = diag(I, -I), P_1 = [[0, I], [I, 0]], P_a = [[0, E_{a-1}], [-E_{a-1}, 0]].
/// Immutable once built.
class CliffordSystem {
 public:
  /// Validates every invariant (symmetry, Clifford relations, trace, block
  /// layout) and throws ErrorCode::domain on violation.
  CliffordSystem(int m, int k, std::vector<Matrix> matrices);

  int m() const { return m_; }
  int k() const { return k_; }
  int l() const { return l_; }
  int ambient_dim() const { return 2 * l_; }
  /// Multiplicities of the isoparametric family: (m, l - m - 1).
  int m1() const { return m_; }
  int m2() const { return l_ - m_ - 1; }
  bool degenerate() const { return m1() <= 0 || m2() <= 0; }

  const Matrix& P(int alpha) const { return matrices_.at(static_cast<std::size_t>(alpha)); }
  const std::vector<Matrix>& matrices() const { return matrices_; }
  const SkewGeneratorSet& skew_source() const { return skew_; }

  /// <P_a x, x> for a = 0..count-1.
  Vector quadratic_forms(std::span<const double> x, int count) const;

 private:
  int m_;
  int k_;
  int l_;
  std::vector<Matrix> matrices_;
  SkewGeneratorSet skew_;
};

using SystemPtr = std::shared_ptr<const CliffordSystem>;

CliffordSystem build_symmetric_system(int m, int k);
SystemPtr make_system(int m, int k);

/// max |M_a M_b + M_b M_a - 2 sign δ_ab I| over all pairs.
double anticommutator_residual(std::span<const Matrix> ms, double sign);

/// P_c = Σ c_a P_a over the first c.size() matrices. Requires |c| = 1 to 1e-12.
Matrix unit_combination(const CliffordSystem& sys, std::span<const double> c);

std::string to_json(const CliffordSystem& sys);
/// Parses {"m","l","k","matrices"} and re-validates all invariants.
CliffordSystem system_from_json(std::string_view text);

}  // namespace otfkm
