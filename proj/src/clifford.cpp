#include "otfkm/clifford.hpp"

#include <cmath>
#include <string>

#include <json.hpp>

#include "otfkm/error.hpp"

namespace otfkm {

int delta_dim(int m) {
  if (m <= 0) fail(ErrorCode::domain, "delta_dim requires m >= 1, got " + std::to_string(m));
  static constexpr int kTable[8] = {1, 2, 4, 4, 8, 8, 8, 8};
  int factor = 1;
  while (m > 8) {
    m -= 8;
    factor *= 16;
  }
  return factor * kTable[m - 1];
}

namespace {

// Cayley-Dickson product on R^n, n a power of two:
//   (a, b)(c, d) = (ac - conj(d) b, d a + b conj(c)).
Vector conj(std::span<const double> x) {
  Vector r(x.begin(), x.end());
  for (std::size_t i = 1; i < r.size(); ++i) r[i] = -r[i];
  return r;
}

Vector cd_multiply(std::span<const double> x, std::span<const double> y) {
  const std::size_t n = x.size();
  if (n == 1) return {x[0] * y[0]};
  const std::size_t h = n / 2;
  auto a = x.subspan(0, h), b = x.subspan(h);
  auto c = y.subspan(0, h), d = y.subspan(h);
  const Vector ac = cd_multiply(a, c);
  const Vector db = cd_multiply(conj(d), b);
  const Vector da = cd_multiply(d, a);
  const Vector bc = cd_multiply(b, conj(c));
  Vector r(n);
  for (std::size_t i = 0; i < h; ++i) {
    r[i] = ac[i] - db[i];
    r[h + i] = da[i] + bc[i];
  }
  return r;
}

/// Matrix of x -> e_unit * x in the Cayley-Dickson algebra of dimension n.
Matrix left_multiplication(std::size_t n, std::size_t unit) {
  Matrix m(n, n);
  const Vector e = unit_vector(n, unit);
  for (std::size_t j = 0; j < n; ++j) {
    const Vector col = cd_multiply(e, unit_vector(n, j));
    for (std::size_t i = 0; i < n; ++i) m(i, j) = col[i];
  }
  return m;
}

const Matrix& rot2() {  // J^2 = -I
  static const Matrix j = Matrix::from_rows({{0, -1}, {1, 0}});
  return j;
}
const Matrix& refl_diag() {  // K = diag(1, -1)
  static const Matrix k = Matrix::from_rows({{1, 0}, {0, -1}});
  return k;
}
const Matrix& refl_swap() {  // L = antidiag(1, 1)
  static const Matrix l = Matrix::from_rows({{0, 1}, {1, 0}});
  return l;
}

/// Irreducible generators for nu <= 7 via Cayley-Dickson left multiplication.
std::vector<Matrix> low_generators(int nu) {
  const auto n = static_cast<std::size_t>(delta_dim(nu + 1));
  std::vector<Matrix> gens;
  for (int a = 1; a <= nu; ++a) gens.push_back(left_multiplication(n, static_cast<std::size_t>(a)));
  return gens;
}

std::vector<Matrix> irreducible_generators(int nu) {
  if (nu <= 7) return low_generators(nu);
  // Eight generators on R^16: O_a ⊗ K (octonion units) and I_8 ⊗ J, plus the
  // symmetric involution w = I_8 ⊗ L anticommuting with all of them.
  std::vector<Matrix> sixteen;
  for (const auto& o : low_generators(7)) sixteen.push_back(kron(o, refl_diag()));
  sixteen.push_back(kron(Matrix::identity(8), rot2()));
  const Matrix w = kron(Matrix::identity(8), refl_swap());

  const std::vector<Matrix> inner = irreducible_generators(nu - 8);
  const std::size_t d = static_cast<std::size_t>(delta_dim(nu - 7));
  std::vector<Matrix> gens;
  for (const auto& e : inner) gens.push_back(kron(e, w));
  for (const auto& g : sixteen) gens.push_back(kron(Matrix::identity(d), g));
  return gens;
}

Matrix block_diagonal_copies(const Matrix& a, std::size_t copies) {
  return kron(Matrix::identity(copies), a);
}

}  // namespace

SkewGeneratorSet build_skew_generators(int nu, int l) {
  if (nu < 0) fail(ErrorCode::domain, "generator count must be non-negative");
  const int d = delta_dim(nu + 1);
  if (l <= 0 || l % d != 0)
    fail(ErrorCode::dimension, "l = " + std::to_string(l) + " is not a positive multiple of δ(" +
                                   std::to_string(nu + 1) + ") = " + std::to_string(d) +
                                   "; minimal admissible l is " + std::to_string(d));
  SkewGeneratorSet set;
  set.nu = nu;
  set.l = l;
  for (const auto& e : irreducible_generators(nu))
    set.generators.push_back(block_diagonal_copies(e, static_cast<std::size_t>(l / d)));
  return set;
}

double anticommutator_residual(std::span<const Matrix> ms, double sign) {
  double worst = 0.0;
  for (std::size_t a = 0; a < ms.size(); ++a) {
    for (std::size_t b = a; b < ms.size(); ++b) {
      Matrix s = ms[a] * ms[b] + ms[b] * ms[a];
      if (a == b) s -= (2.0 * sign) * Matrix::identity(s.rows());
      worst = std::max(worst, max_abs_entry(s));
    }
  }
  return worst;
}

namespace {

Matrix assemble_block(const Matrix& upper_right, const Matrix& lower_left, const Matrix& upper_left,
                      const Matrix& lower_right) {
  const std::size_t l = upper_right.rows();
  Matrix p(2 * l, 2 * l);
  for (std::size_t i = 0; i < l; ++i)
    for (std::size_t j = 0; j < l; ++j) {
      p(i, j) = upper_left(i, j);
      p(i, l + j) = upper_right(i, j);
      p(l + i, j) = lower_left(i, j);
      p(l + i, l + j) = lower_right(i, j);
    }
  return p;
}

Matrix sub_block(const Matrix& p, std::size_t row0, std::size_t col0, std::size_t n) {
  Matrix b(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) b(i, j) = p(row0 + i, col0 + j);
  return b;
}

constexpr double kRelationTol = 1e-12;

}  // namespace

CliffordSystem::CliffordSystem(int m, int k, std::vector<Matrix> matrices)
    : m_(m), k_(k), l_(0), matrices_(std::move(matrices)) {
  if (m_ < 1 || k_ < 1) fail(ErrorCode::domain, "Clifford system requires m >= 1 and k >= 1");
  l_ = k_ * delta_dim(m_);
  const auto n = static_cast<std::size_t>(2 * l_);
  if (matrices_.size() != static_cast<std::size_t>(m_ + 1))
    fail(ErrorCode::domain, "expected m + 1 = " + std::to_string(m_ + 1) + " matrices");
  for (const auto& p : matrices_) {
    if (p.rows() != n || p.cols() != n)
      fail(ErrorCode::dimension, "system matrices must be 2l x 2l with l = " + std::to_string(l_));
    const double asym = max_abs_entry(p - p.transpose());
    if (asym > kRelationTol) fail(ErrorCode::domain, "system matrix is not symmetric");
    if (std::abs(p.trace()) > kRelationTol) fail(ErrorCode::domain, "system matrix is not traceless");
  }
  if (anticommutator_residual(matrices_, 1.0) > kRelationTol)
    fail(ErrorCode::domain, "matrices violate P_a P_b + P_b P_a = 2 δ_ab I");

  // Block layout and recovery of the skew generators.
  const auto l = static_cast<std::size_t>(l_);
  const Matrix id = Matrix::identity(l);
  const Matrix zero(l, l);
  auto matches = [&](const Matrix& a, const Matrix& b) { return max_abs_entry(a - b) <= kRelationTol; };
  if (!matches(matrices_[0], assemble_block(zero, zero, id, -1.0 * id)))
    fail(ErrorCode::domain, "P_0 must be diag(I, -I)");
  if (!matches(matrices_[1], assemble_block(id, id, zero, zero)))
    fail(ErrorCode::domain, "P_1 must be antidiag(I, I)");
  skew_.nu = m_ - 1;
  skew_.l = l_;
  for (int a = 2; a <= m_; ++a) {
    const Matrix e = sub_block(matrices_[static_cast<std::size_t>(a)], 0, l, l);
    if (!matches(matrices_[static_cast<std::size_t>(a)], assemble_block(e, -1.0 * e, zero, zero)))
      fail(ErrorCode::domain, "P_" + std::to_string(a) + " must be [[0, E], [-E, 0]]");
    skew_.generators.push_back(e);
  }
}

Vector CliffordSystem::quadratic_forms(std::span<const double> x, int count) const {
  Vector q(static_cast<std::size_t>(count));
  for (int a = 0; a < count; ++a) q[static_cast<std::size_t>(a)] = bilinear(P(a), x, x);
  return q;
}

CliffordSystem build_symmetric_system(int m, int k) {
  if (m < 1 || k < 1) fail(ErrorCode::domain, "build_symmetric_system requires m >= 1 and k >= 1");
  const int l = k * delta_dim(m);
  const SkewGeneratorSet skew = build_skew_generators(m - 1, l);
  const auto n = static_cast<std::size_t>(l);
  const Matrix id = Matrix::identity(n);
  const Matrix zero(n, n);
  std::vector<Matrix> ps;
  ps.push_back(assemble_block(zero, zero, id, -1.0 * id));
  ps.push_back(assemble_block(id, id, zero, zero));
  for (const auto& e : skew.generators) ps.push_back(assemble_block(e, -1.0 * e, zero, zero));
  return CliffordSystem(m, k, std::move(ps));
}

SystemPtr make_system(int m, int k) {
  return std::make_shared<const CliffordSystem>(build_symmetric_system(m, k));
}

Matrix unit_combination(const CliffordSystem& sys, std::span<const double> c) {
  if (c.empty() || c.size() > static_cast<std::size_t>(sys.m() + 1))
    fail(ErrorCode::dimension, "coefficient vector must have 1..m+1 entries");
  if (std::abs(norm(c) - 1.0) > 1e-12)
    fail(ErrorCode::domain, "unit_combination requires a unit coefficient vector");
  const auto n = static_cast<std::size_t>(sys.ambient_dim());
  Matrix pc(n, n);
  for (std::size_t a = 0; a < c.size(); ++a)
    if (c[a] != 0.0) pc += c[a] * sys.P(static_cast<int>(a));
  return pc;
}

std::string to_json(const CliffordSystem& sys) {
  nlohmann::json j;
  j["m"] = sys.m();
  j["l"] = sys.l();
  j["k"] = sys.k();
  auto mats = nlohmann::json::array();
  for (const auto& p : sys.matrices())
    mats.push_back(std::vector<double>(p.data().begin(), p.data().end()));
  j["matrices"] = std::move(mats);
  return j.dump();
}

CliffordSystem system_from_json(std::string_view text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    fail(ErrorCode::io, std::string("malformed Clifford system JSON: ") + e.what());
  }
  try {
    const int m = j.at("m").get<int>();
    const int l = j.at("l").get<int>();
    const int k = j.at("k").get<int>();
    if (m < 1 || k < 1) fail(ErrorCode::domain, "m and k must be positive");
    if (l != k * delta_dim(m))
      fail(ErrorCode::domain, "l must equal k * δ(m) = " + std::to_string(k * delta_dim(m)));
    const auto n = static_cast<std::size_t>(2 * l);
    std::vector<Matrix> ps;
    for (const auto& flat : j.at("matrices")) {
      const auto entries = flat.get<std::vector<double>>();
      if (entries.size() != n * n)
        fail(ErrorCode::dimension, "each matrix needs (2l)^2 = " + std::to_string(n * n) + " entries");
      Matrix p(n, n);
      std::copy(entries.begin(), entries.end(), p.data().begin());
      ps.push_back(std::move(p));
    }
    return CliffordSystem(m, k, std::move(ps));
  } catch (const nlohmann::json::exception& e) {
    fail(ErrorCode::io, std::string("Clifford system JSON has wrong shape: ") + e.what());
  }
}

}  // namespace otfkm
