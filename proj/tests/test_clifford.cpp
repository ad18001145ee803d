#include <doctest.h>

#include <string>

#include "otfkm/clifford.hpp"
#include "otfkm/error.hpp"

using namespace otfkm;

namespace {

/// Largest violation of E_a E_b + E_b E_a = -2 δ_ab I and E^T E = I, computed
/// here from the raw matrices.
double skew_relations(const std::vector<Matrix>& es) {
  double worst = 0.0;
  for (std::size_t a = 0; a < es.size(); ++a) {
    const std::size_t n = es[a].rows();
    worst = std::max(worst, max_abs_entry(es[a].transpose() * es[a] - Matrix::identity(n)));
    for (std::size_t b = 0; b < es.size(); ++b) {
      Matrix s = es[a] * es[b] + es[b] * es[a];
      if (a == b) s += 2.0 * Matrix::identity(n);
      worst = std::max(worst, max_abs_entry(s));
    }
  }
  return worst;
}

}  // namespace

TEST_CASE("delta table") {
  const int expected[] = {1, 2, 4, 4, 8, 8, 8, 8};
  for (int m = 1; m <= 8; ++m) CHECK(delta_dim(m) == expected[m - 1]);
  CHECK(delta_dim(9) == 16);
  CHECK(delta_dim(10) == 32);
  CHECK(delta_dim(17) == 256);
  CHECK_THROWS_AS(delta_dim(0), Error);
}

TEST_CASE("no real 1x1 matrix squares to -1, so delta(2) = 2") {
  const auto s = build_skew_generators(1, 2);
  REQUIRE(s.generators.size() == 1);
  const Matrix& e = s.generators[0];
  CHECK(e(0, 0) == 0.0);
  CHECK(std::abs(e(0, 1)) == 1.0);
  CHECK(e(0, 1) == -e(1, 0));
  CHECK(max_abs_entry(e * e + Matrix::identity(2)) == 0.0);
}

TEST_CASE("generator sets") {
  CHECK(build_skew_generators(0, 3).generators.empty());
  CHECK(build_skew_generators(0, 3).l == 3);
  const auto q = build_skew_generators(3, 4);
  CHECK(q.generators.size() == 3);
  CHECK(skew_relations(q.generators) == 0.0);
  for (int nu = 0; nu <= 16; ++nu) {
    const int d = delta_dim(nu + 1);
    const auto s = build_skew_generators(nu, 2 * d);
    CHECK(static_cast<int>(s.generators.size()) == nu);
    CHECK_MESSAGE(skew_relations(s.generators) < 1e-12, "nu = " << nu);
  }
}

TEST_CASE("delta(9) = 16 by explicit construction") {
  const auto s = build_skew_generators(8, 16);
  CHECK(skew_relations(s.generators) == 0.0);
  // Eight generators cannot live on R^8: the error names the minimal l.
  try {
    build_skew_generators(8, 8);
    FAIL("expected a dimension error");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::dimension);
    CHECK(std::string(e.what()).find("16") != std::string::npos);
  }
}

TEST_CASE("symmetric systems") {
  SUBCASE("(1, 3) is the 6x6 block pair") {
    const auto s = build_symmetric_system(1, 3);
    CHECK(s.l() == 3);
    Matrix p0(6, 6), p1(6, 6);
    for (std::size_t i = 0; i < 3; ++i) {
      p0(i, i) = 1;
      p0(i + 3, i + 3) = -1;
      p1(i, i + 3) = p1(i + 3, i) = 1;
    }
    CHECK(s.P(0) == p0);
    CHECK(s.P(1) == p1);
  }
  for (auto [m, k] : {std::pair{2, 2}, {3, 2}, {4, 2}, {5, 1}, {8, 1}, {9, 1}}) {
    const auto s = build_symmetric_system(m, k);
    CHECK(s.l() == k * delta_dim(m));
    CHECK(static_cast<int>(s.matrices().size()) == m + 1);
    CHECK(anticommutator_residual(s.matrices(), 1.0) < 1e-12);
    for (const auto& p : s.matrices()) {
      CHECK(max_abs_entry(p * p - Matrix::identity(p.rows())) < 1e-12);
      CHECK(p.trace() == 0.0);
    }
  }
  CHECK_THROWS_AS(build_symmetric_system(0, 1), Error);
  CHECK_THROWS_AS(build_symmetric_system(1, 0), Error);
}

TEST_CASE("validation rejects a broken system") {
  auto s = build_symmetric_system(2, 1);
  auto mats = s.matrices();
  mats[2](0, 2) += 1e-9;
  CHECK_THROWS_AS(CliffordSystem(2, 1, mats), Error);
}

TEST_CASE("unit combinations") {
  const auto sys = make_system(3, 1);
  const Vector c{0.5, 0.5, 0.5, 0.5};
  const Matrix p = unit_combination(*sys, c);
  CHECK(max_abs_entry(p * p - Matrix::identity(8)) < 1e-15);
  CHECK(max_abs_entry(p - p.transpose()) == 0.0);
  // tr P_c = 0 and P_c^2 = I  =>  the +1-eigenspace has dimension l.
  const auto e = symmetric_eigen(SymmetricMatrix(p));
  int plus = 0;
  for (double v : e.values) plus += v > 0 ? 1 : 0;
  CHECK(plus == 4);
  CHECK_THROWS_AS(unit_combination(*sys, Vector{1.0, 1e-5}), Error);
}

TEST_CASE("json round trip") {
  const auto s = build_symmetric_system(3, 2);
  const auto back = system_from_json(to_json(s));
  CHECK(back.m() == 3);
  CHECK(back.k() == 2);
  for (int a = 0; a <= 3; ++a) CHECK(back.P(a) == s.P(a));
  CHECK_THROWS_AS(system_from_json("{\"m\": 1"), Error);
  CHECK_THROWS_AS(system_from_json("{\"m\": 1, \"l\": 1, \"k\": 1, \"matrices\": [[1,0,0,1],[0,1,1,0]]}"), Error);
}
