#include <doctest.h>

#include <cmath>

#include "otfkm/error.hpp"
#include "otfkm/linalg.hpp"

using namespace otfkm;

namespace {

Matrix random_symmetric(Rng& rng, std::size_t n) {
  Matrix a(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i; j < n; ++j) a(i, j) = a(j, i) = rng.gaussian();
  return a;
}

}  // namespace

TEST_CASE("jacobi sorts a diagonal matrix") {
  const auto e = symmetric_eigen(SymmetricMatrix(Matrix::from_rows({{3, 0, 0}, {0, 1, 0}, {0, 0, 2}})));
  CHECK(e.values == Vector{1, 2, 3});
}

TEST_CASE("jacobi on a 2x2 with known eigenpairs") {
  // [[2,1],[1,2]] has eigenvalues 1, 3 with eigenvectors (1,-1)/sqrt2, (1,1)/sqrt2.
  const auto e = symmetric_eigen(SymmetricMatrix(Matrix::from_rows({{2, 1}, {1, 2}})));
  CHECK(e.values[0] == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(e.values[1] == doctest::Approx(3.0).epsilon(1e-14));
  CHECK(std::abs(e.vectors(0, 1) * e.vectors(1, 1)) == doctest::Approx(0.5).epsilon(1e-14));
  CHECK(e.vectors(0, 0) * e.vectors(1, 0) == doctest::Approx(-0.5).epsilon(1e-14));
}

TEST_CASE("jacobi reconstructs 1000 random symmetric matrices") {
  Rng rng(7, 1);
  double worst_rec = 0.0, worst_orth = 0.0, worst_eq = 0.0;
  for (int trial = 0; trial < 1000; ++trial) {
    const std::size_t n = 1 + static_cast<std::size_t>(trial % 64);
    const Matrix a = random_symmetric(rng, n);
    const auto e = symmetric_eigen(SymmetricMatrix(a));
    Matrix lambda(n, n);
    for (std::size_t i = 0; i < n; ++i) lambda(i, i) = e.values[i];
    const double scale = std::max(1.0, frobenius_norm(a));
    worst_rec = std::max(worst_rec, max_abs_entry(e.vectors * lambda * e.vectors.transpose() - a) / scale);
    worst_orth = std::max(worst_orth, max_abs_entry(e.vectors.transpose() * e.vectors - Matrix::identity(n)));
    worst_eq = std::max(worst_eq, max_abs_entry(a * e.vectors - e.vectors * lambda) / scale);
    for (std::size_t i = 1; i < n; ++i) REQUIRE(e.values[i - 1] <= e.values[i]);
  }
  CHECK(worst_rec < 1e-10);
  CHECK(worst_orth < 1e-10);
  CHECK(worst_eq < 1e-13);
}

TEST_CASE("symmetric matrix rejects asymmetric input") {
  CHECK_THROWS_AS(SymmetricMatrix(Matrix::from_rows({{1, 2}, {2.1, 1}})), Error);
}

TEST_CASE("linear solve against a hand-computed system") {
  // 2x + y = 3, x + 3y = 5  =>  x = 4/5, y = 7/5
  const Vector x = solve_linear(Matrix::from_rows({{2, 1}, {1, 3}}), {3, 5});
  CHECK(x[0] == doctest::Approx(0.8).epsilon(1e-15));
  CHECK(x[1] == doctest::Approx(1.4).epsilon(1e-15));
  CHECK_THROWS_AS(solve_linear(Matrix::from_rows({{1, 2}, {2, 4}}), {1, 1}), Error);
}

TEST_CASE("span basis and complement") {
  const std::vector<Vector> cand{{1, 1, 0}, {2, 2, 0}, {0, 0, 3}};
  const auto b = span_basis(cand, {});
  REQUIRE(b.size() == 2);
  const auto c = orthogonal_complement(b, 3);
  REQUIRE(c.size() == 1);
  CHECK(std::abs(c[0][0] + c[0][1]) < 1e-15);
  CHECK(std::abs(std::abs(c[0][0]) - 1 / std::sqrt(2.0)) < 1e-15);
}

namespace {

ConstraintEval sphere(std::span<const double> z) {
  ConstraintEval e{{dot(z, z) - 1.0}, Matrix(1, z.size())};
  for (std::size_t i = 0; i < z.size(); ++i) e.jacobian(0, i) = 2.0 * z[i];
  return e;
}

}  // namespace

TEST_CASE("newton projection") {
  SUBCASE("feasible input is returned unchanged") {
    const auto r = newton_project({0.6, 0.8, 0.0}, sphere);
    CHECK(r.iterations == 0);
    CHECK(r.z == Vector{0.6, 0.8, 0.0});
  }
  SUBCASE("radial projection of (2,0,0)") {
    const auto r = newton_project({2, 0, 0}, sphere);
    CHECK(r.z[0] == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(r.z[1] == 0.0);
  }
  SUBCASE("quadratic convergence") {
    // Two circles x^2+y^2 = 1 and (x-1)^2 + y^2 = 1 meet at (1/2, sqrt3/2).
    const ConstraintFn two = [](std::span<const double> z) {
      ConstraintEval e{{z[0] * z[0] + z[1] * z[1] - 1, (z[0] - 1) * (z[0] - 1) + z[1] * z[1] - 1}, Matrix(2, 2)};
      e.jacobian(0, 0) = 2 * z[0];
      e.jacobian(0, 1) = 2 * z[1];
      e.jacobian(1, 0) = 2 * (z[0] - 1);
      e.jacobian(1, 1) = 2 * z[1];
      return e;
    };
    const auto r = newton_project({0.7, 1.1}, two);
    CHECK(r.z[0] == doctest::Approx(0.5).epsilon(1e-11));
    CHECK(r.z[1] == doctest::Approx(std::sqrt(3.0) / 2).epsilon(1e-11));
    CHECK(r.residual < 1e-12);
    int quadratic = 0;
    for (std::size_t k = 0; k + 1 < r.history.size(); ++k) {
      const double a = r.history[k], b = r.history[k + 1];
      if (a < 1e-2 && a > 1e-7) {
        CHECK(b <= 10.0 * a * a);
        ++quadratic;
      }
    }
    CHECK(quadratic >= 1);
  }
  SUBCASE("unreachable target reports the final residual") {
    const ConstraintFn impossible = [](std::span<const double> z) {
      ConstraintEval e{{z[0] * z[0] + 1.0}, Matrix(1, 1)};
      e.jacobian(0, 0) = 2 * z[0];
      return e;
    };
    try {
      newton_project({1.0}, impossible, {1e-12, 20, 0});
      FAIL("expected a projection error");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::projection);
    }
  }
}

TEST_CASE("rk4 on y' = -y") {
  const VectorField f = [](double, std::span<const double> y) { return Vector{-y[0]}; };
  const auto tr = rk4_integrate(f, {1.0}, 0.0, 1.0, 1e-3);
  CHECK(tr.back().t == 1.0);
  CHECK(std::abs(tr.back().y[0] - std::exp(-1.0)) < 1e-9);

  // Fourth order: halving the step cuts the error by about 16.
  const double e1 = std::abs(rk4_integrate(f, {1.0}, 0.0, 1.0, 0.1).back().y[0] - std::exp(-1.0));
  const double e2 = std::abs(rk4_integrate(f, {1.0}, 0.0, 1.0, 0.05).back().y[0] - std::exp(-1.0));
  CHECK(e1 / e2 == doctest::Approx(16.0).epsilon(0.05));
}

TEST_CASE("rk4 shortens the last step and flags blow-up") {
  const VectorField f = [](double, std::span<const double> y) { return Vector{y[0] * y[0]}; };
  const auto tr = rk4_integrate(f, {1.0}, 0.0, 0.25, 0.1);
  CHECK(tr.size() == 4);
  CHECK(tr.back().t == 0.25);
  // y' = y^2, y(0) = 1 explodes at t = 1.
  CHECK_THROWS_AS(rk4_integrate(f, {1.0}, 0.0, 2.0, 0.1), Error);
}

TEST_CASE("rng streams are deterministic and distinct") {
  Rng a(42, 3), b(42, 3), c(42, 4);
  const double x = a.gaussian();
  CHECK(x == b.gaussian());
  CHECK(x != c.gaussian());
  const Vector u = a.unit_vector(5);
  CHECK(norm(u) == doctest::Approx(1.0).epsilon(1e-15));
}
