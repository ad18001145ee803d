#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numbers>

#include "otfkm/error.hpp"
#include "otfkm/geometry.hpp"
#include "otfkm/mcf.hpp"

using namespace otfkm;

namespace {

constexpr double kPi = std::numbers::pi;

FlowConfig config(int m, int k, double beta0, int points = 20) {
  FlowConfig c;
  c.system = make_system(m, k);
  c.beta0 = beta0;
  c.n_points = points;
  return c;
}

}  // namespace

TEST_CASE("singular time") {
  // cos(pi/3) = 1/2 so T = ln 2 / 4 when l - m - 1 = 1.
  CHECK(std::abs(*singular_time(kPi / 6, 3, 1) - std::log(2.0) / 4) < 1e-15);
  CHECK(*singular_time(kPi / 6, 8, 3) == doctest::Approx(std::log(2.0) / 16));
  CHECK_FALSE(singular_time(kPi / 4, 3, 1).has_value());
  CHECK(*singular_time(kPi / 4 - 1e-6, 3, 1) > 3.0);
  CHECK_THROWS_AS(singular_time(0.0, 3, 1), Error);
  CHECK_THROWS_AS(singular_time(0.3, 3, 2), Error);
}

TEST_CASE("closed form") {
  const double T = *singular_time(kPi / 6, 3, 1);
  CHECK(beta_closed_form(kPi / 6, 3, 1, 0.0) == doctest::Approx(kPi / 6).epsilon(1e-15));
  // cos 2 beta = 2^{-1/2} at T/2.
  CHECK(beta_closed_form(kPi / 6, 3, 1, T / 2) == doctest::Approx(kPi / 8).epsilon(1e-14));
  for (double t : {-1.0, -10.0, -100.0}) {
    const double b = beta_closed_form(kPi / 6, 3, 1, t);
    CHECK(b > 0.0);
    CHECK(b <= kPi / 4);
  }
  CHECK(beta_closed_form(kPi / 6, 3, 1, -10.0) == doctest::Approx(kPi / 4).epsilon(1e-15));
  CHECK_THROWS_AS(beta_closed_form(kPi / 6, 3, 1, T), Error);
  // Remaining-time form agrees with the arccos expression away from T.
  const double s = 0.3 * T;
  CHECK(beta_from_remaining(s, 3, 1) == doctest::Approx(0.5 * std::acos(std::exp(-4 * s))).epsilon(1e-14));
}

TEST_CASE("rate is negative on the open interval") {
  for (double b = 0.01; b < kPi / 4; b += 0.01) CHECK(beta_rate(b, 5, 1) < 0.0);
}

TEST_CASE("rk4 beta against the closed form") {
  auto c = config(1, 3, kPi / 6);
  const double T = *singular_time(c.beta0, 3, 1);
  double worst = 0.0;
  const auto tr = integrate_beta(c, 0.9 * T);
  CHECK_FALSE(tr.truncated);
  CHECK(tr.samples.back().first == doctest::Approx(0.9 * T).epsilon(1e-15));
  for (const auto& [t, b] : tr.samples) worst = std::max(worst, std::abs(b - beta_closed_form(c.beta0, 3, 1, t)));
  CHECK(worst < 1e-8);

  // Order check on a coarse grid.
  auto err = [&](double dt) {
    c.dt = dt;
    const auto r = integrate_beta(c, 0.5 * T);
    return std::abs(r.samples.back().second - beta_closed_form(c.beta0, 3, 1, r.samples.back().first));
  };
  CHECK(err(T / 40) / err(T / 80) == doctest::Approx(16.0).epsilon(0.1));

  c.dt = 1e-4;
  CHECK(integrate_beta(c, T).truncated);
}

TEST_CASE("point cloud follows the closed form") {
  const auto c = config(2, 2, 0.5, 30);
  const double T = *singular_time(c.beta0, 4, 2);
  const auto st = flow_point_cloud(c, 0.9 * T);
  CHECK(st.cloud.size() == 30);
  CHECK(st.max_closed_form_error < 1e-6);
  CHECK(st.max_sphere_error < 1e-8);
  CHECK(st.consistent);
  CHECK(st.beta == doctest::Approx(beta_closed_form(c.beta0, 4, 2, 0.9 * T)).epsilon(1e-9));
  // Independent check of one point against (sqrt2 cos b x, sqrt2 sin b y).
  const double b = beta_closed_form(c.beta0, 4, 2, 0.9 * T);
  for (std::size_t i = 0; i < 4; ++i) {
    CHECK(st.cloud[0][i] == doctest::Approx(std::sqrt(2.0) * std::cos(b) * st.base[0][i]).epsilon(1e-6));
    CHECK(st.cloud[0][4 + i] == doctest::Approx(std::sqrt(2.0) * std::sin(b) * st.base[0][4 + i]).epsilon(1e-6));
  }
}

TEST_CASE("the minimal member does not move") {
  const auto sys = make_system(1, 3);
  const auto p = sample_point(ManifoldSpec::m_plus_t(sys, kPi / 4), 3);
  CHECK(max_abs(mean_curvature_field(p.z, 3, 1)) < 1e-15);
  // The field is the mean curvature vector of the analytic form.
  const auto q = sample_point(ManifoldSpec::m_plus_t(sys, 0.3), 3);
  const Vector h = analytic_shape_operators(q).mean_curvature_vector();
  CHECK(max_abs(subtract(h, mean_curvature_field(q.z, 3, 1))) < 1e-13);
}

TEST_CASE("convergence to the equatorial sphere") {
  const auto c = config(1, 3, kPi / 6, 10);
  const double T = *singular_time(c.beta0, 3, 1);
  double previous = 1.0;
  for (double gap : {1e-2, 1e-3, 1e-4}) {
    const auto st = flow_point_cloud(c, T - gap);
    const double d = convergence_check(st);
    const double b = beta_closed_form(c.beta0, 3, 1, T - gap);
    CHECK(d <= 2 * std::sin(b) + 1e-8);
    CHECK(d == doctest::Approx(2 * std::sin(b / 2)).epsilon(1e-8));
    CHECK(d < previous);
    previous = d;
  }
  // beta(T - 1e-4) is about 0.014, above the hand-off angle 0.01.
  CHECK_FALSE(flow_point_cloud(c, T - 1e-4).handed_off);
  const auto st = flow_point_cloud(c, T - 1e-6);
  CHECK(st.handed_off);
  CHECK(st.max_closed_form_error < 1e-6);
}

TEST_CASE("blow-up profile") {
  for (auto [m, k] : {std::pair{1, 3}, {3, 2}}) {
    const auto c = config(m, k, kPi / 6);
    const auto r = blowup_profile(c);
    CHECK(r.products.size() == 24);
    CHECK(std::abs(r.limit - 0.5) < 1e-2);
    CHECK(r.monotone);
    const int l = c.system->l();
    const double T = *singular_time(c.beta0, l, m);
    CHECK(r.initial_product == doctest::Approx(sup_norm_sq(c.beta0, l, m) * T).epsilon(1e-15));
    for (double p : r.products) CHECK(p <= r.sup_product);
    // p(s) = (y/2) coth y + 2 m (l-m-1) s with y = 4 (l-m-1) s.
    const int n = l - m - 1;
    const double s = r.remaining[3];
    const double y = 4.0 * n * s;
    CHECK(r.products[3] == doctest::Approx(0.5 * y / std::tanh(y) + 2.0 * m * n * s).epsilon(1e-12));
  }
}

TEST_CASE("trajectory export") {
  const auto c = config(1, 3, kPi / 6, 5);
  const std::string csv = trajectory_csv(c, 0.1, 11);
  CHECK(csv.rfind("t,beta,sup_B2,product,cloud_residual\n", 0) == 0);
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 12);
}

TEST_CASE("flow configuration errors") {
  CHECK_THROWS_AS(validate(config(1, 3, kPi / 4)), Error);
  auto c = config(1, 3, 0.3);
  c.dt = 0.0;
  CHECK_THROWS_AS(validate(c), Error);
  CHECK_THROWS_AS(flow_point_cloud(config(1, 3, 0.3), 10.0), Error);
}
