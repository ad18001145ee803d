// Acceptance suite: one line per criterion, exit status 0 iff all pass.
// Usage: acceptance <path-to-cli>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <regex>
#include <string>
#include <vector>

#include "otfkm/cartan_munzner.hpp"
#include "otfkm/focal_maps.hpp"
#include "otfkm/geometry.hpp"
#include "otfkm/mcf.hpp"

using namespace otfkm;

namespace {

constexpr double kPi = std::numbers::pi;
const std::vector<std::pair<int, int>> kInstances{{1, 3}, {2, 2}, {3, 2}, {4, 2}};
const std::vector<double> kAngles{0.2, kPi / 6, 0.6, kPi / 4};

struct Outcome {
  bool pass = true;
  std::string detail;

  void require(bool ok, const std::string& what) {
    if (!ok) pass = false;
    if (!detail.empty()) detail += "; ";
    detail += what;
  }
};

std::string sci(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", v);
  return buf;
}

/// "name err < tol" as a detail fragment.
std::string bound(const std::string& name, double err, double tol) {
  return name + " " + sci(err) + (err < tol ? " < " : " >= ") + sci(tol);
}

double gap(const Vector& a, const Vector& b) {
  if (a.size() != b.size()) return INFINITY;
  return max_abs(subtract(a, b));
}

std::uint64_t seed_of(int j) { return 42 + 1000003ULL * static_cast<std::uint64_t>(j); }

// 1 ---------------------------------------------------------------------------
Outcome clifford_relations() {
  Outcome o;
  const auto start = std::chrono::steady_clock::now();
  double worst = 0.0;
  for (auto [m, k] : {std::pair{1, 3}, {2, 2}, {3, 2}, {4, 2}, {5, 1}, {8, 1}, {9, 1}}) {
    const auto sys = build_symmetric_system(m, k);
    worst = std::max(worst, anticommutator_residual(sys.matrices(), 1.0));
    worst = std::max(worst, anticommutator_residual(sys.skew_source().generators, -1.0));
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  o.require(worst < 1e-12, bound("anticommutator residual", worst, 1e-12));
  o.require(secs < 1.0, bound("runtime s", secs, 1.0));
  return o;
}

// 2 ---------------------------------------------------------------------------
Outcome cm_identities() {
  Outcome o;
  const auto start = std::chrono::steady_clock::now();
  double grad = 0.0, lap = 0.0;
  for (auto [m, k] : {std::pair{1, 3}, {2, 2}, {3, 2}, {4, 2}, {5, 1}, {8, 1}, {9, 1}}) {
    const auto rep = verify_cm_identities(FkmPolynomial(make_system(m, k)), 1000, 42, 1e-10);
    grad = std::max(grad, rep.max_grad_residual);
    lap = std::max(lap, rep.max_lap_residual);
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  o.require(grad < 1e-10, bound("gradient", grad, 1e-10));
  o.require(lap < 1e-10, bound("laplacian", lap, 1e-10));
  o.require(secs < 5.0, bound("runtime s", secs, 5.0));
  return o;
}

// 3 ---------------------------------------------------------------------------
Outcome q_identities() {
  Outcome o;
  double worst = 0.0;
  for (auto [m, k] : kInstances) {
    const auto sys = make_system(m, k);
    for (double t : kAngles) {
      const auto spec = ManifoldSpec::m_plus_t(sys, t);
      for (int j = 0; j < 100; ++j) worst = std::max(worst, verify_q_identities(sample_point(spec, seed_of(j))).max_residual);
    }
  }
  o.require(worst < 1e-10, bound("max residual", worst, 1e-10));
  return o;
}

// 4 ---------------------------------------------------------------------------
Outcome shape_spectra() {
  Outcome o;
  double worst = 0.0;
  for (auto [m, k] : kInstances) {
    const auto sys = make_system(m, k);
    const int l = sys->l(), nn = l - m - 1;
    for (double t : kAngles) {
      // Expected spectra written out from the multiplicities (l-m-1, m, l-m-1).
      Vector e0, ea;
      for (int r = 0; r < nn; ++r) e0.push_back(-std::tan(t)), ea.push_back(-1.0);
      for (int r = 0; r < m; ++r) e0.push_back(0.0), ea.push_back(0.0);
      for (int r = 0; r < nn; ++r) e0.push_back(1.0 / std::tan(t)), ea.push_back(1.0);
      const auto spec = ManifoldSpec::m_plus_t(sys, t);
      for (int j = 0; j < 50; ++j) {
        const auto sff = analytic_shape_operators(sample_point(spec, seed_of(j)));
        worst = std::max(worst, gap(shape_spectrum(sff.components[0]), e0));
        for (int a = 1; a <= m; ++a) worst = std::max(worst, gap(shape_spectrum(sff.components[a]), ea));
      }
    }
  }
  o.require(worst < 1e-8, bound("max eigenvalue error", worst, 1e-8));
  return o;
}

// 5 ---------------------------------------------------------------------------
Outcome numeric_sff() {
  Outcome o;
  double worst = 0.0;
  for (auto [m, k] : kInstances) {
    const auto sys = make_system(m, k);
    for (double t : kAngles) {
      const auto spec = ManifoldSpec::m_plus_t(sys, t);
      for (int j = 0; j < 10; ++j) {
        const Frame f = tangent_normal_frame(sample_point(spec, seed_of(j)));
        const auto exact = analytic_shape_operators(f);
        const auto approx = numeric_second_fundamental_form(f, {1e-4, false});
        for (std::size_t a = 0; a < exact.components.size(); ++a)
          worst = std::max(worst, max_abs_entry(exact.components[a] - approx.components[a]));
      }
    }
  }
  o.require(worst < 1e-4, bound("max entry error", worst, 1e-4));
  return o;
}

// 6 ---------------------------------------------------------------------------
Outcome scalar_curvature() {
  Outcome o;
  double worst = 0.0, slack = INFINITY;
  for (auto [m, k] : kInstances) {
    const auto sys = make_system(m, k);
    const int l = sys->l();
    for (double t : kAngles) {
      const auto spec = ManifoldSpec::m_plus_t(sys, t);
      for (int j = 0; j < 5; ++j) {
        const auto sff = numeric_second_fundamental_form(sample_point(spec, seed_of(j)), 1e-4);
        worst = std::max(worst, std::abs(scalar_curvature_numeric(sff) - scalar_curvature_analytic(l, m, t)));
      }
    }
    const double floor = scalar_curvature_analytic(l, m, kPi / 4);
    for (int j = 1; j <= 20; ++j) slack = std::min(slack, scalar_curvature_analytic(l, m, kPi / 4 * j / 20) - floor);
  }
  o.require(worst < 1e-3, bound("Gauss-equation error", worst, 1e-3));
  o.require(slack >= -1e-10, "min slack " + sci(slack) + (slack >= -1e-10 ? " >= -1e-10" : " < -1e-10"));
  return o;
}

// 7 ---------------------------------------------------------------------------
Outcome isoparametric() {
  Outcome o;
  double grad = 0.0, lap = 0.0, spec0 = 0.0, spec35 = 0.0, minimal = 0.0;
  for (auto [m, k] : kInstances) {
    const auto sys = make_system(m, k);
    std::vector<ManifoldSpec> chain;
    for (int i = 0; i < m; ++i) chain.push_back(ManifoldSpec::m_chain(sys, i));
    for (int i = 2; i <= m; ++i) chain.push_back(ManifoldSpec::n_chain(sys, i));
    for (const auto& spec : chain)
      for (int j = 0; j < 3; ++j) {
        const auto rep = isoparametric_identity_check(sample_point(spec, seed_of(j)));
        grad = std::max(grad, rep.gradient_residual);
        lap = std::max(lap, rep.laplacian_residual);
      }
    for (int i = 0; i < m; ++i) {
      const auto u0 = ManifoldSpec::level_u(sys, i, 0.0);
      const auto u35 = ManifoldSpec::level_u(sys, i, 0.6);
      for (int j = 0; j < 3; ++j) {
        // Three-valued spectra from the expected multiplicities (l-i-2, i+1, l-i-2).
        const int outer = sys->l() - i - 2;
        Vector e0, e35;
        for (int r = 0; r < outer; ++r) e0.push_back(-1), e35.push_back(-0.5);
        for (int r = 0; r <= i; ++r) e0.push_back(0), e35.push_back(0);
        for (int r = 0; r < outer; ++r) e0.push_back(1), e35.push_back(2);
        spec0 = std::max(spec0, gap(level_set_spectrum(sample_point(u0, seed_of(j))), e0));
        spec35 = std::max(spec35, gap(level_set_spectrum(sample_point(u35, seed_of(j))), e35));
      }
      for (int j = 0; j < 3; ++j) {
        const auto p = sample_point(ManifoldSpec::m_chain(sys, i + 1), seed_of(j));
        const Frame outer = tangent_normal_frame(make_point(ManifoldSpec::m_chain(sys, i), p.z));
        minimal = std::max(minimal, relative_mean_curvature(numeric_second_fundamental_form(p, 1e-4), outer.tangent));
        for (int sign : {1, -1}) {
          const auto q = sample_point(ManifoldSpec::focal_u(sys, i, sign), seed_of(j));
          const Frame outer_q = tangent_normal_frame(make_point(ManifoldSpec::m_chain(sys, i), q.z));
          minimal = std::max(minimal,
                             relative_mean_curvature(numeric_second_fundamental_form(q, 1e-4), outer_q.tangent));
        }
      }
    }
    for (int i = 2; i <= m; ++i)
      for (double c : {0.0, 0.6}) {
        const auto v = ManifoldSpec::level_v(sys, i, c);
        for (int j = 0; j < 3; ++j) {
          const double e = gap(level_set_spectrum(sample_point(v, seed_of(j))), expected_level_spectrum(v));
          (c == 0.0 ? spec0 : spec35) = std::max(c == 0.0 ? spec0 : spec35, e);
        }
      }
  }
  o.require(grad < 1e-8, bound("gradient", grad, 1e-8));
  o.require(lap < 1e-3, bound("laplacian", lap, 1e-3));
  o.require(spec0 < 1e-3, bound("spectrum c=0", spec0, 1e-3));
  o.require(spec35 < 1e-3, bound("spectrum c=3/5", spec35, 1e-3));
  o.require(minimal < 1e-3, bound("relative mean curvature", minimal, 1e-3));
  return o;
}

// 8 ---------------------------------------------------------------------------
Outcome sigma() {
  Outcome o;
  double plus = 0.0, minus = 0.0, top = 0.0;
  for (auto [m, k] : kInstances) {
    const auto sys = make_system(m, k);
    const auto p = sigma_extrinsic(ManifoldSpec::m_plus_t(sys, kPi / 4), 100, 42);
    const auto q = sigma_extrinsic(ManifoldSpec::m_minus(sys), 100, 42);
    plus = std::max(plus, std::abs(p.best - 1.0));
    minus = std::max(minus, std::abs(q.best - 1.0));
    top = std::max({top, p.best, q.best});
  }
  o.require(plus < 1e-6, bound("|sigma(M+) - 1|", plus, 1e-6));
  o.require(minus < 1e-3, bound("|sigma(M-) - 1|", minus, 1e-3));
  o.require(top <= 1.0 + 1e-6, "max " + sci(top - 1.0) + " above 1");
  return o;
}

// 9 ---------------------------------------------------------------------------
Outcome eigenmaps() {
  Outcome o;
  double unit = 0.0, mean = 0.0;
  bool rank_ok = true, eigen_ok = true;
  for (auto [m, k] : kInstances) {
    const auto sys = make_system(m, k);
    const int l = sys->l();
    std::vector<FocalMapSpec> maps;
    for (int i = 0; i < m; ++i)
      for (int s : {1, -1}) maps.push_back({FocalFamily::phi, i, s});
    for (int i = 2; i <= m; ++i)
      for (int s : {1, -1}) maps.push_back({FocalFamily::psi, i, s});
    for (const auto& f : maps) {
      const auto rep = verify_eigenmap(f, sys, 5, 42);
      unit = std::max(unit, rep.max_unit_error);
      mean = std::max(mean, rep.max_mean_curvature);
      rank_ok = rank_ok && rep.min_rank == l - 1;
      const int n = f.family == FocalFamily::phi ? 2 * l - f.i - 3 : l + f.i - 2;
      eigen_ok = eigen_ok && rep.eigenvalue == n && focal_domain(f, sys).dimension() == n;
    }
  }
  o.require(unit < 1e-12, bound("unit norm", unit, 1e-12));
  o.require(rank_ok, rank_ok ? "rank l-1 everywhere" : "rank deficit");
  o.require(mean < 1e-3, bound("|H_eucl + n z|", mean, 1e-3));
  o.require(eigen_ok, eigen_ok ? "eigenvalue = domain dimension" : "eigenvalue mismatch");
  return o;
}

// 10 --------------------------------------------------------------------------
Outcome flow() {
  Outcome o;
  double rk = 0.0, cloud = 0.0, limit = 0.0, conv = -INFINITY;
  for (auto [m, k] : kInstances) {
    FlowConfig c;
    c.system = make_system(m, k);
    c.beta0 = kPi / 6;
    c.dt = 1e-4;
    c.n_points = 200;
    c.seed = 42;
    const int l = c.system->l();
    const double T = *singular_time(c.beta0, l, m);
    for (const auto& [t, b] : integrate_beta(c, 0.9 * T).samples)
      rk = std::max(rk, std::abs(b - beta_closed_form(c.beta0, l, m, t)));
    cloud = std::max(cloud, flow_point_cloud(c, 0.9 * T).max_closed_form_error);
    limit = std::max(limit, std::abs(blowup_profile(c).limit - 0.5));
    const double t_near = T - 1e-4;
    const auto near = flow_point_cloud(c, t_near);
    conv = std::max(conv, convergence_check(near) - 2.0 * std::sin(beta_closed_form(c.beta0, l, m, t_near)));
  }
  const double t_err = std::abs(*singular_time(kPi / 6, 3, 1) - std::log(2.0) / 4.0);
  o.require(rk < 1e-8, bound("rk4 beta", rk, 1e-8));
  o.require(cloud < 1e-6, bound("cloud", cloud, 1e-6));
  o.require(limit < 1e-2, bound("|limit - 1/2|", limit, 1e-2));
  o.require(t_err < 1e-12, bound("T - ln2/4", t_err, 1e-12));
  o.require(conv < 1e-8, "distance - 2 sin beta " + sci(conv) + (conv < 1e-8 ? " < 1e-8" : " >= 1e-8"));
  return o;
}

// 11 --------------------------------------------------------------------------
bool capture(const std::string& command, std::string& out) {
  FILE* pipe = popen(command.c_str(), "r");
  if (!pipe) return false;
  char buf[4096];
  std::size_t n;
  while ((n = fread(buf, 1, sizeof buf, pipe)) > 0) out.append(buf, n);
  return pclose(pipe) == 0;
}

Outcome determinism(const std::string& cli) {
  Outcome o;
  if (cli.empty()) {
    o.require(false, "no CLI path given");
    return o;
  }
  const std::string cmd = "\"" + cli + "\" all --seed 42";
  std::string a, b;
  const bool ok_a = capture(cmd, a), ok_b = capture(cmd, b);
  const std::regex times("\"wall_time_ms\": [^}]*");
  const std::string sa = std::regex_replace(a, times, ""), sb = std::regex_replace(b, times, "");
  o.require(ok_a && ok_b, ok_a && ok_b ? "both runs exit 0" : "a run exited nonzero");
  o.require(!sa.empty() && sa == sb, sa == sb ? "identical numeric content (" + std::to_string(a.size()) + " bytes)"
                                              : "outputs differ");
  return o;
}

}  // namespace

int main(int argc, char** argv) {
  const std::string cli = argc > 1 ? argv[1] : "";
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
      {"Clifford relations", clifford_relations},
      {"Cartan-Muenzner identities", cm_identities},
      {"M_+^t inner-product identities", q_identities},
      {"M_+^t shape operator spectra", shape_spectra},
      {"numeric second fundamental form vs analytic", numeric_sff},
      {"scalar curvature and its minimum at pi/4", scalar_curvature},
      {"isoparametric chains, level sets, minimality", isoparametric},
      {"sigma(M_+) = sigma(M_-) = 1", sigma},
      {"focal maps are submersive eigenmaps", eigenmaps},
      {"mean curvature flow and type-I blow-up", flow},
      {"determinism of the full report", [&] { return determinism(cli); }},
  };
  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome o;
    const auto start = std::chrono::steady_clock::now();
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o.pass = false;
      o.detail = std::string("threw: ") + e.what();
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::printf("%s criterion %2zu  %-46s %s (%.2fs)\n", o.pass ? "PASS" : "FAIL", i + 1,
                criteria[i].first.c_str(), o.detail.c_str(), secs);
    std::fflush(stdout);
    failures += o.pass ? 0 : 1;
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failures, criteria.size());
  return failures == 0 ? 0 : 1;
}
