// Command-line front end. Talks to the library only through otfkm.h.
#include <CLI11.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "otfkm/otfkm.h"

namespace {

constexpr int kExitPass = 0;
constexpr int kExitFail = 1;
constexpr int kExitError = 2;

struct Args {
  std::optional<int> m, k, samples;
  std::optional<double> t, beta0, tol;
  std::uint64_t seed = 42;
  std::string out = "-";
  std::string format = "json";
  std::string trajectory;
};

struct CliError {
  std::string message;
};

void check(otfkm_status s) {
  if (s != OTFKM_OK) throw CliError{std::string(otfkm_status_string(s)) + ": " + otfkm_last_error()};
}

/// Takes ownership of a library string.
std::string take(char* s) {
  std::string out(s);
  otfkm_string_free(s);
  return out;
}

void write_output(const std::string& path, const std::string& text) {
  if (path == "-") {
    std::cout << text;
    std::cout.flush();
    if (!std::cout) throw CliError{"cannot write to standard output"};
    return;
  }
  std::ofstream f(path, std::ios::binary);
  if (!f) throw CliError{"cannot open output file: " + path};
  f << text;
  f.close();
  if (!f) throw CliError{"cannot write output file: " + path};
}

otfkm_check_options options_of(const Args& a) {
  otfkm_check_options o;
  otfkm_check_options_init(&o);
  o.seed = a.seed;
  if (a.samples) o.has_samples = 1, o.samples = *a.samples;
  if (a.t) o.has_t = 1, o.t = *a.t;
  if (a.beta0) o.has_beta0 = 1, o.beta0 = *a.beta0;
  if (a.tol) o.has_tol = 1, o.tol = *a.tol;
  return o;
}

struct System {
  otfkm_system* p = nullptr;
  explicit System(const Args& a) {
    if (!a.m || !a.k) throw CliError{"--m and --k are required"};
    check(otfkm_system_create(*a.m, *a.k, &p));
  }
  ~System() { otfkm_system_destroy(p); }
};

struct Reports {
  otfkm_report_list* p = nullptr;
  Reports() { check(otfkm_report_list_create(&p)); }
  ~Reports() { otfkm_report_list_destroy(p); }
};

int emit(const Args& a, const Reports& r) {
  char* text = nullptr;
  check(a.format == "csv" ? otfkm_report_list_csv(r.p, &text) : otfkm_report_list_json(r.p, &text));
  write_output(a.out, take(text));
  int ok = 0;
  check(otfkm_report_list_all_pass(r.p, &ok));
  return ok ? kExitPass : kExitFail;
}

int run(const std::string& command, const Args& a) {
  if (command == "build") {
    System sys(a);
    char* json = nullptr;
    check(otfkm_system_to_json(sys.p, &json));
    write_output(a.out, take(json) + "\n");
    return kExitPass;
  }
  const otfkm_check_options opts = options_of(a);
  Reports reports;
  if (command == "all") {
    std::vector<int> ms{1, 2, 3, 4}, ks{3, 2, 2, 2};
    if (a.m || a.k) {
      if (!a.m || !a.k) throw CliError{"all takes both --m and --k or neither"};
      ms = {*a.m};
      ks = {*a.k};
    }
    check(otfkm_run_all(ms.data(), ks.data(), ms.size(), &opts, reports.p));
    return emit(a, reports);
  }
  System sys(a);
  check(otfkm_run_check(command.c_str(), sys.p, &opts, reports.p));
  if (command == "flow" && !a.trajectory.empty()) {
    int m = 0, l = 0;
    check(otfkm_system_dims(sys.p, &m, nullptr, &l));
    const double beta0 = a.beta0.value_or(0.52359877559829882);
    double T = 0.0;
    int stationary = 0;
    check(otfkm_singular_time(beta0, l, m, &T, &stationary));
    if (stationary) throw CliError{"beta0 = pi/4 is stationary; no trajectory to export"};
    char* csv = nullptr;
    check(otfkm_flow_trajectory_csv(sys.p, beta0, 0.9 * T, 101, a.samples.value_or(200), a.seed, &csv));
    write_output(a.trajectory, take(csv));
  }
  return emit(a, reports);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Isoparametric OT-FKM foliations: construction and verification"};
  app.require_subcommand(1, 1);
  app.fallthrough();
  Args a;
  app.add_option("--m", a.m, "number of Clifford matrices minus one (m >= 1)");
  app.add_option("--k", a.k, "multiplicity, l = k delta(m)");
  app.add_option("--t", a.t, "angle of M_+^t in radians");
  app.add_option("--beta0", a.beta0, "initial flow angle in radians");
  app.add_option("--samples", a.samples, "sample / restart / cloud count");
  app.add_option("--seed", a.seed, "random seed")->capture_default_str();
  app.add_option("--tol", a.tol, "override every tolerance");
  app.add_option("--out", a.out, "output path, - for stdout")->capture_default_str();
  app.add_option("--format", a.format, "report format")->check(CLI::IsMember({"json", "csv"}))->capture_default_str();

  const std::vector<std::pair<std::string, std::string>> commands = {
      {"build", "emit the Clifford system as JSON"},
      {"verify-cm", "Cartan-Muenzner identities of F"},
      {"lemma31", "inner-product identities on M_+^t"},
      {"spectrum", "principal curvatures of M_+^t"},
      {"scalar", "scalar curvature of M_+^t"},
      {"sigma", "extrinsic sigma of M_+ and M_-"},
      {"isoparam", "isoparametric chains M_i, N_i and their level sets"},
      {"eigenmap", "focal maps as submersive eigenmaps"},
      {"flow", "mean curvature flow of M_+^beta"},
      {"blowup", "type-I blow-up rate at the singular time"},
      {"all", "full suite on the default instances"},
  };
  std::string chosen;
  for (const auto& [name, help] : commands) {
    auto* sub = app.add_subcommand(name, help);
    sub->callback([&chosen, n = name] { chosen = n; });
    if (name == "flow") sub->add_option("--trajectory", a.trajectory, "also write the (t, beta) CSV here");
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e, std::cout, std::cerr);
    std::cerr << app.help();
    return kExitError;
  }

  try {
    return run(chosen, a);
  } catch (const CliError& e) {
    std::cerr << "error: " << e.message << "\n";
    return kExitError;
  }
}
