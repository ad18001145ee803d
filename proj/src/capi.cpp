#include "otfkm/otfkm.h"

#include <cstring>
#include <new>
#include <string>
#include <vector>

#include "otfkm/cartan_munzner.hpp"
#include "otfkm/checks.hpp"
#include "otfkm/error.hpp"
#include "otfkm/mcf.hpp"

struct otfkm_system {
  otfkm::SystemPtr sys;
  otfkm::FkmPolynomial poly;
};

struct otfkm_report_list {
  std::vector<otfkm::CheckReport> rows;
};

namespace {

thread_local std::string last_error;

otfkm_status status_of(otfkm::ErrorCode code) {
  using otfkm::ErrorCode;
  switch (code) {
    case ErrorCode::domain: return OTFKM_ERR_DOMAIN;
    case ErrorCode::dimension: return OTFKM_ERR_DIMENSION;
    case ErrorCode::sampling: return OTFKM_ERR_SAMPLING;
    case ErrorCode::frame: return OTFKM_ERR_FRAME;
    case ErrorCode::estimation: return OTFKM_ERR_ESTIMATION;
    case ErrorCode::numeric: return OTFKM_ERR_NUMERIC;
    case ErrorCode::projection: return OTFKM_ERR_PROJECTION;
    case ErrorCode::integration: return OTFKM_ERR_INTEGRATION;
    case ErrorCode::io: return OTFKM_ERR_IO;
  }
  return OTFKM_ERR_INTERNAL;
}

template <class F>
otfkm_status guarded(F&& body) {
  last_error.clear();
  try {
    body();
    return OTFKM_OK;
  } catch (const otfkm::Error& e) {
    last_error = e.what();
    return status_of(e.code());
  } catch (const std::bad_alloc&) {
    last_error = "out of memory";
  } catch (const std::exception& e) {
    last_error = e.what();
  } catch (...) {
    last_error = "unknown failure";
  }
  return OTFKM_ERR_INTERNAL;
}

otfkm_status bad_argument(const char* what) {
  last_error = what;
  return OTFKM_ERR_ARGUMENT;
}

char* copy_string(const std::string& s) {
  char* out = new char[s.size() + 1];
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

otfkm::CheckOptions to_options(const otfkm_check_options* o) {
  otfkm::CheckOptions opts;
  if (!o) return opts;
  if (o->has_samples) opts.samples = o->samples;
  opts.seed = o->seed;
  if (o->has_t) opts.t = o->t;
  if (o->has_beta0) opts.beta0 = o->beta0;
  if (o->has_tol) opts.tol = o->tol;
  return opts;
}

otfkm_system* wrap(otfkm::SystemPtr sys) {
  otfkm::FkmPolynomial poly(sys);
  return new otfkm_system{std::move(sys), std::move(poly)};
}

}  // namespace

extern "C" {

void otfkm_check_options_init(otfkm_check_options* opts) {
  if (!opts) return;
  *opts = otfkm_check_options{};
  opts->seed = 42;
}

const char* otfkm_status_string(otfkm_status status) {
  switch (status) {
    case OTFKM_OK: return "ok";
    case OTFKM_ERR_DOMAIN: return "domain error";
    case OTFKM_ERR_DIMENSION: return "dimension error";
    case OTFKM_ERR_SAMPLING: return "sampling error";
    case OTFKM_ERR_FRAME: return "frame error";
    case OTFKM_ERR_ESTIMATION: return "estimation error";
    case OTFKM_ERR_NUMERIC: return "numeric error";
    case OTFKM_ERR_PROJECTION: return "projection error";
    case OTFKM_ERR_INTEGRATION: return "integration error";
    case OTFKM_ERR_IO: return "io error";
    case OTFKM_ERR_ARGUMENT: return "invalid argument";
    case OTFKM_ERR_INTERNAL: return "internal error";
  }
  return "unknown status";
}

const char* otfkm_last_error(void) { return last_error.c_str(); }

void otfkm_string_free(char* s) { delete[] s; }

otfkm_status otfkm_system_create(int m, int k, otfkm_system** out) {
  if (!out) return bad_argument("out is null");
  *out = nullptr;
  return guarded([&] { *out = wrap(otfkm::make_system(m, k)); });
}

otfkm_status otfkm_system_from_json(const char* json, otfkm_system** out) {
  if (!json || !out) return bad_argument("null argument");
  *out = nullptr;
  return guarded([&] {
    *out = wrap(std::make_shared<const otfkm::CliffordSystem>(otfkm::system_from_json(json)));
  });
}

void otfkm_system_destroy(otfkm_system* sys) { delete sys; }

otfkm_status otfkm_system_dims(const otfkm_system* sys, int* m, int* k, int* l) {
  if (!sys) return bad_argument("system is null");
  if (m) *m = sys->sys->m();
  if (k) *k = sys->sys->k();
  if (l) *l = sys->sys->l();
  return OTFKM_OK;
}

otfkm_status otfkm_system_to_json(const otfkm_system* sys, char** out) {
  if (!sys || !out) return bad_argument("null argument");
  return guarded([&] { *out = copy_string(otfkm::to_json(*sys->sys)); });
}

otfkm_status otfkm_system_matrix(const otfkm_system* sys, int alpha, double* buf, size_t capacity) {
  if (!sys || !buf) return bad_argument("null argument");
  if (alpha < 0 || alpha > sys->sys->m()) return bad_argument("alpha out of range");
  const auto& p = sys->sys->P(alpha);
  if (capacity < p.data().size()) return bad_argument("buffer too small");
  std::memcpy(buf, p.data().data(), p.data().size() * sizeof(double));
  return OTFKM_OK;
}

otfkm_status otfkm_eval_F(const otfkm_system* sys, const double* x, double* value) {
  if (!sys || !x || !value) return bad_argument("null argument");
  const auto n = static_cast<std::size_t>(sys->sys->ambient_dim());
  return guarded([&] { *value = sys->poly.value(std::span<const double>(x, n)); });
}

otfkm_status otfkm_grad_F(const otfkm_system* sys, const double* x, double* grad) {
  if (!sys || !x || !grad) return bad_argument("null argument");
  const auto n = static_cast<std::size_t>(sys->sys->ambient_dim());
  return guarded([&] {
    const auto g = sys->poly.gradient(std::span<const double>(x, n));
    std::memcpy(grad, g.data(), n * sizeof(double));
  });
}

otfkm_status otfkm_singular_time(double beta0, int l, int m, double* T, int* stationary) {
  if (!T || !stationary) return bad_argument("null argument");
  return guarded([&] {
    const auto t = otfkm::singular_time(beta0, l, m);
    *stationary = t ? 0 : 1;
    if (t) *T = *t;
  });
}

otfkm_status otfkm_beta_closed_form(double beta0, int l, int m, double t, double* beta) {
  if (!beta) return bad_argument("null argument");
  return guarded([&] { *beta = otfkm::beta_closed_form(beta0, l, m, t); });
}

otfkm_status otfkm_flow_trajectory_csv(const otfkm_system* sys, double beta0, double t_end, int rows,
                                       int n_points, uint64_t seed, char** out) {
  if (!sys || !out) return bad_argument("null argument");
  return guarded([&] {
    otfkm::FlowConfig cfg;
    cfg.system = sys->sys;
    cfg.beta0 = beta0;
    cfg.n_points = n_points;
    cfg.seed = seed;
    *out = copy_string(otfkm::trajectory_csv(cfg, t_end, rows));
  });
}

otfkm_status otfkm_report_list_create(otfkm_report_list** out) {
  if (!out) return bad_argument("out is null");
  return guarded([&] { *out = new otfkm_report_list{}; });
}

void otfkm_report_list_destroy(otfkm_report_list* list) { delete list; }

otfkm_status otfkm_report_list_size(const otfkm_report_list* list, size_t* size) {
  if (!list || !size) return bad_argument("null argument");
  *size = list->rows.size();
  return OTFKM_OK;
}

otfkm_status otfkm_report_list_all_pass(const otfkm_report_list* list, int* all_pass) {
  if (!list || !all_pass) return bad_argument("null argument");
  *all_pass = otfkm::all_pass(list->rows) ? 1 : 0;
  return OTFKM_OK;
}

otfkm_status otfkm_report_list_json(const otfkm_report_list* list, char** out) {
  if (!list || !out) return bad_argument("null argument");
  return guarded([&] { *out = copy_string(otfkm::to_json(list->rows)); });
}

otfkm_status otfkm_report_list_csv(const otfkm_report_list* list, char** out) {
  if (!list || !out) return bad_argument("null argument");
  return guarded([&] { *out = copy_string(otfkm::to_csv(list->rows)); });
}

size_t otfkm_check_count(void) { return otfkm::check_names().size(); }

const char* otfkm_check_name(size_t i) {
  const auto& names = otfkm::check_names();
  return i < names.size() ? names[i].c_str() : nullptr;
}

otfkm_status otfkm_run_check(const char* name, const otfkm_system* sys, const otfkm_check_options* opts,
                             otfkm_report_list* list) {
  if (!name || !sys || !list) return bad_argument("null argument");
  return guarded([&] {
    auto rows = otfkm::run_check(name, sys->sys, to_options(opts));
    list->rows.insert(list->rows.end(), rows.begin(), rows.end());
  });
}

otfkm_status otfkm_run_all(const int* ms, const int* ks, size_t count, const otfkm_check_options* opts,
                           otfkm_report_list* list) {
  if (!ms || !ks || !list || count == 0) return bad_argument("instance list is empty or null");
  return guarded([&] {
    std::vector<std::pair<int, int>> instances;
    for (size_t i = 0; i < count; ++i) instances.emplace_back(ms[i], ks[i]);
    auto rows = otfkm::run_all(instances, to_options(opts));
    list->rows.insert(list->rows.end(), rows.begin(), rows.end());
  });
}

}  // extern "C"
