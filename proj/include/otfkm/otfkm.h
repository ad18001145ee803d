/* C interface to the otfkm library. All functions return an otfkm_status;
 * on failure otfkm_last_error() describes the problem for the calling thread.
 * Strings returned through char** are owned by the caller and released with
 * otfkm_string_free. */
#ifndef OTFKM_H
#define OTFKM_H

#include <stddef.h>
#include <stdint.h>

#if defined(OTFKM_BUILDING_LIBRARY)
#define OTFKM_API __attribute__((visibility("default")))
#else
#define OTFKM_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum {
  OTFKM_OK = 0,
  OTFKM_ERR_DOMAIN = 1,
  OTFKM_ERR_DIMENSION = 2,
  OTFKM_ERR_SAMPLING = 3,
  OTFKM_ERR_FRAME = 4,
  OTFKM_ERR_ESTIMATION = 5,
  OTFKM_ERR_NUMERIC = 6,
  OTFKM_ERR_PROJECTION = 7,
  OTFKM_ERR_INTEGRATION = 8,
  OTFKM_ERR_IO = 9,
  OTFKM_ERR_ARGUMENT = 10, /* null pointer or out-of-range argument */
  OTFKM_ERR_INTERNAL = 11
} otfkm_status;

typedef struct otfkm_system otfkm_system;
typedef struct otfkm_report_list otfkm_report_list;

typedef struct {
  int has_samples; /* nonzero: use samples, otherwise the check default */
  int samples;
  uint64_t seed;
  int has_t;
  double t;
  int has_beta0;
  double beta0;
  int has_tol;
  double tol;
} otfkm_check_options;

OTFKM_API void otfkm_check_options_init(otfkm_check_options* opts);

OTFKM_API const char* otfkm_status_string(otfkm_status status);
/* Message of the last failure on this thread; empty when none. */
OTFKM_API const char* otfkm_last_error(void);
OTFKM_API void otfkm_string_free(char* s);

/* --- Clifford systems --- */
OTFKM_API otfkm_status otfkm_system_create(int m, int k, otfkm_system** out);
OTFKM_API otfkm_status otfkm_system_from_json(const char* json, otfkm_system** out);
OTFKM_API void otfkm_system_destroy(otfkm_system* sys);
OTFKM_API otfkm_status otfkm_system_dims(const otfkm_system* sys, int* m, int* k, int* l);
OTFKM_API otfkm_status otfkm_system_to_json(const otfkm_system* sys, char** out);
/* Copies P_alpha (2l x 2l, row-major) into buf, which holds `capacity` doubles. */
OTFKM_API otfkm_status otfkm_system_matrix(const otfkm_system* sys, int alpha, double* buf, size_t capacity);

/* --- FKM polynomial on R^{2l}; x has 2l entries --- */
OTFKM_API otfkm_status otfkm_eval_F(const otfkm_system* sys, const double* x, double* value);
OTFKM_API otfkm_status otfkm_grad_F(const otfkm_system* sys, const double* x, double* grad);

/* --- mean curvature flow of M_+^beta --- */
/* Sets *stationary = 1 and leaves *T untouched when the flow never becomes singular. */
OTFKM_API otfkm_status otfkm_singular_time(double beta0, int l, int m, double* T, int* stationary);
OTFKM_API otfkm_status otfkm_beta_closed_form(double beta0, int l, int m, double t, double* beta);
OTFKM_API otfkm_status otfkm_flow_trajectory_csv(const otfkm_system* sys, double beta0, double t_end,
                                                 int rows, int n_points, uint64_t seed, char** out);

/* --- verification reports --- */
OTFKM_API otfkm_status otfkm_report_list_create(otfkm_report_list** out);
OTFKM_API void otfkm_report_list_destroy(otfkm_report_list* list);
OTFKM_API otfkm_status otfkm_report_list_size(const otfkm_report_list* list, size_t* size);
/* Nonzero when every non-skipped row passes. */
OTFKM_API otfkm_status otfkm_report_list_all_pass(const otfkm_report_list* list, int* all_pass);
OTFKM_API otfkm_status otfkm_report_list_json(const otfkm_report_list* list, char** out);
OTFKM_API otfkm_status otfkm_report_list_csv(const otfkm_report_list* list, char** out);

/* Number of check names and the i-th name (static storage). */
OTFKM_API size_t otfkm_check_count(void);
OTFKM_API const char* otfkm_check_name(size_t i);
/* Appends the rows of one named check to list. */
OTFKM_API otfkm_status otfkm_run_check(const char* name, const otfkm_system* sys,
                                       const otfkm_check_options* opts, otfkm_report_list* list);
/* Runs every check on the given (m, k) instances plus the documented skipped row. */
OTFKM_API otfkm_status otfkm_run_all(const int* ms, const int* ks, size_t count,
                                     const otfkm_check_options* opts, otfkm_report_list* list);

#ifdef __cplusplus
}
#endif

#endif
