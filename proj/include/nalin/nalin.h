/* C interface to the nalin library: finite fields, truncated Laurent series,
 * power-series maps, Schroder conjugacies and the batch commands.
 *
 * Every handle is opaque and owned by the caller; release it with the
 * matching *_free function. Functions return a status code; on failure the
 * message is available from nalin_last_error() on the same thread.
 * Strings returned through char** are released with nalin_string_free().
 */
#ifndef NALIN_H
#define NALIN_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#define NALIN_API __declspec(dllexport)
#else
#define NALIN_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum nalin_status {
  NALIN_OK = 0,
  NALIN_E_INVALID_ARGUMENT,
  NALIN_E_PARSE,
  NALIN_E_INCOMPATIBLE_FIELD,
  NALIN_E_DIVISION_BY_ZERO,
  NALIN_E_NOT_INTEGRAL,
  NALIN_E_NON_UNIT_MULTIPLIER,
  NALIN_E_ROOT_OF_UNITY,
  NALIN_E_PRECISION_EXHAUSTED,
  NALIN_E_HYPOTHESIS_VIOLATED,
  NALIN_E_OUTSIDE_DOMAIN,
  NALIN_E_CHECK_FAILED,
  NALIN_E_IO,
  NALIN_E_INTERNAL
} nalin_status;

typedef enum nalin_zero_kind {
  NALIN_NONZERO = 0,
  NALIN_STRUCTURAL_ZERO = 1,
  NALIN_COMPUTED_ZERO = 2
} nalin_zero_kind;

typedef struct nalin_field nalin_field;
typedef struct nalin_series nalin_series;
typedef struct nalin_map nalin_map;
typedef struct nalin_conjugacy nalin_conjugacy;

/* num/den with den >= 1; infinite values set is_infinite. */
typedef struct nalin_rational {
  int64_t num;
  int64_t den;
  int is_infinite;
} nalin_rational;

typedef struct nalin_profile {
  int p;
  int64_t m;
  nalin_rational v_m;
  int64_t k_prime;
  int has_gauge; /* 0 for linear maps; the fields below are then unset */
  nalin_rational A;
  nalin_rational v_rho;
  nalin_rational v_sigma;
} nalin_profile;

NALIN_API const char* nalin_version(void);
NALIN_API const char* nalin_last_error(void);
NALIN_API const char* nalin_status_name(nalin_status status);
NALIN_API void nalin_string_free(char* s);

NALIN_API nalin_status nalin_field_new(int p, int r, nalin_field** out);
/* modulus: len coefficients, constant term first, monic. */
NALIN_API nalin_status nalin_field_new_modulus(int p, const int* modulus, size_t len, nalin_field** out);
NALIN_API void nalin_field_free(nalin_field* field);
NALIN_API nalin_status nalin_field_describe(const nalin_field* field, char** out);
NALIN_API nalin_status nalin_field_mul(const nalin_field* field, const char* x, const char* y, char** out);
NALIN_API nalin_status nalin_field_inv(const nalin_field* field, const char* x, char** out);
NALIN_API nalin_status nalin_field_order(const nalin_field* field, const char* x, uint64_t* out);

/* prec: absolute horizon in U-units, or -1 for an exact literal. */
NALIN_API nalin_status nalin_series_parse(const nalin_field* field, const char* text, int ram, int64_t prec,
                                          nalin_series** out);
NALIN_API void nalin_series_free(nalin_series* s);
NALIN_API nalin_status nalin_series_render(const nalin_series* s, char** out);
NALIN_API nalin_status nalin_series_valuation(const nalin_series* s, nalin_rational* out);
NALIN_API nalin_status nalin_series_add(const nalin_series* x, const nalin_series* y, nalin_series** out);
NALIN_API nalin_status nalin_series_mul(const nalin_series* x, const nalin_series* y, nalin_series** out);
NALIN_API nalin_status nalin_series_inverse(const nalin_series* x, int64_t rel_cap, nalin_series** out);

/* f(x) = lambda x + sum_i literals[i] x^degrees[i], degrees >= 2. */
NALIN_API nalin_status nalin_map_new(const nalin_field* field, int ram, const char* lambda, const int* degrees,
                                     const char* const* literals, size_t count, nalin_map** out);
NALIN_API void nalin_map_free(nalin_map* f);
NALIN_API nalin_status nalin_map_profile(const nalin_map* f, nalin_profile* out);
NALIN_API nalin_status nalin_map_eval(const nalin_map* f, const nalin_series* x, int64_t cap, nalin_series** out);

NALIN_API nalin_status nalin_solve(const nalin_map* f, int degree, int64_t m0, int64_t m_max, nalin_conjugacy** out);
NALIN_API void nalin_conjugacy_free(nalin_conjugacy* g);
NALIN_API int nalin_conjugacy_degree(const nalin_conjugacy* g);
NALIN_API nalin_status nalin_conjugacy_coefficient(const nalin_conjugacy* g, int k, nalin_series** out,
                                                   nalin_zero_kind* kind);

/* Runs analyze | solve | certify-divergence | disc | sweep on a job document.
 * degree > 0 overrides the job's D; display_epsilon may be NULL (1/2).
 * Returns the process exit code (0 ok, 2 parse, 3 math, 4 check failed);
 * out and err receive the data and diagnostics. */
NALIN_API int nalin_run_command(const char* job_text, const char* command, int degree, const char* display_epsilon,
                                char** out, char** err);

#ifdef __cplusplus
}
#endif

#endif /* NALIN_H */
