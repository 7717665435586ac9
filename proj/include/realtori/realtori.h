#ifndef REALTORI_H
#define REALTORI_H

/* C interface to librealtori. Objects are opaque handles owned by the caller
 * and released with the matching *_destroy function. Every function returning
 * rt_status records a message for failures, readable via rt_last_error() on
 * the same thread until the next failing call. */

#include <stddef.h>

#ifdef __cplusplus
extern "C" {
#endif

#if defined(_WIN32)
#define RT_API __declspec(dllexport)
#else
#define RT_API __attribute__((visibility("default")))
#endif

typedef enum rt_status {
  RT_OK = 0,
  RT_ERR_INTERNAL = 1,
  RT_ERR_INPUT = 2,
  RT_UNDECIDED = 3,
  RT_ERR_UNSUPPORTED = 4,
  RT_ERR_NUMERIC = 5
} rt_status;

typedef struct rt_spd rt_spd;       /* positive definite symmetric matrix */
typedef struct rt_result rt_result; /* JSON text produced by a job */

RT_API const char* rt_version(void);
RT_API const char* rt_last_error(void);

/* Copies a g×g row-major matrix; fails unless it is symmetric positive definite. */
RT_API rt_status rt_spd_create(size_t g, const double* entries, rt_spd** out);
RT_API void rt_spd_destroy(rt_spd* y);
RT_API size_t rt_spd_dim(const rt_spd* y);
RT_API rt_status rt_spd_entries(const rt_spd* y, double* out);

/* Minkowski reduction R = A·Y·ᵗA. r_out receives g*g doubles, a_out g*g integers. */
RT_API rt_status rt_spd_reduce(const rt_spd* y, double* r_out, long long* a_out);
RT_API rt_status rt_spd_is_reduced(const rt_spd* y, double tol, int* out);
/* RT_OK with *equivalent set, or RT_UNDECIDED; witness (g*g, may be NULL) gets A with A·Y1·ᵗA = Y2. */
RT_API rt_status rt_spd_equivalent(const rt_spd* y1, const rt_spd* y2, double tol, int* equivalent,
                                   long long* witness);

/* Runs one request object or an array of them (see the README for schemas).
 * options_json may be NULL or an object with any of "tol", "eps", "bound",
 * "seed", "threads", "cmd"; set keys override the same keys in each
 * request, except "cmd", which only fills in requests that lack one.
 * The return value mirrors the command-line exit code: RT_OK, RT_UNDECIDED,
 * RT_ERR_INPUT or RT_ERR_INTERNAL. *out is set whenever a result was produced,
 * including error results. */
RT_API rt_status rt_job_run(const char* request_json, const char* options_json, rt_result** out);
RT_API const char* rt_result_json(const rt_result* r);
RT_API int rt_result_exit_code(const rt_result* r);
RT_API void rt_result_destroy(rt_result* r);

/* Null-terminated list of accepted "cmd" values; static storage. */
RT_API const char* const* rt_job_commands(size_t* count);

#ifdef __cplusplus
}
#endif

#endif
