/* C interface to the zero-mean-curvature toolkit. */
#ifndef ZMC_ZMC_H
#define ZMC_ZMC_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#define ZMC_API __declspec(dllexport)
#else
#define ZMC_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum zmc_status {
  ZMC_OK = 0,
  ZMC_ERR_PARSE = 1,
  ZMC_ERR_ARGUMENT = 2,
  ZMC_ERR_DIMENSION = 3,
  ZMC_ERR_SURD = 4,     /* two different square roots in one expression */
  ZMC_ERR_DOMAIN = 5,
  ZMC_ERR_NUMERIC = 6,  /* Newton failure, rank deficiency, infeasible sample */
  ZMC_ERR_INTERNAL = 7
} zmc_status;

typedef enum zmc_command {
  ZMC_CMD_VERIFY = 0,
  ZMC_CMD_SPECTRUM = 1,
  ZMC_CMD_SAMPLE = 2,
  ZMC_CMD_CLASSIFY = 3,
  ZMC_CMD_REPORT = 4
} zmc_command;

typedef enum zmc_tolerance {
  ZMC_TOL_RESIDUAL = 0,
  ZMC_TOL_SPECTRUM = 1,
  ZMC_TOL_NEWTON = 2,
  ZMC_TOL_MEAN_CURVATURE = 3
} zmc_tolerance;

typedef struct zmc_poly zmc_poly;
typedef struct zmc_job zmc_job;

/* Message for the last failing call on this thread; never NULL. */
ZMC_API const char* zmc_last_error(void);
ZMC_API const char* zmc_version(void);
/* Releases strings returned through char** out-parameters. */
ZMC_API void zmc_string_free(char* s);

ZMC_API zmc_status zmc_poly_parse(const char* text, int nvars, zmc_poly** out);
/* Defining polynomial of a family such as "ads:2,3,1" or "lawson:2,3". */
ZMC_API zmc_status zmc_poly_family(const char* family, zmc_poly** out);
ZMC_API void zmc_poly_free(zmc_poly* p);
ZMC_API zmc_status zmc_poly_render(const zmc_poly* p, char** out);
/* 0 for NULL; degree is -1 for NULL or the zero polynomial. */
ZMC_API int zmc_poly_nvars(const zmc_poly* p);
ZMC_API int zmc_poly_degree(const zmc_poly* p);
ZMC_API size_t zmc_poly_nterms(const zmc_poly* p);
ZMC_API zmc_status zmc_poly_add(const zmc_poly* a, const zmc_poly* b, zmc_poly** out);
ZMC_API zmc_status zmc_poly_mul(const zmc_poly* a, const zmc_poly* b, zmc_poly** out);
/* var is 1-based. */
ZMC_API zmc_status zmc_poly_diff(const zmc_poly* p, int var, zmc_poly** out);
ZMC_API zmc_status zmc_poly_divide(const zmc_poly* g, const zmc_poly* f, zmc_poly** quotient, zmc_poly** remainder);
ZMC_API zmc_status zmc_poly_eval(const zmc_poly* p, const double* x, size_t n, double* out);

ZMC_API zmc_status zmc_residual(const zmc_poly* f, int s, int epsilon, zmc_poly** out);
/* *divides is 1 when the residual is a multiple of f; *h receives the quotient
   (NULL is allowed when not wanted) and is set to NULL when it does not divide. */
ZMC_API zmc_status zmc_conjecture_check(const zmc_poly* f, int s, int epsilon, int* divides, zmc_poly** h);

ZMC_API zmc_job* zmc_job_new(void);
ZMC_API void zmc_job_free(zmc_job* job);
ZMC_API zmc_status zmc_job_set_command(zmc_job* job, zmc_command command);
ZMC_API zmc_status zmc_job_add_family(zmc_job* job, const char* family);
ZMC_API zmc_status zmc_job_add_grid(zmc_job* job, const char* grid);
ZMC_API zmc_status zmc_job_set_poly(zmc_job* job, const char* text, int nvars);
ZMC_API zmc_status zmc_job_set_sig(zmc_job* job, int s, int epsilon);
ZMC_API zmc_status zmc_job_set_count(zmc_job* job, int count);
ZMC_API zmc_status zmc_job_set_seed(zmc_job* job, uint64_t seed);
ZMC_API zmc_status zmc_job_set_tolerance(zmc_job* job, zmc_tolerance which, double value);
/* JSON array of {"coords": [...]} used by the spectrum command instead of sampling. */
ZMC_API zmc_status zmc_job_set_points(zmc_job* job, const char* json);
ZMC_API zmc_status zmc_job_set_threads(zmc_job* job, int threads);
/* Runs the job. *verdict is 0 on pass and 1 on a mathematical failure; json and
   csv (either may be NULL) receive the documents. */
ZMC_API zmc_status zmc_job_run(zmc_job* job, int* verdict, char** json, char** csv);

#ifdef __cplusplus
}
#endif

#endif
