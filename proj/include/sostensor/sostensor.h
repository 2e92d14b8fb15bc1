#ifndef SOSTENSOR_H
#define SOSTENSOR_H

/* C interface of the sostensor library.
 *
 * Every call returns a status code; on failure the message is available from
 * sost_last_error() on the calling thread. Strings returned through `char**`
 * are owned by the caller and released with sost_string_free(). Indices in
 * text and JSON output are 1-based. */

#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

#if defined(__GNUC__)
#define SOST_API __attribute__((visibility("default")))
#else
#define SOST_API
#endif

typedef struct sost_tensor sost_tensor;

typedef enum {
  SOST_OK = 0,
  SOST_ERR_PARSE = 1,
  SOST_ERR_INVALID_ARGUMENT = 2,
  SOST_ERR_ODD_ORDER = 3,
  SOST_ERR_CONVERGENCE = 4,
  SOST_ERR_INTERNAL = 5
} sost_status;

typedef enum { SOST_FORMAT_TEXT = 0, SOST_FORMAT_JSON = 1 } sost_format;

/* Outcome of sos / eigmin / pd. */
typedef enum {
  SOST_OUTCOME_YES = 0,         /* certified, computed, positive definite */
  SOST_OUTCOME_NO = 1,          /* infeasible with evidence, not positive definite */
  SOST_OUTCOME_INCONCLUSIVE = 2
} sost_outcome;

typedef struct {
  double tol;         /* <= 0: the command default (1e-9 classify, 1e-6 pd) */
  int blockwise;      /* split into independent blocks before solving */
  int restarts;       /* oracle restarts, 0 means 50 n */
  uint64_t seed;
  int format;         /* sost_format */
  int run_oracle;     /* eigmin / pd: multistart check when n <= 8 */
} sost_options;

SOST_API void sost_options_default(sost_options* opts);

SOST_API const char* sost_last_error(void);
SOST_API void sost_string_free(char* s);

/* Tensor ("tensor m n") or polynomial ("poly m n") text. */
SOST_API sost_status sost_tensor_parse(const char* text, sost_tensor** out);
SOST_API sost_status sost_tensor_load(const char* path, sost_tensor** out);
SOST_API void sost_tensor_free(sost_tensor* t);
SOST_API int sost_tensor_order(const sost_tensor* t);
SOST_API int sost_tensor_dim(const sost_tensor* t);
/* Canonical text form (one line per canonical index). */
SOST_API sost_status sost_tensor_write(const sost_tensor* t, char** out);

/* kind(params), e.g. "identity(4,3)", "example52(1/2,-1)",
 * "procedure1(4,8,2,4,100)", "random_class(mb0,4,3)". */
SOST_API sost_status sost_generate(const char* spec, uint64_t seed, sost_tensor** out);

SOST_API sost_status sost_classify(const sost_tensor* t, const sost_options* opts, char** report);
/* certificate receives the JSON certificate document when certified (else NULL);
 * pass NULL to skip it. */
SOST_API sost_status sost_sos(const sost_tensor* t, const sost_options* opts, char** report, char** certificate,
                              int* outcome);
SOST_API sost_status sost_eigmin(const sost_tensor* t, const sost_options* opts, char** report, int* outcome);
SOST_API sost_status sost_pd(const sost_tensor* t, const sost_options* opts, char** report, int* outcome);
/* suite: "examples" or "pd-test". all_ok is 1 when every row met its tolerance. */
SOST_API sost_status sost_repro(const char* suite, const sost_options* opts, char** report, int* all_ok);

#ifdef __cplusplus
}
#endif

#endif
