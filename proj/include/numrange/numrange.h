#ifndef NUMRANGE_H
#define NUMRANGE_H

/* C interface of the numrange library. Every call returns an nr_status; on
   failure nr_last_error() holds the diagnostic of the calling thread. Strings
   returned through char** are owned by the caller and released with
   nr_string_free. */

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#define NR_API __declspec(dllexport)
#else
#define NR_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum nr_status {
  NR_OK = 0,
  NR_ERR_USAGE = 1,        /* invalid argument */
  NR_ERR_PARSE = 2,        /* malformed matrix file or JSON text */
  NR_ERR_PRECONDITION = 3, /* documented precondition of the analysis fails */
  NR_ERR_INTERNAL = 4
} nr_status;

typedef struct nr_matrix nr_matrix;

NR_API const char* nr_last_error(void);
NR_API void nr_string_free(char* s);
/* Worker threads for the angle scans; output does not depend on it. */
NR_API void nr_set_threads(int n);

/* re and im are d*d row-major arrays. */
NR_API nr_status nr_matrix_create(size_t d, const double* re, const double* im, nr_matrix** out);
NR_API nr_status nr_matrix_load(const char* path, nr_matrix** out);
NR_API nr_status nr_matrix_parse_json(const char* text, nr_matrix** out);
NR_API nr_status nr_matrix_to_json(const nr_matrix* a, char** out);
NR_API void nr_matrix_free(nr_matrix* a);
NR_API size_t nr_matrix_dim(const nr_matrix* a);
NR_API nr_status nr_matrix_entry(const nr_matrix* a, size_t i, size_t j, double* re, double* im);

NR_API nr_status nr_support_value(const nr_matrix* a, double theta, double* out);
NR_API nr_status nr_contains(const nr_matrix* a, double x, double y, int* out);
NR_API nr_status nr_hausdorff(const nr_matrix* a, const nr_matrix* b, int samples, double* out);

/* CSV: header "x,y", one point per line. */
NR_API nr_status nr_boundary_csv(const nr_matrix* a, int samples, char** out);
NR_API nr_status nr_oracle_csv(const nr_matrix* a, size_t n, uint64_t seed, char** out);

/* JSON documents. */
NR_API nr_status nr_extremes_json(const nr_matrix* a, char** out);
NR_API nr_status nr_preimage_json(const nr_matrix* a, double x, double y, char** out);
NR_API nr_status nr_flat_json(const nr_matrix* a, char** out);
NR_API nr_status nr_birth_json(const nr_matrix* a, double x, double y, const double* eps, size_t n_eps,
                               char** out);
NR_API nr_status nr_classify3_json(const nr_matrix* a, char** out);
NR_API nr_status nr_canonical3_json(const nr_matrix* a, char** out);
NR_API nr_status nr_closure3_json(const nr_matrix* a, const double* eps, size_t n_eps, char** out);
NR_API nr_status nr_maxent_json(const nr_matrix* a, double x, double y, char** out);
NR_API nr_status nr_probe_json(const nr_matrix* a, double x, double y, int steps, char** out);

#ifdef __cplusplus
}
#endif

#endif
