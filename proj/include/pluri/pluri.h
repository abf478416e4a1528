#ifndef PLURI_H
#define PLURI_H

/* C interface to the pluriharmonic mapping toolkit.
 *
 * Every function returns a pluri_status. On failure the message of the most
 * recent error on the calling thread is available from pluri_last_error().
 * Strings returned through out-parameters are owned by the caller and must be
 * released with pluri_string_free. Complex numbers travel as interleaved
 * (re, im) double pairs; matrices are row-major. */

#include <stddef.h>
#include <stdint.h>

#if defined(PLURI_BUILDING_LIBRARY)
#define PLURI_API __attribute__((visibility("default")))
#else
#define PLURI_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum pluri_status {
  PLURI_OK = 0,
  PLURI_ERR_INVALID_ARGUMENT,
  PLURI_ERR_DIMENSION_MISMATCH,
  PLURI_ERR_SINGULAR,
  PLURI_ERR_DH_SINGULAR,
  PLURI_ERR_HYPOTHESIS_VIOLATED,
  PLURI_ERR_DOMAIN,
  PLURI_ERR_PRECONDITION,
  PLURI_ERR_NOT_A_COLLISION,
  PLURI_ERR_CASE1_UNSUPPORTED,
  PLURI_ERR_DEGENERATE_DENOMINATOR,
  PLURI_ERR_GRAPH_DISCONNECTED,
  PLURI_ERR_INTEGRAND_NON_FINITE,
  PLURI_ERR_PARSE,
  PLURI_ERR_VALIDATION,
  PLURI_ERR_INTERNAL
} pluri_status;

typedef struct pluri_map pluri_map;
typedef struct pluri_report pluri_report;

PLURI_API const char* pluri_version(void);
PLURI_API const char* pluri_last_error(void);
PLURI_API const char* pluri_status_name(pluri_status status);
PLURI_API void pluri_string_free(char* s);

/* Maps */
PLURI_API pluri_status pluri_map_parse(const char* spec_json, pluri_map** out);
PLURI_API pluri_status pluri_map_load(const char* path, pluri_map** out);
/* f_k(z) = (k z1, z2 / k, z3, ..., zn), g = 0. */
PLURI_API pluri_status pluri_map_counterexample(int k, int n, pluri_map** out);
PLURI_API void pluri_map_free(pluri_map* map);
PLURI_API int pluri_map_dim(const pluri_map* map);
PLURI_API pluri_status pluri_map_serialize(const pluri_map* map, char** out);

/* z and out hold n complex values (2n doubles). */
PLURI_API pluri_status pluri_eval(const pluri_map* map, const double* z, double* out);
PLURI_API pluri_status pluri_det_jacobian(const pluri_map* map, const double* z, double* out);
/* Largest and smallest stretch of the real differential. */
PLURI_API pluri_status pluri_lambda_extremes(const pluri_map* map, const double* z, double* big, double* small);
/* omega = Dg Dh^{-1}, n*n complex values row-major. */
PLURI_API pluri_status pluri_omega(const pluri_map* map, const double* z, double* out);

/* Constants and closed forms */
PLURI_API void pluri_constants(double* psi0, double* r0, double* t_star, double* nu_max);
PLURI_API pluri_status pluri_bloch_radii(int n, double alpha, double volume, double* ru, double* rc);
PLURI_API pluri_status pluri_mprime(double m, double c, double* out);

/* Commands. options_json is a JSON object (may be NULL for {}). A report is
 * produced even for failing commands; its exit code follows the CLI contract
 * (0 pass, 1 violation, 2 hypothesis violated, 3 usage error). */
PLURI_API pluri_status pluri_run(const char* command, const char* options_json, pluri_report** out);
PLURI_API pluri_status pluri_report_json(const pluri_report* report, char** out);
/* Empty string when the command has no tabular output. */
PLURI_API pluri_status pluri_report_csv(const pluri_report* report, char** out);
PLURI_API int pluri_report_exit_code(const pluri_report* report);
PLURI_API void pluri_report_free(pluri_report* report);

#ifdef __cplusplus
}
#endif

#endif /* PLURI_H */
