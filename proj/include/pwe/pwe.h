/* C interface for the power-weighted Euclidean functionals library.
 *
 * All functions return pwe_status; out-parameters are written only on PWE_OK.
 * Objects returned through out-parameters are owned by the caller and must be
 * released with the matching *_free. pwe_last_error() describes the most
 * recent failure on the calling thread.
 */
#ifndef PWE_H
#define PWE_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#define PWE_API __declspec(dllexport)
#else
#define PWE_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum pwe_status {
  PWE_OK = 0,
  PWE_ERR_USAGE = 1,    /* invalid argument or call sequence */
  PWE_ERR_SIZE = 2,     /* instance exceeds an exact-solver limit */
  PWE_ERR_CONFIG = 3,   /* malformed configuration or request */
  PWE_ERR_INTERNAL = 4, /* invariant failure inside the library */
  PWE_ERR_NOMEM = 5
} pwe_status;

typedef struct pwe_pointset pwe_pointset;
typedef struct pwe_solution pwe_solution;
typedef struct pwe_report pwe_report;

/* Message for the last failure on this thread; never NULL. */
PWE_API const char* pwe_last_error(void);

/* --- point sets ------------------------------------------------------- */

PWE_API pwe_status pwe_pointset_create(int dim, pwe_pointset** out);
PWE_API pwe_status pwe_pointset_push(pwe_pointset* ps, const double* coords);
/* Text format: a "d n" header line, then one point per line. */
PWE_API pwe_status pwe_pointset_parse(const char* text, pwe_pointset** out);
PWE_API pwe_status pwe_pointset_size(const pwe_pointset* ps, long* out);
PWE_API pwe_status pwe_pointset_dim(const pwe_pointset* ps, int* out);
PWE_API void pwe_pointset_free(pwe_pointset* ps);

/* --- solving ---------------------------------------------------------- */

/* functional: "mm" | "mst" | "tsp"; variant: "plain" | "dual";
 * mode: "exact" | "heuristic"; factor: "auto" | "full" | "half".
 * Points must lie in the unit cube. */
PWE_API pwe_status pwe_solve(const pwe_pointset* ps, const char* functional,
                             const char* variant, const char* mode,
                             const char* factor, double p, pwe_solution** out);

PWE_API pwe_status pwe_solution_value(const pwe_solution* s, double* out);
/* 1 when the solver proves optimality, 0 for heuristic output. */
PWE_API pwe_status pwe_solution_certified(const pwe_solution* s, int* out);
PWE_API pwe_status pwe_solution_edge_count(const pwe_solution* s, long* out);
/* Endpoint -1 denotes the boundary attachment vertex. */
PWE_API pwe_status pwe_solution_edge(const pwe_solution* s, long idx, long* a, long* b);
/* Dual solutions only: number of distinct attached points and total
 * attachment cost. Plain solutions yield PWE_ERR_USAGE. */
PWE_API pwe_status pwe_solution_boundary(const pwe_solution* s, long* n_b, double* l_b);
PWE_API void pwe_solution_free(pwe_solution* s);

/* --- experiments ------------------------------------------------------ */

/* request_text holds one INI-style section naming the experiment
 * (axioms, estimate, rates, gaps, density-approx, report); keys mirror the
 * command-line flags. The report carries an exit code (0 pass, 1 assertion
 * violated, 3 inconclusive), human-readable text, and artifact files. */
PWE_API pwe_status pwe_run_experiment(const char* request_text, pwe_report** out);

PWE_API pwe_status pwe_report_exit_code(const pwe_report* r, int* out);
PWE_API pwe_status pwe_report_text(const pwe_report* r, const char** out);
PWE_API pwe_status pwe_report_artifact_count(const pwe_report* r, long* out);
PWE_API pwe_status pwe_report_artifact(const pwe_report* r, long idx, const char** name,
                                       const char** data);
PWE_API void pwe_report_free(pwe_report* r);

#ifdef __cplusplus
}
#endif

#endif /* PWE_H */
