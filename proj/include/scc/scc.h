/*
 * scc - spatially correlated curve clustering
 *
 * C interface to the gwCRP/CAR clustering core. All functions return a
 * status code; scc_error_message() describes the most recent failure on the
 * calling thread. Objects are opaque handles owned by the library and
 * released with their _free function.
 *
 * Configuration strings are JSON objects; unknown keys are rejected. See the
 * README for the full key list and defaults.
 */
#ifndef SCC_H
#define SCC_H

#include <stddef.h>
#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef enum scc_status {
  SCC_OK = 0,
  SCC_ERR_IO = 1,
  SCC_ERR_FORMAT = 2,
  SCC_ERR_DUPLICATE_RECORD = 3,
  SCC_ERR_DATE_GAP = 4,
  SCC_ERR_DEGENERATE = 5,
  SCC_ERR_DOMAIN = 6,
  SCC_ERR_NUMERIC = 7,
  SCC_ERR_RANK = 8,
  SCC_ERR_MISMATCH = 9,
  SCC_ERR_INVALID_ARGUMENT = 10,
  SCC_ERR_UNKNOWN = 99
} scc_status;

const char* scc_version(void);

/* Message for the last error raised on this thread; empty string if none. */
const char* scc_error_message(void);

/* ---- opaque handles ---- */

typedef struct scc_dataset scc_dataset;  /* curve matrix + region ids */
typedef struct scc_graph scc_graph;      /* adjacency + cached spectrum */
typedef struct scc_result scc_result;    /* finished fit: trace + summaries */

/* ---- datasets ---- */

scc_status scc_dataset_load_curves(const char* path, scc_dataset** out);
scc_status scc_dataset_dims(const scc_dataset* d, int* n_regions, int* n_gridpoints);
/* Returns NULL if the index is out of range. */
const char* scc_dataset_region_id(const scc_dataset* d, int index);
void scc_dataset_free(scc_dataset* d);

/* ---- graphs ---- */

/* Edge-list CSV (region_a,region_b) or 0/1 matrix CSV with a region header. */
scc_status scc_graph_load(const char* path, scc_graph** out);
/* The bundled 51-region US state contiguity graph. */
scc_status scc_graph_us_states(scc_graph** out);
scc_status scc_graph_n_regions(const scc_graph* g, int* n);
/* CAR support interval (1/lambda_min, 1/lambda_max). */
scc_status scc_graph_car_bounds(const scc_graph* g, double* ell, double* u);
void scc_graph_free(scc_graph* g);

/* ---- fitting ---- */

/* Runs the full MCMC at the configured h. config_json may be NULL. */
scc_status scc_fit_run(const scc_dataset* d, const scc_graph* g, const char* config_json,
                       scc_result** out);

scc_status scc_result_lpml(const scc_result* r, double* lpml);
scc_status scc_result_num_clusters(const scc_result* r, int* k);
/* Dahl point-estimate labels, 1-based; labels must hold n_regions ints. */
scc_status scc_result_labels(const scc_result* r, int* labels, size_t n);
scc_status scc_result_phi_interval(const scc_result* r, double* lo, double* hi);
scc_status scc_result_acceptance_rate(const scc_result* r, double* rate);
/* Summary JSON; free with scc_string_free. */
scc_status scc_result_summary_json(const scc_result* r, char** out);
scc_status scc_result_write_trace(const scc_result* r, const char* path);
void scc_result_free(scc_result* r);

void scc_string_free(char* s);

/* ---- file-level commands (the CLI surface) ---- */

/* date_start/date_end: ISO dates or NULL for the full range. */
scc_status scc_preprocess_file(const char* input_csv, const char* date_start,
                               const char* date_end, const char* out_curves,
                               const char* out_report);

/* design in 1..8 */
scc_status scc_simulate_file(int design, uint64_t seed, const char* out_curves,
                             const char* out_truth);

scc_status scc_fit_file(const char* curves_csv, const char* adjacency_csv,
                        const char* config_json, const char* out_trace,
                        const char* out_summary, const char* out_labels);

/* Fits every h in the config's h_grid (config "jobs" fans out workers),
 * writes the h,lpml table and the winning fit's outputs. n_failures reports
 * per-h failures (the run continues past them). */
scc_status scc_select_h_file(const char* curves_csv, const char* adjacency_csv,
                             const char* config_json, const char* out_lpml_csv,
                             const char* out_summary, const char* out_trace,
                             const char* out_labels, int* n_failures);

/* curves_csv may be NULL; when given, a k-means baseline row is added. */
scc_status scc_evaluate_file(const char* estimated_labels_csv, const char* truth_labels_csv,
                             const char* curves_csv, uint64_t baseline_seed,
                             const char* out_json);

scc_status scc_summarize_file(const char* trace_path, const char* curves_csv,
                              const char* adjacency_csv, const char* config_json,
                              const char* out_summary, const char* out_mean_curves_csv);

#ifdef __cplusplus
}
#endif

#endif /* SCC_H */
