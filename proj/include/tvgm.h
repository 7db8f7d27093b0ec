/* tvgm — time-varying graphical model estimation for nonstationary
 * multivariate time series.
 *
 * C interface to the shared library. All functions return a status code
 * (TVGM_OK on success); constructed objects come back through out-parameters
 * as opaque handles that must be released with the matching *_free call.
 * On failure the thread-local message from tvgm_last_error() describes the
 * problem. Matrix buffers are row-major double arrays owned by the caller.
 */
#ifndef TVGM_H
#define TVGM_H

#ifdef __cplusplus
extern "C" {
#endif

#define TVGM_VERSION "0.1.0"

/* Status codes. */
enum {
  TVGM_OK = 0,
  TVGM_ERR_INVALID = 1,  /* bad arguments or malformed input */
  TVGM_ERR_NUMERIC = 2,  /* numerical failure (singularity, instability) */
  TVGM_ERR_VERIFY = 3,   /* verification checks exceeded tolerance */
  TVGM_ERR_IO = 4        /* file read/write failure */
};

typedef struct tvgm_model tvgm_model;
typedef struct tvgm_panel tvgm_panel;
typedef struct tvgm_fitset tvgm_fitset;
typedef struct tvgm_weights tvgm_weights;
typedef struct tvgm_graph tvgm_graph;

/* Estimation settings; obtain defaults from tvgm_config_default and adjust.
 * M = 0 resolves to ceil(sqrt(n)) at fit time. */
typedef struct tvgm_config {
  int M;
  int nu;
  int lambda_grid_len;
  double lambda_min_ratio;
  int folds;
  int stride;
  double tol;
  int max_iter;
  int shared_lambda; /* nonzero: one lambda across all node/frequency problems */
  int half_grid;     /* nonzero: fit only k <= ceil(n/2) */
} tvgm_config;

const char* tvgm_version(void);
/* Message for the most recent failure on this thread; empty when none. */
const char* tvgm_last_error(void);

/* --- models ---------------------------------------------------------- */
/* name: "small" (4-node example) or "large" (10-node example). */
int tvgm_model_builtin(const char* name, tvgm_model** out);
int tvgm_model_load(const char* path, tvgm_model** out);
int tvgm_model_save(const tvgm_model* model, const char* path);
void tvgm_model_free(tvgm_model* model);
int tvgm_model_dims(const tvgm_model* model, int* p, int* d);
/* A_j(u) entrywise into out[p*p], row-major; 1 <= j <= d, u in [0,1]. */
int tvgm_model_transition(const tvgm_model* model, int j, double u, double* out);
/* Sup over a u-grid of companion spectral norm and spectral radius. */
int tvgm_model_stability(const tvgm_model* model, double* sup_norm, double* sup_radius);

/* --- simulation -------------------------------------------------------- */
int tvgm_simulate(const tvgm_model* model, int n, int burn_in,
                  unsigned long long seed, tvgm_panel** out);
void tvgm_panel_free(tvgm_panel* panel);
int tvgm_panel_dims(const tvgm_panel* panel, int* n, int* p);
/* Copies the panel into out[n*p], row-major (time-major). */
int tvgm_panel_get(const tvgm_panel* panel, double* out);
int tvgm_panel_write_csv(const tvgm_panel* panel, const char* path);
int tvgm_panel_read_csv(const char* path, tvgm_panel** out);

/* --- estimation -------------------------------------------------------- */
tvgm_config tvgm_config_default(void);
/* Node-wise penalized DFT regressions with cross-validated penalties. */
int tvgm_estimate(const tvgm_panel* panel, const tvgm_config* config,
                  tvgm_fitset** out);
void tvgm_fitset_free(tvgm_fitset* fits);
int tvgm_fitset_write_csv(const tvgm_fitset* fits, const char* path);
int tvgm_fitset_read_csv(const char* path, tvgm_fitset** out);

/* --- weights and graph selection --------------------------------------- */
int tvgm_weights_from_fits(const tvgm_fitset* fits, tvgm_weights** out);
/* Builds a weight object from raw p*p row-major buffers (e.g. replicate
 * averages computed by the caller). */
int tvgm_weights_create(int p, const double* self_w, const double* other_w,
                        tvgm_weights** out);
void tvgm_weights_free(tvgm_weights* w);
int tvgm_weights_dims(const tvgm_weights* w, int* p);
int tvgm_weights_get(const tvgm_weights* w, double* self_out, double* other_out);
int tvgm_weights_write_csv(const tvgm_weights* w, const char* self_path,
                           const char* other_path);
int tvgm_weights_read_csv(const char* self_path, const char* other_path,
                          tvgm_weights** out);

/* rule: "and" or "or". Negative thresholds select the rank-gap heuristic. */
int tvgm_select_graph(const tvgm_weights* w, const char* rule,
                      double edge_threshold, double ns_threshold,
                      tvgm_graph** out);
int tvgm_true_graph(const tvgm_model* model, tvgm_graph** out);
void tvgm_graph_free(tvgm_graph* graph);
int tvgm_graph_write(const tvgm_graph* graph, const char* path);
int tvgm_graph_read(const char* path, tvgm_graph** out);
/* Edge precision/recall, self-loop flag accuracy, attribute accuracy on
 * true-positive edges. Any output pointer may be NULL. */
int tvgm_graph_compare(const tvgm_graph* estimated, const tvgm_graph* truth,
                       double* precision, double* recall, double* self_accuracy,
                       double* attr_accuracy);

/* --- verification and reports ------------------------------------------ */
/* Runs the operator-identity and spectral oracle checks for the model at
 * section length n; writes a CSV table (name,a,b,t,tau,error,tolerance,pass)
 * when report_path is non-NULL. *failures receives the number of rows over
 * tolerance. Returns TVGM_OK even when checks fail (inspect *failures);
 * non-OK codes indicate the checks could not run. */
int tvgm_verify(const tvgm_model* model, int n, const char* report_path,
                int* failures);

/* Standalone SVG heatmap of a p*p row-major matrix. */
int tvgm_heatmap_svg(int p, const double* values, const char* title,
                     const char* path);

#ifdef __cplusplus
}
#endif

#endif /* TVGM_H */
