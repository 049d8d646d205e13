/* minnorm: shallow ReLU network training and minimum-norm interpolation
 * analysis behind a C API.
 *
 * All functions return mn_status; on failure mn_last_error() carries a
 * message for the calling thread. Objects are opaque handles released with
 * the matching *_free function. Handles are not thread-safe; use one per
 * thread.
 */
#ifndef MINNORM_H
#define MINNORM_H

#include <stddef.h>
#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef enum mn_status {
    MN_OK = 0,
    MN_ERR_CONFIG = 1,   /* bad key/value, missing file, invalid combination */
    MN_ERR_NUMERIC = 2,  /* non-finite values during training or evaluation */
    MN_ERR_CHECK = 3,    /* an asserted bound or monotonicity check failed */
    MN_ERR_IO = 4,       /* file not readable/writable or malformed */
    MN_ERR_INVALID = 5   /* null handle or argument misuse */
} mn_status;

const char* mn_version(void);

/* Message for the last failing call on this thread; empty string if none. */
const char* mn_last_error(void);

/* ---- configuration ---------------------------------------------------- */

typedef struct mn_config mn_config;

mn_status mn_config_create(mn_config** out);
mn_status mn_config_load(const char* path, mn_config** out);
/* Sets one key=value pair (same keys as the config file). */
mn_status mn_config_set(mn_config* cfg, const char* key, const char* value);
void mn_config_free(mn_config* cfg);

/* ---- run summaries ----------------------------------------------------- */

typedef struct mn_summary mn_summary;

size_t mn_summary_size(const mn_summary* s);
const char* mn_summary_key(const mn_summary* s, size_t i);
double mn_summary_value(const mn_summary* s, size_t i);
/* Numeric entry by name; returns MN_ERR_INVALID when absent. */
mn_status mn_summary_get(const mn_summary* s, const char* key, double* out);
/* Text entry by name ("run_dir"); NULL when absent. */
const char* mn_summary_text(const mn_summary* s, const char* key);
void mn_summary_free(mn_summary* s);

/* ---- experiments -------------------------------------------------------- */

/* Trains per the config and writes the artifact directory (manifest,
 * metrics.csv, checkpoint.csv, dataset.csv, report/profile CSVs,
 * figure.svg). A diverged run returns MN_ERR_NUMERIC and still writes a
 * directory with status=failed. */
mn_status mn_run_training(const mn_config* cfg, mn_summary** out);

/* Runs the (m, lambda[, n]) sweep defined by sweep.triples/sweep.seeds. */
mn_status mn_run_sweep(const mn_config* cfg, mn_summary** out);

/* Regenerates figure.svg from a finished run directory. */
mn_status mn_render_run(const char* run_dir, const char* out_svg);

/* ---- analysis of stored networks and datasets --------------------------- */

/* Piecewise-linear extraction and minimum-norm report of a 1D checkpoint
 * against a 1D dataset; activation is "relu" or "leaky_relu" (slope used by
 * the leaky variant). Optionally appends the report row to report_csv. */
mn_status mn_analyze_1d(const char* checkpoint_csv, const char* data_csv,
                        const char* activation, double leaky_slope,
                        const char* report_csv_or_null, mn_summary** out);

/* Monte-Carlo radial profile of a checkpoint; radii/rescale grids are
 * "lo:hi:count". reference_csv may be NULL (no rescale fit). Writes the
 * profile to profile_csv when non-NULL. */
mn_status mn_analyze_radial(const char* checkpoint_csv, const char* activation,
                            double leaky_slope, const char* radii, int n_dirs, uint64_t seed,
                            const char* reference_csv_or_null, const char* rescale_grid,
                            const char* profile_csv_or_null, mn_summary** out);

/* Natural cubic spline through a 1D dataset; writes x,f(x) samples to
 * table_csv when non-NULL. */
mn_status mn_spline(const char* data_csv, int samples, const char* table_csv_or_null,
                    mn_summary** out);

/* ---- theory checks ------------------------------------------------------ */

/* Each check appends one row to checks_csv (created with a header when
 * missing) unless checks_csv is NULL. */
mn_status mn_check_rademacher(const char* data_csv, double q, int n_eps, int n_candidates,
                              int refine_steps, uint64_t seed, const char* checks_csv,
                              mn_summary** out);
mn_status mn_check_subgaussian(const char* kind, int d, int n, double sigma, int trials,
                               double delta, uint64_t seed, const char* checks_csv,
                               mn_summary** out);
mn_status mn_check_erm_bound(const char* checkpoint_csv, const char* data_csv, double lambda,
                             double barron_norm, const char* checks_csv, mn_summary** out);
mn_status mn_check_generalization_gap(const char* checkpoint_csv, const char* train_csv,
                                      const char* test_csv, const char* loss,
                                      const char* checks_csv, mn_summary** out);

/* ---- stored networks ----------------------------------------------------- */

typedef struct mn_net mn_net;

mn_status mn_net_load(const char* checkpoint_csv, mn_net** out);
mn_status mn_net_set_activation(mn_net* net, const char* activation, double leaky_slope);
/* f(x) for one input point of dimension d. */
mn_status mn_net_forward(const mn_net* net, const double* x, int d, double* out);
mn_status mn_net_width(const mn_net* net, int* out);
mn_status mn_net_input_dim(const mn_net* net, int* out);
void mn_net_free(mn_net* net);

#ifdef __cplusplus
} /* extern "C" */
#endif

#endif /* MINNORM_H */
