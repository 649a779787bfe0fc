#ifndef SOCIALSIG_H
#define SOCIALSIG_H

/* Generated by cbindgen from crates/ffi/src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum ss_status {
  SS_STATUS_OK = 0,
  SS_STATUS_NULL_POINTER = 1,
  SS_STATUS_INVALID_ARGUMENT = 2,
  SS_STATUS_INVALID_UTF8 = 3,
  SS_STATUS_BUFFER_TOO_SMALL = 4,
  SS_STATUS_COMPUTE = 5,
  SS_STATUS_IO = 6,
  SS_STATUS_PIPELINE = 7,
  SS_STATUS_PANIC = 99,
} ss_status;

typedef enum ss_metric {
  SS_METRIC_PAGERANK = 0,
  SS_METRIC_BETWEENNESS = 1,
  SS_METRIC_CLOSENESS = 2,
} ss_metric;

typedef enum ss_command {
  SS_COMMAND_INGEST = 0,
  SS_COMMAND_CLASSIFY = 1,
  SS_COMMAND_SIGNALS = 2,
  SS_COMMAND_NETWORK = 3,
  SS_COMMAND_GRANGER = 4,
  SS_COMMAND_XCORR = 5,
  SS_COMMAND_MATRIX = 6,
  SS_COMMAND_REPORT = 7,
  SS_COMMAND_ALL = 8,
} ss_command;

/**
 * Opaque tweet corpus.
 */
typedef struct ss_corpus ss_corpus;

/**
 * Opaque weighted graph.
 */
typedef struct ss_graph ss_graph;

typedef struct ss_granger_result {
  double f_statistic;
  double p_value;
  size_t df_num;
  size_t df_den;
  size_t n_obs;
  bool degenerate;
} ss_granger_result;

typedef struct ss_adf_result {
  double statistic;
  size_t chosen_lag;
  size_t n_obs;
  bool reject_1pct;
  bool reject_5pct;
  bool reject_10pct;
} ss_adf_result;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message of the last failed call on this thread, or null. The pointer stays
 * valid until the next call into this library on the same thread.
 */
const char *ss_last_error(void);

/**
 * Library version as a static NUL-terminated string.
 */
const char *ss_version(void);

/**
 * (1 + n_buy) / (1 + n_not_buy).
 */
double ss_social_signal(uint32_t n_buy, uint32_t n_not_buy);

/**
 * Upper tail of the F(d1, d2) distribution at `f`.
 */
enum ss_status ss_f_pvalue(double f, size_t d1, size_t d2, double *p_value);

/**
 * F test of whether `cause` helps predict `effect` at lag `lag`.
 */
enum ss_status ss_granger_test(const double *cause,
                               const double *effect,
                               size_t len,
                               size_t lag,
                               struct ss_granger_result *result);

/**
 * Cross-correlation at lag `lag`, pairing `x[i + lag]` with `y[i]`.
 */
enum ss_status ss_cross_correlation(const double *x,
                                    const double *y,
                                    size_t len,
                                    int64_t lag,
                                    double *value);

/**
 * Augmented Dickey-Fuller test with a constant. A negative `max_lag`
 * selects the default lag cap for the series length.
 */
enum ss_status ss_adf_test(const double *series,
                           size_t len,
                           int64_t max_lag,
                           struct ss_adf_result *result);

/**
 * New empty graph; release with [`ss_graph_free`].
 */
struct ss_graph *ss_graph_new(bool directed);

void ss_graph_free(struct ss_graph *graph);

/**
 * Adds `weight` to edge u-v (u->v when directed), creating nodes as needed.
 */
enum ss_status ss_graph_add_edge(struct ss_graph *graph,
                                 const char *u,
                                 const char *v,
                                 double weight);

size_t ss_graph_node_count(const struct ss_graph *graph);

size_t ss_graph_edge_count(const struct ss_graph *graph);

/**
 * Id of node `index` in sorted order, or null when out of range. The
 * pointer is owned by the graph and valid until it is next modified.
 */
const char *ss_graph_node_id(const struct ss_graph *graph, size_t index);

/**
 * Total weight of edge u-v, 0 when absent.
 */
double ss_graph_edge_weight(const struct ss_graph *graph, const char *u, const char *v);

/**
 * Centrality scores written to `scores` in node order (see
 * [`ss_graph_node_id`]). `capacity` must be at least the node count.
 */
enum ss_status ss_graph_centrality(const struct ss_graph *graph,
                                   enum ss_metric metric,
                                   bool binarize,
                                   bool inverse_weight_paths,
                                   double *scores,
                                   size_t capacity);

/**
 * Loads a JSONL tweet file. Malformed lines are skipped and counted.
 */
enum ss_status ss_corpus_load(const char *path, struct ss_corpus **corpus);

void ss_corpus_free(struct ss_corpus *corpus);

size_t ss_corpus_len(const struct ss_corpus *corpus);

size_t ss_corpus_rejected(const struct ss_corpus *corpus);

/**
 * Coin co-mention network of the corpus under the registry at `registry_path`.
 */
enum ss_status ss_corpus_comention_graph(const struct ss_corpus *corpus,
                                         const char *registry_path,
                                         struct ss_graph **graph);

/**
 * Directed author -> retweeted-author network of the corpus.
 */
enum ss_status ss_corpus_retweet_graph(const struct ss_corpus *corpus, struct ss_graph **graph);

/**
 * Runs a pipeline command from the TOML config at `config_path`. `out_dir`
 * may be null to use the configured output directory. `exit_code` (may be
 * null) receives the command-line exit code for the outcome.
 */
enum ss_status ss_run_pipeline(const char *config_path,
                               enum ss_command command,
                               const char *out_dir,
                               int32_t *exit_code);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* SOCIALSIG_H */
