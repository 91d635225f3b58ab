/*
 * graphpd C API.
 *
 * Opaque handles own their data and must be released with the matching
 * *_free function (passing NULL is allowed). Every fallible call returns a
 * gpd_status; on failure, gpd_last_error_code() and gpd_last_error_message()
 * describe the error for the calling thread until its next failing call.
 */
#ifndef GRAPHPD_GRAPHPD_H
#define GRAPHPD_GRAPHPD_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#  if defined(GRAPHPD_BUILDING_LIBRARY)
#    define GPD_API __declspec(dllexport)
#  else
#    define GPD_API __declspec(dllimport)
#  endif
#else
#  define GPD_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum gpd_status {
  GPD_OK = 0,
  GPD_ERR_USAGE = 1,    /* bad argument, flag value or config */
  GPD_ERR_DATA = 2,     /* malformed or inconsistent dataset */
  GPD_ERR_TRAINING = 3, /* optimizer diverged */
  GPD_ERR_IO = 4,       /* file could not be read or written */
  GPD_ERR_INTERNAL = 5
} gpd_status;

typedef enum gpd_distance {
  GPD_DISTANCE_EUCLIDEAN = 0,
  GPD_DISTANCE_COSINE = 1,
  GPD_DISTANCE_MANHATTAN = 2
} gpd_distance;

typedef enum gpd_model {
  GPD_MODEL_FC = 0,
  GPD_MODEL_KNN = 1,
  GPD_MODEL_GCN = 2
} gpd_model;

typedef enum gpd_sweep_axis {
  GPD_SWEEP_K = 0,
  GPD_SWEEP_L = 1
} gpd_sweep_axis;

typedef struct gpd_dataset gpd_dataset;
typedef struct gpd_graph gpd_graph;
typedef struct gpd_experiment gpd_experiment;
typedef struct gpd_report gpd_report;
typedef struct gpd_sweep gpd_sweep;
typedef struct gpd_curve gpd_curve;

/* Short machine-readable code of the last error ("size-mismatch", ...), or "" */
GPD_API const char* gpd_last_error_code(void);
GPD_API const char* gpd_last_error_message(void);
GPD_API const char* gpd_version(void);

GPD_API gpd_status gpd_parse_distance(const char* name, gpd_distance* out);
GPD_API gpd_status gpd_parse_model(const char* name, gpd_model* out);
GPD_API gpd_status gpd_parse_sweep_axis(const char* name, gpd_sweep_axis* out);

/* ---- datasets ---------------------------------------------------------- */

GPD_API gpd_status gpd_dataset_load(const char* embedding_path, const char* manifest_path,
                                    gpd_dataset** out);
/* Loads <dir>/embeddings.bin and <dir>/manifest.tsv. */
GPD_API gpd_status gpd_dataset_load_dir(const char* dir, gpd_dataset** out);
/* Synthetic dataset from a TOML config file. */
GPD_API gpd_status gpd_dataset_synthesize(const char* config_path, gpd_dataset** out);
/* Writes embeddings.bin + manifest.tsv (+ noise_flags.tsv for synthetic data),
 * creating the directory if needed. */
GPD_API gpd_status gpd_dataset_write_dir(const gpd_dataset* ds, const char* dir);
GPD_API size_t gpd_dataset_size(const gpd_dataset* ds);
GPD_API size_t gpd_dataset_dim(const gpd_dataset* ds);
GPD_API size_t gpd_dataset_speaker_count(const gpd_dataset* ds);
/* Row-major copy of the n x m working-precision features into `out`
 * (capacity in doubles). */
GPD_API gpd_status gpd_dataset_features(const gpd_dataset* ds, double* out, size_t capacity);
GPD_API void gpd_dataset_free(gpd_dataset* ds);

/* ---- graphs ------------------------------------------------------------ */

GPD_API gpd_status gpd_graph_build(const gpd_dataset* ds, gpd_distance distance, size_t k,
                                   gpd_graph** out);
GPD_API size_t gpd_graph_node_count(const gpd_graph* g);
GPD_API size_t gpd_graph_edge_count(const gpd_graph* g);
/* Writes edge e as pairs[2e], pairs[2e+1] (i < j, sorted); capacity counts
 * edges. */
GPD_API gpd_status gpd_graph_edges(const gpd_graph* g, uint32_t* pairs, size_t capacity);
GPD_API gpd_status gpd_graph_write_edges(const gpd_graph* g, const char* path);
GPD_API void gpd_graph_free(gpd_graph* g);

/* ---- cross-validated experiments -------------------------------------- */

/* Starts from the model's default grid, 5 replicates, seed 0. */
GPD_API gpd_status gpd_experiment_create(gpd_model model, gpd_experiment** out);
/* Overrides grid / training settings from a TOML file. */
GPD_API gpd_status gpd_experiment_load_grid(gpd_experiment* exp, const char* path);
GPD_API gpd_status gpd_experiment_set_replicates(gpd_experiment* exp, size_t replicates);
GPD_API gpd_status gpd_experiment_set_seed(gpd_experiment* exp, uint64_t seed);
/* 0 selects the hardware concurrency. Results do not depend on it. */
GPD_API gpd_status gpd_experiment_set_jobs(gpd_experiment* exp, size_t jobs);
GPD_API gpd_status gpd_experiment_set_max_epochs(gpd_experiment* exp, size_t max_epochs);
GPD_API gpd_status gpd_experiment_set_hidden_width(gpd_experiment* exp, size_t width);
GPD_API void gpd_experiment_free(gpd_experiment* exp);

GPD_API gpd_status gpd_experiment_run(const gpd_experiment* exp, const gpd_dataset* ds,
                                      gpd_report** out);

/* One group per distance (a single group for FC). */
GPD_API size_t gpd_report_group_count(const gpd_report* r);
GPD_API gpd_status gpd_report_group_accuracy(const gpd_report* r, size_t group, double* mean,
                                             double* std_dev);
GPD_API gpd_status gpd_report_write_json(const gpd_report* r, const char* path);
GPD_API gpd_status gpd_report_write_summary(const gpd_report* r, const char* path);
GPD_API void gpd_report_free(gpd_report* r);

/* ---- sweeps ------------------------------------------------------------ */

GPD_API gpd_status gpd_sweep_create(gpd_sweep_axis axis, gpd_sweep** out);
GPD_API gpd_status gpd_sweep_load_config(gpd_sweep* sw, const char* path);
GPD_API gpd_status gpd_sweep_set_replicates(gpd_sweep* sw, size_t replicates);
GPD_API gpd_status gpd_sweep_set_seed(gpd_sweep* sw, uint64_t seed);
GPD_API gpd_status gpd_sweep_set_jobs(gpd_sweep* sw, size_t jobs);
GPD_API gpd_status gpd_sweep_set_max_epochs(gpd_sweep* sw, size_t max_epochs);
GPD_API gpd_status gpd_sweep_set_hidden_width(gpd_sweep* sw, size_t width);
GPD_API void gpd_sweep_free(gpd_sweep* sw);

GPD_API gpd_status gpd_sweep_run(const gpd_sweep* sw, const gpd_dataset* ds, gpd_curve** out);
GPD_API size_t gpd_curve_point_count(const gpd_curve* c);
GPD_API gpd_status gpd_curve_point(const gpd_curve* c, size_t i, gpd_distance* distance,
                                   size_t* value, double* mean, double* std_dev);
GPD_API gpd_status gpd_curve_write_tsv(const gpd_curve* c, const char* path);
GPD_API void gpd_curve_free(gpd_curve* c);

#ifdef __cplusplus
}
#endif

#endif /* GRAPHPD_GRAPHPD_H */
