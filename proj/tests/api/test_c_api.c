/* Exercises the shared library through its C header only. */
#include "graphpd/graphpd.h"

#include <math.h>
#include <stdio.h>
#include <stdlib.h>
#include <string.h>

static int failures = 0;

#define EXPECT(cond)                                                    \
  do {                                                                  \
    if (!(cond)) {                                                      \
      fprintf(stderr, "%s:%d: expectation failed: %s\n", __FILE__, __LINE__, #cond); \
      ++failures;                                                       \
    }                                                                   \
  } while (0)

static void write_file(const char* path, const char* text) {
  FILE* f = fopen(path, "wb");
  fputs(text, f);
  fclose(f);
}

int main(int argc, char** argv) {
  if (argc < 2) {
    fprintf(stderr, "usage: %s <scratch-dir>\n", argv[0]);
    return 2;
  }
  char synth_cfg[1024], out_dir[1024], grid_cfg[1024], report_path[1024];
  snprintf(synth_cfg, sizeof synth_cfg, "%s/synth.toml", argv[1]);
  snprintf(out_dir, sizeof out_dir, "%s/data", argv[1]);
  snprintf(grid_cfg, sizeof grid_cfg, "%s/grid.toml", argv[1]);
  snprintf(report_path, sizeof report_path, "%s/report.json", argv[1]);

  write_file(synth_cfg,
             "speakers_per_class = 10\nsegments_per_speaker = 3\ndim = 4\n"
             "class_separation = 10.0\nseed = 5\n");

  EXPECT(strlen(gpd_version()) > 0);

  gpd_distance d;
  EXPECT(gpd_parse_distance("cosine", &d) == GPD_OK && d == GPD_DISTANCE_COSINE);
  EXPECT(gpd_parse_distance("nope", &d) == GPD_ERR_USAGE);
  EXPECT(strcmp(gpd_last_error_code(), "unknown-distance") == 0);

  gpd_dataset* ds = NULL;
  EXPECT(gpd_dataset_synthesize(synth_cfg, &ds) == GPD_OK);
  EXPECT(gpd_dataset_size(ds) == 60);
  EXPECT(gpd_dataset_dim(ds) == 4);
  EXPECT(gpd_dataset_speaker_count(ds) == 20);
  EXPECT(gpd_dataset_write_dir(ds, out_dir) == GPD_OK);

  gpd_dataset* loaded = NULL;
  EXPECT(gpd_dataset_load_dir(out_dir, &loaded) == GPD_OK);
  EXPECT(gpd_dataset_size(loaded) == 60);
  {
    double a[240], b[240];
    EXPECT(gpd_dataset_features(ds, a, 240) == GPD_OK);
    EXPECT(gpd_dataset_features(loaded, b, 240) == GPD_OK);
    int same = 1;
    for (int i = 0; i < 240; ++i) same &= (double)(float)a[i] == b[i];
    EXPECT(same);
    EXPECT(gpd_dataset_features(ds, a, 10) == GPD_ERR_USAGE);
  }

  gpd_graph* g = NULL;
  EXPECT(gpd_graph_build(loaded, GPD_DISTANCE_EUCLIDEAN, 3, &g) == GPD_OK);
  EXPECT(gpd_graph_node_count(g) == 60);
  EXPECT(gpd_graph_edge_count(g) >= 90);
  {
    size_t ne = gpd_graph_edge_count(g);
    uint32_t* pairs = malloc(2 * ne * sizeof *pairs);
    EXPECT(gpd_graph_edges(g, pairs, ne) == GPD_OK);
    int ordered = 1;
    for (size_t e = 0; e < ne; ++e) ordered &= pairs[2 * e] < pairs[2 * e + 1];
    EXPECT(ordered);
    free(pairs);
  }
  gpd_graph_free(g);

  g = NULL;
  EXPECT(gpd_graph_build(loaded, GPD_DISTANCE_MANHATTAN, 60, &g) == GPD_ERR_DATA);
  EXPECT(strcmp(gpd_last_error_code(), "k-too-large") == 0);
  EXPECT(g == NULL);

  gpd_dataset* missing = NULL;
  EXPECT(gpd_dataset_load_dir("/nonexistent/graphpd", &missing) == GPD_ERR_IO);

  write_file(grid_cfg, "lr = [1e-2]\n");
  gpd_experiment* exp = NULL;
  EXPECT(gpd_experiment_create(GPD_MODEL_FC, &exp) == GPD_OK);
  EXPECT(gpd_experiment_load_grid(exp, grid_cfg) == GPD_OK);
  EXPECT(gpd_experiment_set_replicates(exp, 2) == GPD_OK);
  EXPECT(gpd_experiment_set_replicates(exp, 0) == GPD_ERR_USAGE);
  EXPECT(gpd_experiment_set_seed(exp, 3) == GPD_OK);
  EXPECT(gpd_experiment_set_jobs(exp, 2) == GPD_OK);
  EXPECT(gpd_experiment_set_max_epochs(exp, 80) == GPD_OK);
  gpd_report* rep = NULL;
  EXPECT(gpd_experiment_run(exp, loaded, &rep) == GPD_OK);
  EXPECT(gpd_report_group_count(rep) == 1);
  {
    double mean = -1, sd = -1;
    EXPECT(gpd_report_group_accuracy(rep, 0, &mean, &sd) == GPD_OK);
    EXPECT(mean >= 95.0 && mean <= 100.0);
    EXPECT(sd >= 0.0);
    EXPECT(gpd_report_group_accuracy(rep, 1, &mean, &sd) == GPD_ERR_USAGE);
  }
  EXPECT(gpd_report_write_json(rep, report_path) == GPD_OK);
  gpd_report_free(rep);
  gpd_experiment_free(exp);

  gpd_sweep* sw = NULL;
  EXPECT(gpd_sweep_create(GPD_SWEEP_L, &sw) == GPD_OK);
  write_file(grid_cfg, "lr = [1e-3]\ndistance = [\"cosine\"]\n");
  EXPECT(gpd_sweep_load_config(sw, grid_cfg) == GPD_OK);
  EXPECT(gpd_sweep_set_replicates(sw, 1) == GPD_OK);
  EXPECT(gpd_sweep_set_max_epochs(sw, 3) == GPD_OK);
  EXPECT(gpd_sweep_set_hidden_width(sw, 4) == GPD_OK);
  gpd_curve* curve = NULL;
  EXPECT(gpd_sweep_run(sw, loaded, &curve) == GPD_OK);
  EXPECT(gpd_curve_point_count(curve) == 4);
  {
    size_t value = 0;
    double mean = 0, sd = 0;
    EXPECT(gpd_curve_point(curve, 3, &d, &value, &mean, &sd) == GPD_OK);
    EXPECT(value == 5 && d == GPD_DISTANCE_COSINE);
    EXPECT(gpd_curve_point(curve, 4, &d, &value, &mean, &sd) == GPD_ERR_USAGE);
  }
  gpd_curve_free(curve);
  gpd_sweep_free(sw);

  EXPECT(gpd_experiment_create((gpd_model)7, &exp) == GPD_ERR_USAGE);
  EXPECT(gpd_dataset_load_dir(NULL, &missing) == GPD_ERR_USAGE);

  gpd_dataset_free(loaded);
  gpd_dataset_free(ds);
  gpd_dataset_free(NULL);

  if (failures) {
    fprintf(stderr, "%d expectation(s) failed\n", failures);
    return 1;
  }
  printf("c api: all expectations met\n");
  return 0;
}
