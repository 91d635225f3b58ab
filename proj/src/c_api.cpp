#include "graphpd/graphpd.h"

#include "config.hpp"
#include "dataset.hpp"
#include "evaluation.hpp"
#include "graph_builder.hpp"
#include "synthetic.hpp"

#include <filesystem>
#include <memory>
#include <new>
#include <optional>
#include <string>

using namespace graphpd;

struct gpd_dataset {
  dataset::Dataset data;
  std::optional<std::vector<bool>> noise_flags;
};

struct gpd_graph {
  graph::Adjacency adjacency;
};

struct gpd_experiment {
  eval::ExperimentConfig config;
};

struct gpd_report {
  eval::ExperimentReport report;
};

struct gpd_sweep {
  eval::SweepConfig config;
};

struct gpd_curve {
  eval::SweepAxis axis;
  std::vector<eval::CurvePoint> points;
};

namespace {

thread_local std::string g_error_code;
thread_local std::string g_error_message;

gpd_status set_error(gpd_status status, std::string code, std::string message) {
  g_error_code = std::move(code);
  g_error_message = std::move(message);
  return status;
}

gpd_status status_of(ErrorCategory c) {
  switch (c) {
    case ErrorCategory::usage: return GPD_ERR_USAGE;
    case ErrorCategory::data: return GPD_ERR_DATA;
    case ErrorCategory::training: return GPD_ERR_TRAINING;
    case ErrorCategory::io: return GPD_ERR_IO;
    case ErrorCategory::internal: return GPD_ERR_INTERNAL;
  }
  return GPD_ERR_INTERNAL;
}

// Runs fn, translating exceptions into status codes at the ABI boundary.
template <typename F>
gpd_status guarded(F&& fn) noexcept {
  try {
    fn();
    return GPD_OK;
  } catch (const Error& e) {
    return set_error(status_of(e.category()), e.code(), e.what());
  } catch (const std::filesystem::filesystem_error& e) {
    return set_error(GPD_ERR_IO, "io-error", e.what());
  } catch (const std::bad_alloc&) {
    return set_error(GPD_ERR_INTERNAL, "out-of-memory", "allocation failed");
  } catch (const std::exception& e) {
    return set_error(GPD_ERR_INTERNAL, "internal-error", e.what());
  } catch (...) {
    return set_error(GPD_ERR_INTERNAL, "internal-error", "unknown exception");
  }
}

gpd_status null_arg(const char* what) {
  return set_error(GPD_ERR_USAGE, "null-argument", std::string(what) + " must not be NULL");
}

graph::Distance to_core(gpd_distance d) {
  switch (d) {
    case GPD_DISTANCE_EUCLIDEAN: return graph::Distance::euclidean;
    case GPD_DISTANCE_COSINE: return graph::Distance::cosine;
    case GPD_DISTANCE_MANHATTAN: return graph::Distance::manhattan;
  }
  throw_usage("unknown-distance", "invalid distance enum value");
}

gpd_distance from_core(graph::Distance d) {
  switch (d) {
    case graph::Distance::euclidean: return GPD_DISTANCE_EUCLIDEAN;
    case graph::Distance::cosine: return GPD_DISTANCE_COSINE;
    case graph::Distance::manhattan: return GPD_DISTANCE_MANHATTAN;
  }
  return GPD_DISTANCE_EUCLIDEAN;
}

eval::ModelKind to_core(gpd_model m) {
  switch (m) {
    case GPD_MODEL_FC: return eval::ModelKind::fc;
    case GPD_MODEL_KNN: return eval::ModelKind::knn;
    case GPD_MODEL_GCN: return eval::ModelKind::gcn;
  }
  throw_usage("unknown-model", "invalid model enum value");
}

eval::SweepAxis to_core(gpd_sweep_axis a) {
  switch (a) {
    case GPD_SWEEP_K: return eval::SweepAxis::neighbors;
    case GPD_SWEEP_L: return eval::SweepAxis::depth;
  }
  throw_usage("unknown-axis", "invalid sweep axis enum value");
}

}  // namespace

extern "C" {

const char* gpd_last_error_code(void) { return g_error_code.c_str(); }
const char* gpd_last_error_message(void) { return g_error_message.c_str(); }
const char* gpd_version(void) { return "0.1.0"; }

gpd_status gpd_parse_distance(const char* name, gpd_distance* out) {
  if (!name || !out) return null_arg("name/out");
  return guarded([&] { *out = from_core(graph::parse_distance(name)); });
}

gpd_status gpd_parse_model(const char* name, gpd_model* out) {
  if (!name || !out) return null_arg("name/out");
  return guarded([&] {
    switch (eval::parse_model_kind(name)) {
      case eval::ModelKind::fc: *out = GPD_MODEL_FC; break;
      case eval::ModelKind::knn: *out = GPD_MODEL_KNN; break;
      case eval::ModelKind::gcn: *out = GPD_MODEL_GCN; break;
    }
  });
}

gpd_status gpd_parse_sweep_axis(const char* name, gpd_sweep_axis* out) {
  if (!name || !out) return null_arg("name/out");
  return guarded([&] {
    *out = eval::parse_sweep_axis(name) == eval::SweepAxis::neighbors ? GPD_SWEEP_K : GPD_SWEEP_L;
  });
}

// ---- datasets

gpd_status gpd_dataset_load(const char* embedding_path, const char* manifest_path,
                            gpd_dataset** out) {
  if (!embedding_path || !manifest_path || !out) return null_arg("paths/out");
  *out = nullptr;
  return guarded([&] {
    auto records = dataset::load_dataset(embedding_path, manifest_path);
    *out = new gpd_dataset{dataset::Dataset(std::move(records)), std::nullopt};
  });
}

gpd_status gpd_dataset_load_dir(const char* dir, gpd_dataset** out) {
  if (!dir || !out) return null_arg("dir/out");
  const std::filesystem::path base(dir);
  const auto emb = (base / dataset::kEmbeddingFile).string();
  const auto man = (base / dataset::kManifestFile).string();
  return gpd_dataset_load(emb.c_str(), man.c_str(), out);
}

gpd_status gpd_dataset_synthesize(const char* config_path, gpd_dataset** out) {
  if (!config_path || !out) return null_arg("config_path/out");
  *out = nullptr;
  return guarded([&] {
    auto data = synth::generate(config::load_synth_config(config_path));
    *out = new gpd_dataset{dataset::Dataset(std::move(data.records)), std::move(data.noise_flags)};
  });
}

gpd_status gpd_dataset_write_dir(const gpd_dataset* ds, const char* dir) {
  if (!ds || !dir) return null_arg("ds/dir");
  return guarded([&] {
    const std::filesystem::path base(dir);
    std::filesystem::create_directories(base);
    dataset::write_dataset(ds->data.records(), base / dataset::kEmbeddingFile,
                           base / dataset::kManifestFile);
    if (ds->noise_flags) {
      synth::write_noise_flags(synth::SyntheticDataset{ds->data.records(), *ds->noise_flags},
                               base / dataset::kNoiseFlagsFile);
    }
  });
}

size_t gpd_dataset_size(const gpd_dataset* ds) { return ds ? ds->data.size() : 0; }
size_t gpd_dataset_dim(const gpd_dataset* ds) { return ds ? ds->data.dim() : 0; }
size_t gpd_dataset_speaker_count(const gpd_dataset* ds) {
  return ds ? ds->data.speakers().size() : 0;
}

gpd_status gpd_dataset_features(const gpd_dataset* ds, double* out, size_t capacity) {
  if (!ds || !out) return null_arg("ds/out");
  const auto& X = ds->data.features();
  if (capacity < static_cast<size_t>(X.size())) {
    return set_error(GPD_ERR_USAGE, "buffer-too-small", "feature buffer is too small");
  }
  for (Eigen::Index i = 0; i < X.rows(); ++i) {
    for (Eigen::Index j = 0; j < X.cols(); ++j) *out++ = X(i, j);
  }
  return GPD_OK;
}

void gpd_dataset_free(gpd_dataset* ds) { delete ds; }

// ---- graphs

gpd_status gpd_graph_build(const gpd_dataset* ds, gpd_distance distance, size_t k,
                           gpd_graph** out) {
  if (!ds || !out) return null_arg("ds/out");
  *out = nullptr;
  return guarded([&] {
    const auto d = to_core(distance);
    if (k >= ds->data.size()) {
      throw_data("k-too-large", "k = " + std::to_string(k) + " but the dataset has only " +
                                    std::to_string(ds->data.size()) + " segments");
    }
    const auto K = graph::kernel_from_features(ds->data.features(), d);
    *out = new gpd_graph{graph::build_graph(K, k)};
  });
}

size_t gpd_graph_node_count(const gpd_graph* g) { return g ? g->adjacency.node_count() : 0; }
size_t gpd_graph_edge_count(const gpd_graph* g) { return g ? g->adjacency.edges().size() : 0; }

gpd_status gpd_graph_edges(const gpd_graph* g, uint32_t* pairs, size_t capacity) {
  if (!g || !pairs) return null_arg("g/pairs");
  const auto& edges = g->adjacency.edges();
  if (capacity < edges.size()) {
    return set_error(GPD_ERR_USAGE, "buffer-too-small", "edge buffer is too small");
  }
  for (const auto& e : edges) {
    *pairs++ = e.a;
    *pairs++ = e.b;
  }
  return GPD_OK;
}

gpd_status gpd_graph_write_edges(const gpd_graph* g, const char* path) {
  if (!g || !path) return null_arg("g/path");
  return guarded([&] { graph::write_edge_list(g->adjacency, path); });
}

void gpd_graph_free(gpd_graph* g) { delete g; }

// ---- experiments

gpd_status gpd_experiment_create(gpd_model model, gpd_experiment** out) {
  if (!out) return null_arg("out");
  *out = nullptr;
  return guarded([&] {
    auto exp = std::make_unique<gpd_experiment>();
    exp->config.grid = eval::GridSpec::defaults(to_core(model));
    *out = exp.release();
  });
}

gpd_status gpd_experiment_load_grid(gpd_experiment* exp, const char* path) {
  if (!exp || !path) return null_arg("exp/path");
  return guarded([&] {
    auto loaded = config::load_grid_config(path, exp->config.grid.model);
    exp->config.grid = std::move(loaded.grid);
    exp->config.train = loaded.train;
  });
}

gpd_status gpd_experiment_set_replicates(gpd_experiment* exp, size_t replicates) {
  if (!exp) return null_arg("exp");
  if (replicates == 0) return set_error(GPD_ERR_USAGE, "invalid-config", "replicates must be positive");
  exp->config.replicates = replicates;
  return GPD_OK;
}

gpd_status gpd_experiment_set_seed(gpd_experiment* exp, uint64_t seed) {
  if (!exp) return null_arg("exp");
  exp->config.seed = seed;
  return GPD_OK;
}

gpd_status gpd_experiment_set_jobs(gpd_experiment* exp, size_t jobs) {
  if (!exp) return null_arg("exp");
  exp->config.jobs = jobs;
  return GPD_OK;
}

gpd_status gpd_experiment_set_max_epochs(gpd_experiment* exp, size_t max_epochs) {
  if (!exp) return null_arg("exp");
  if (max_epochs == 0) return set_error(GPD_ERR_USAGE, "invalid-config", "max_epochs must be positive");
  exp->config.train.max_epochs = max_epochs;
  return GPD_OK;
}

gpd_status gpd_experiment_set_hidden_width(gpd_experiment* exp, size_t width) {
  if (!exp) return null_arg("exp");
  if (width == 0) return set_error(GPD_ERR_USAGE, "invalid-config", "hidden width must be positive");
  exp->config.train.hidden_width = width;
  return GPD_OK;
}

void gpd_experiment_free(gpd_experiment* exp) { delete exp; }

gpd_status gpd_experiment_run(const gpd_experiment* exp, const gpd_dataset* ds, gpd_report** out) {
  if (!exp || !ds || !out) return null_arg("exp/ds/out");
  *out = nullptr;
  return guarded([&] {
    const auto plans = eval::make_cv_plans(ds->data.speakers(), exp->config.replicates, exp->config.seed);
    *out = new gpd_report{eval::run_experiment(ds->data, exp->config, plans)};
  });
}

size_t gpd_report_group_count(const gpd_report* r) { return r ? r->report.groups.size() : 0; }

gpd_status gpd_report_group_accuracy(const gpd_report* r, size_t group, double* mean,
                                     double* std_dev) {
  if (!r || !mean || !std_dev) return null_arg("r/mean/std_dev");
  if (group >= r->report.groups.size()) {
    return set_error(GPD_ERR_USAGE, "out-of-range", "group index out of range");
  }
  *mean = r->report.groups[group].summary.mean;
  *std_dev = r->report.groups[group].summary.std;
  return GPD_OK;
}

gpd_status gpd_report_write_json(const gpd_report* r, const char* path) {
  if (!r || !path) return null_arg("r/path");
  return guarded([&] { eval::write_report_json(r->report, path); });
}

gpd_status gpd_report_write_summary(const gpd_report* r, const char* path) {
  if (!r || !path) return null_arg("r/path");
  return guarded([&] { eval::write_summary_tsv(r->report, path); });
}

void gpd_report_free(gpd_report* r) { delete r; }

// ---- sweeps

gpd_status gpd_sweep_create(gpd_sweep_axis axis, gpd_sweep** out) {
  if (!out) return null_arg("out");
  *out = nullptr;
  return guarded([&] { *out = new gpd_sweep{eval::SweepConfig::defaults(to_core(axis))}; });
}

gpd_status gpd_sweep_load_config(gpd_sweep* sw, const char* path) {
  if (!sw || !path) return null_arg("sw/path");
  return guarded([&] {
    auto loaded = config::load_sweep_config(path, sw->config.axis);
    loaded.replicates = sw->config.replicates;
    loaded.seed = sw->config.seed;
    loaded.jobs = sw->config.jobs;
    sw->config = std::move(loaded);
  });
}

gpd_status gpd_sweep_set_replicates(gpd_sweep* sw, size_t replicates) {
  if (!sw) return null_arg("sw");
  if (replicates == 0) return set_error(GPD_ERR_USAGE, "invalid-config", "replicates must be positive");
  sw->config.replicates = replicates;
  return GPD_OK;
}

gpd_status gpd_sweep_set_seed(gpd_sweep* sw, uint64_t seed) {
  if (!sw) return null_arg("sw");
  sw->config.seed = seed;
  return GPD_OK;
}

gpd_status gpd_sweep_set_jobs(gpd_sweep* sw, size_t jobs) {
  if (!sw) return null_arg("sw");
  sw->config.jobs = jobs;
  return GPD_OK;
}

gpd_status gpd_sweep_set_max_epochs(gpd_sweep* sw, size_t max_epochs) {
  if (!sw) return null_arg("sw");
  if (max_epochs == 0) return set_error(GPD_ERR_USAGE, "invalid-config", "max_epochs must be positive");
  sw->config.train.max_epochs = max_epochs;
  return GPD_OK;
}

gpd_status gpd_sweep_set_hidden_width(gpd_sweep* sw, size_t width) {
  if (!sw) return null_arg("sw");
  if (width == 0) return set_error(GPD_ERR_USAGE, "invalid-config", "hidden width must be positive");
  sw->config.train.hidden_width = width;
  return GPD_OK;
}

void gpd_sweep_free(gpd_sweep* sw) { delete sw; }

gpd_status gpd_sweep_run(const gpd_sweep* sw, const gpd_dataset* ds, gpd_curve** out) {
  if (!sw || !ds || !out) return null_arg("sw/ds/out");
  *out = nullptr;
  return guarded([&] {
    const auto plans = eval::make_cv_plans(ds->data.speakers(), sw->config.replicates, sw->config.seed);
    *out = new gpd_curve{sw->config.axis, eval::sweep(ds->data, sw->config, plans)};
  });
}

size_t gpd_curve_point_count(const gpd_curve* c) { return c ? c->points.size() : 0; }

gpd_status gpd_curve_point(const gpd_curve* c, size_t i, gpd_distance* distance, size_t* value,
                           double* mean, double* std_dev) {
  if (!c || !distance || !value || !mean || !std_dev) return null_arg("curve/outputs");
  if (i >= c->points.size()) return set_error(GPD_ERR_USAGE, "out-of-range", "point index out of range");
  const auto& p = c->points[i];
  *distance = from_core(p.distance);
  *value = p.value;
  *mean = p.mean;
  *std_dev = p.std;
  return GPD_OK;
}

gpd_status gpd_curve_write_tsv(const gpd_curve* c, const char* path) {
  if (!c || !path) return null_arg("c/path");
  return guarded([&] { eval::write_curve_tsv(c->axis, c->points, path); });
}

void gpd_curve_free(gpd_curve* c) { delete c; }

}  // extern "C"
