// graphpd command-line front end. Talks to the library only through the C API.
//
//   graphpd synth       --config synth.toml --out data/
//   graphpd build-graph --data data/ --distance cosine --k 3 --out edges.tsv
//   graphpd run         --data data/ --model gcn [--grid grid.toml] --replicates 5 --seed 1 --out report.json
//   graphpd sweep       --data data/ --axis k [--fixed fixed.toml] --out curve.tsv
//
// Exit codes: 0 success, 2 usage error, 3 data error, 4 training error.
// Failures print a single "graphpd: error: <code>: <message>" line to stderr.

#include "graphpd/graphpd.h"

#include <CLI11.hpp>

#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <memory>
#include <string>

namespace {

constexpr int kExitUsage = 2;
constexpr int kExitData = 3;
constexpr int kExitTraining = 4;
constexpr int kExitInternal = 1;

struct Failure {
  int exit_code;
};

int exit_code_for(gpd_status s) {
  switch (s) {
    case GPD_OK: return 0;
    case GPD_ERR_USAGE: return kExitUsage;
    case GPD_ERR_DATA:
    case GPD_ERR_IO: return kExitData;
    case GPD_ERR_TRAINING: return kExitTraining;
    case GPD_ERR_INTERNAL: return kExitInternal;
  }
  return kExitInternal;
}

void check(gpd_status s) {
  if (s == GPD_OK) return;
  std::fprintf(stderr, "graphpd: error: %s: %s\n", gpd_last_error_code(), gpd_last_error_message());
  throw Failure{exit_code_for(s)};
}

template <typename T, void (*Free)(T*)>
struct Deleter {
  void operator()(T* p) const { Free(p); }
};
using DatasetPtr = std::unique_ptr<gpd_dataset, Deleter<gpd_dataset, gpd_dataset_free>>;
using GraphPtr = std::unique_ptr<gpd_graph, Deleter<gpd_graph, gpd_graph_free>>;
using ExperimentPtr = std::unique_ptr<gpd_experiment, Deleter<gpd_experiment, gpd_experiment_free>>;
using ReportPtr = std::unique_ptr<gpd_report, Deleter<gpd_report, gpd_report_free>>;
using SweepPtr = std::unique_ptr<gpd_sweep, Deleter<gpd_sweep, gpd_sweep_free>>;
using CurvePtr = std::unique_ptr<gpd_curve, Deleter<gpd_curve, gpd_curve_free>>;

DatasetPtr load_data(const std::string& dir) {
  gpd_dataset* ds = nullptr;
  check(gpd_dataset_load_dir(dir.c_str(), &ds));
  return DatasetPtr(ds);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Graph-based Parkinson's speech detection toolkit"};
  app.require_subcommand(1);
  app.set_version_flag("--version", gpd_version());

  std::string config_path, out_path, data_dir, distance_name, model_name, grid_path, axis_name,
      fixed_path, summary_path;
  std::size_t k = 0, replicates = 5, jobs = 0;
  std::uint64_t seed = 0;

  auto* synth = app.add_subcommand("synth", "Generate a synthetic dataset");
  synth->add_option("--config", config_path, "Synthetic dataset TOML config")->required();
  synth->add_option("--out", out_path, "Output directory")->required();

  auto* build = app.add_subcommand("build-graph", "Build the top-k kernel graph and export its edges");
  build->add_option("--data", data_dir, "Dataset directory")->required();
  build->add_option("--distance", distance_name, "euclidean | cosine | manhattan")->required();
  build->add_option("--k", k, "Neighbors per node")->required();
  build->add_option("--out", out_path, "Edge list TSV")->required();

  auto* run = app.add_subcommand("run", "Cross-validated experiment with grid search");
  run->add_option("--data", data_dir, "Dataset directory")->required();
  run->add_option("--model", model_name, "fc | knn | gcn")->required();
  run->add_option("--grid", grid_path, "Grid TOML (defaults to the model's standard grid)");
  run->add_option("--replicates", replicates, "Number of split replicates")->capture_default_str();
  run->add_option("--seed", seed, "Root seed")->capture_default_str();
  run->add_option("--jobs", jobs, "Concurrent fold jobs (0 = all cores)")->capture_default_str();
  run->add_option("--out", out_path, "Report JSON")->required();
  run->add_option("--summary", summary_path, "Summary TSV (default: report path with .tsv)");

  auto* sweep = app.add_subcommand("sweep", "Accuracy curve over k or L for the GCN");
  sweep->add_option("--data", data_dir, "Dataset directory")->required();
  sweep->add_option("--axis", axis_name, "k | L")->required();
  sweep->add_option("--fixed", fixed_path, "Sweep TOML (fixed values per distance, lr, values)");
  sweep->add_option("--replicates", replicates, "Number of split replicates")->capture_default_str();
  sweep->add_option("--seed", seed, "Root seed")->capture_default_str();
  sweep->add_option("--jobs", jobs, "Concurrent fold jobs (0 = all cores)")->capture_default_str();
  sweep->add_option("--out", out_path, "Curve TSV")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::fprintf(stderr, "graphpd: error: usage: %s\n", e.what());
    return kExitUsage;
  }

  try {
    if (*synth) {
      gpd_dataset* raw = nullptr;
      check(gpd_dataset_synthesize(config_path.c_str(), &raw));
      DatasetPtr ds(raw);
      check(gpd_dataset_write_dir(ds.get(), out_path.c_str()));
    } else if (*build) {
      gpd_distance d;
      check(gpd_parse_distance(distance_name.c_str(), &d));
      auto ds = load_data(data_dir);
      gpd_graph* raw = nullptr;
      check(gpd_graph_build(ds.get(), d, k, &raw));
      GraphPtr g(raw);
      check(gpd_graph_write_edges(g.get(), out_path.c_str()));
    } else if (*run) {
      gpd_model model;
      check(gpd_parse_model(model_name.c_str(), &model));
      gpd_experiment* raw_exp = nullptr;
      check(gpd_experiment_create(model, &raw_exp));
      ExperimentPtr exp(raw_exp);
      if (!grid_path.empty()) check(gpd_experiment_load_grid(exp.get(), grid_path.c_str()));
      check(gpd_experiment_set_replicates(exp.get(), replicates));
      check(gpd_experiment_set_seed(exp.get(), seed));
      check(gpd_experiment_set_jobs(exp.get(), jobs));
      auto ds = load_data(data_dir);
      gpd_report* raw_report = nullptr;
      check(gpd_experiment_run(exp.get(), ds.get(), &raw_report));
      ReportPtr report(raw_report);
      check(gpd_report_write_json(report.get(), out_path.c_str()));
      if (summary_path.empty()) {
        summary_path = std::filesystem::path(out_path).replace_extension(".tsv").string();
      }
      check(gpd_report_write_summary(report.get(), summary_path.c_str()));
    } else if (*sweep) {
      gpd_sweep_axis axis;
      check(gpd_parse_sweep_axis(axis_name.c_str(), &axis));
      gpd_sweep* raw_sweep = nullptr;
      check(gpd_sweep_create(axis, &raw_sweep));
      SweepPtr sw(raw_sweep);
      if (!fixed_path.empty()) check(gpd_sweep_load_config(sw.get(), fixed_path.c_str()));
      check(gpd_sweep_set_replicates(sw.get(), replicates));
      check(gpd_sweep_set_seed(sw.get(), seed));
      check(gpd_sweep_set_jobs(sw.get(), jobs));
      auto ds = load_data(data_dir);
      gpd_curve* raw_curve = nullptr;
      check(gpd_sweep_run(sw.get(), ds.get(), &raw_curve));
      CurvePtr curve(raw_curve);
      check(gpd_curve_write_tsv(curve.get(), out_path.c_str()));
    }
  } catch (const Failure& f) {
    return f.exit_code;
  }
  return 0;
}
