#pragma once

#include "dataset.hpp"
#include "gcn.hpp"
#include "graph_builder.hpp"
#include "voting.hpp"

#include <array>
#include <cstdint>
#include <filesystem>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace graphpd::eval {

enum class ModelKind { fc, knn, gcn };

std::string_view to_string(ModelKind kind);
ModelKind parse_model_kind(std::string_view name);

// ---------------------------------------------------------------------------
// Cross-validation plans

enum class Role : std::uint8_t { train, val, test };

struct Fold {
  std::vector<Role> roles;  // indexed like the dataset's SpeakerTable
};

struct CvPlan {
  std::uint64_t replicate_seed = 0;
  std::vector<Fold> folds;
};

inline constexpr std::size_t kFolds = 10;

// Per class, speakers are shuffled with the replicate seed and cut into
// `folds` contiguous blocks. Fold f tests on block f, validates on block
// (f + 1) mod folds and trains on the rest. Needs >= folds speakers per class.
std::vector<CvPlan> make_cv_plans(const dataset::SpeakerTable& speakers, std::size_t replicates,
                                  std::uint64_t seed, std::size_t folds = kFolds);

// What a training run is allowed to see for one fold: test labels are
// replaced by -1 before anything reaches a trainer.
struct FoldView {
  std::vector<int> training_labels;
  gcn::NodeMask train_mask;
  std::vector<std::size_t> train_nodes;
  std::vector<std::size_t> val_nodes;
  std::vector<std::size_t> test_nodes;
  std::vector<SpeakerGroup> val_speakers;   // rows are node indices
  std::vector<SpeakerGroup> test_speakers;  // scoring only
  std::vector<std::size_t> test_speaker_index;
};

FoldView make_fold_view(const dataset::Dataset& data, const Fold& fold);

// ---------------------------------------------------------------------------
// Grid search

struct GridSpec {
  ModelKind model = ModelKind::gcn;
  std::vector<double> learning_rates;
  std::vector<std::size_t> neighbors;
  std::vector<std::size_t> depths;
  std::vector<graph::Distance> distances;

  // FC: lr {1e-3, 1e-2}. KNN: k {1,2,3,5,7,10}. GCN: lr {1e-3, 1e-4},
  // k {1,2,3,5,7,10}, L {2,3,4,5}. KNN/GCN use all three distances.
  static GridSpec defaults(ModelKind model);
  void validate() const;
};

struct GridCell {
  double learning_rate = 0.0;  // unused by KNN
  std::size_t k = 0;           // unused by FC
  std::size_t depth = 0;       // GCN only
  auto operator<=>(const GridCell&) const = default;
};

// Cells for one distance in ascending (lr, k, L) order; duplicates removed.
std::vector<GridCell> grid_cells(const GridSpec& grid);

struct ExperimentConfig {
  GridSpec grid;
  gcn::TrainConfig train;  // learning_rate and seed are overridden per cell
  std::size_t replicates = 5;
  std::uint64_t seed = 0;
  std::size_t jobs = 0;  // 0: hardware concurrency
};

// Lazily built, shared propagation matrices keyed by (distance, k) over all
// nodes of one dataset.
class GraphCache {
 public:
  explicit GraphCache(const Matrix& features) : features_(features) {}

  const gcn::PropagationMatrix& propagation(graph::Distance d, std::size_t k);
  const graph::Adjacency& adjacency(graph::Distance d, std::size_t k);

 private:
  struct Entry {
    graph::Adjacency adjacency;
    gcn::PropagationMatrix propagation;
  };
  const Entry& entry(graph::Distance d, std::size_t k);

  const Matrix& features_;
  std::mutex mutex_;
  std::map<graph::Distance, std::unique_ptr<graph::ColumnRanking>> rankings_;
  std::map<std::pair<graph::Distance, std::size_t>, std::unique_ptr<Entry>> entries_;
};

// Trains one GCN grid cell on one fold. Only view.training_labels,
// view.train_mask and view.val_speakers are read.
gcn::TrainResult train_gcn_cell(const dataset::Dataset& data, const FoldView& view,
                                const gcn::PropagationMatrix& P, const GridCell& cell,
                                const gcn::TrainConfig& base, std::uint64_t seed);

// ---------------------------------------------------------------------------
// Reports

struct CellResult {
  GridCell cell;
  double val_accuracy = 0.0;
  double test_accuracy = 0.0;
};

struct SpeakerPrediction {
  std::string speaker_id;
  int label = 0;
  int predicted = 0;
  std::array<double, 2> probs{};
};

struct SegmentPrediction {
  std::string segment_id;
  std::array<double, 2> probs{};
};

struct FoldRecord {
  std::size_t replicate = 0;
  std::size_t fold = 0;
  std::size_t selected = 0;  // index into cells
  std::vector<CellResult> cells;
  std::vector<SpeakerPrediction> test_speakers;   // selected cell
  std::vector<SegmentPrediction> test_segments;   // selected cell

  double test_accuracy() const { return cells.at(selected).test_accuracy; }
};

struct Summary {
  std::vector<double> replicate_scores;  // mean over each replicate's folds
  double mean = 0.0;
  double std = 0.0;  // population std over replicate scores
};

Summary summarize(const std::vector<FoldRecord>& folds, std::size_t replicates);

struct GroupReport {
  std::optional<graph::Distance> distance;  // empty for FC
  std::vector<FoldRecord> folds;            // replicate-major, fold-minor
  Summary summary;
  GridCell modal_cell;  // most often selected; ties go to grid order
};

struct ExperimentReport {
  ModelKind model = ModelKind::gcn;
  ExperimentConfig config;
  std::size_t folds_per_replicate = kFolds;
  std::vector<GroupReport> groups;
};

// Every replicate/fold is an independent job; results do not depend on
// scheduling. `cache` may be shared between calls on the same dataset.
ExperimentReport run_experiment(const dataset::Dataset& data, const ExperimentConfig& config,
                                const std::vector<CvPlan>& plans, GraphCache* cache = nullptr);

std::string report_json(const ExperimentReport& report);
void write_report_json(const ExperimentReport& report, const std::filesystem::path& path);
// model, distance, lr, k, L, mean, std (most-selected hyperparameters)
void write_summary_tsv(const ExperimentReport& report, const std::filesystem::path& path);

// ---------------------------------------------------------------------------
// Sweeps

enum class SweepAxis { neighbors, depth };

std::string_view to_string(SweepAxis axis);
SweepAxis parse_sweep_axis(std::string_view name);  // "k" or "L"

struct SweepConfig {
  SweepAxis axis = SweepAxis::neighbors;
  std::vector<std::size_t> values;
  // L per distance when sweeping k, k per distance when sweeping L.
  std::map<graph::Distance, std::size_t> fixed;
  std::vector<double> learning_rates;
  std::vector<graph::Distance> distances;
  gcn::TrainConfig train;
  std::size_t replicates = 5;
  std::uint64_t seed = 0;
  std::size_t jobs = 0;

  // k {1,2,3,5,7,10} or L {2,3,4,5}; fixed values default to the best
  // controlled-speech settings (E: k3 L3, C: k5 L2, M: k3 L3).
  static SweepConfig defaults(SweepAxis axis);
  void validate() const;
};

struct CurvePoint {
  graph::Distance distance = graph::Distance::euclidean;
  std::size_t value = 0;
  double mean = 0.0;
  double std = 0.0;
};

std::vector<CurvePoint> sweep(const dataset::Dataset& data, const SweepConfig& config,
                              const std::vector<CvPlan>& plans);

// axis, value, distance, mean, std
void write_curve_tsv(SweepAxis axis, const std::vector<CurvePoint>& points,
                     const std::filesystem::path& path);

}  // namespace graphpd::eval
