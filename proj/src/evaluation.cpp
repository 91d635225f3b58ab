#include "evaluation.hpp"

#include "baselines.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <exception>
#include <fstream>
#include <functional>
#include <numeric>
#include <random>
#include <thread>

namespace graphpd::eval {

std::string_view to_string(ModelKind kind) {
  switch (kind) {
    case ModelKind::fc: return "fc";
    case ModelKind::knn: return "knn";
    case ModelKind::gcn: return "gcn";
  }
  return "unknown";
}

ModelKind parse_model_kind(std::string_view name) {
  if (name == "fc") return ModelKind::fc;
  if (name == "knn") return ModelKind::knn;
  if (name == "gcn") return ModelKind::gcn;
  throw_usage("unknown-model", "unknown model '" + std::string(name) + "'");
}

std::string_view to_string(SweepAxis axis) {
  return axis == SweepAxis::neighbors ? "k" : "L";
}

SweepAxis parse_sweep_axis(std::string_view name) {
  if (name == "k") return SweepAxis::neighbors;
  if (name == "L") return SweepAxis::depth;
  throw_usage("unknown-axis", "sweep axis must be k or L, got '" + std::string(name) + "'");
}

// ---------------------------------------------------------------------------

std::vector<CvPlan> make_cv_plans(const dataset::SpeakerTable& speakers, std::size_t replicates,
                                  std::uint64_t seed, std::size_t folds) {
  if (replicates == 0) throw_usage("invalid-config", "at least one replicate is required");
  if (folds < 3) throw_usage("invalid-config", "need at least 3 folds for train/val/test");

  std::array<std::vector<std::size_t>, 2> by_class;
  for (std::size_t s = 0; s < speakers.size(); ++s) {
    by_class[dataset::to_int(speakers[s].label)].push_back(s);
  }
  for (int c = 0; c < 2; ++c) {
    if (by_class[c].size() < folds) {
      throw_data("too-few-speakers", "class " + std::to_string(c) + " has " +
                                         std::to_string(by_class[c].size()) +
                                         " speakers; stratified " + std::to_string(folds) +
                                         "-fold CV needs at least " + std::to_string(folds));
    }
  }

  std::vector<CvPlan> plans;
  for (std::size_t r = 0; r < replicates; ++r) {
    CvPlan plan;
    plan.replicate_seed = derive_seed(seed, r);
    std::mt19937_64 rng(plan.replicate_seed);

    std::vector<std::size_t> block_of(speakers.size(), 0);
    for (auto& members : by_class) {
      auto shuffled = members;
      std::shuffle(shuffled.begin(), shuffled.end(), rng);
      const auto count = shuffled.size();
      for (std::size_t b = 0; b < folds; ++b) {
        for (std::size_t p = b * count / folds; p < (b + 1) * count / folds; ++p) {
          block_of[shuffled[p]] = b;
        }
      }
    }
    for (std::size_t f = 0; f < folds; ++f) {
      Fold fold;
      fold.roles.resize(speakers.size());
      for (std::size_t s = 0; s < speakers.size(); ++s) {
        if (block_of[s] == f) {
          fold.roles[s] = Role::test;
        } else if (block_of[s] == (f + 1) % folds) {
          fold.roles[s] = Role::val;
        } else {
          fold.roles[s] = Role::train;
        }
      }
      plan.folds.push_back(std::move(fold));
    }
    plans.push_back(std::move(plan));
  }
  return plans;
}

FoldView make_fold_view(const dataset::Dataset& data, const Fold& fold) {
  const auto& table = data.speakers();
  if (fold.roles.size() != table.size()) {
    throw_usage("shape-mismatch", "fold does not cover the dataset's speakers");
  }
  FoldView view;
  view.training_labels.assign(data.size(), -1);
  view.train_mask.assign(data.size(), false);
  for (std::size_t s = 0; s < table.size(); ++s) {
    const auto& spk = table[s];
    const int label = dataset::to_int(spk.label);
    switch (fold.roles[s]) {
      case Role::train:
        for (auto node : spk.nodes) {
          view.training_labels[node] = label;
          view.train_mask[node] = true;
          view.train_nodes.push_back(node);
        }
        break;
      case Role::val:
        for (auto node : spk.nodes) {
          view.training_labels[node] = label;
          view.val_nodes.push_back(node);
        }
        view.val_speakers.push_back(SpeakerGroup{spk.nodes, label});
        break;
      case Role::test:
        view.test_nodes.insert(view.test_nodes.end(), spk.nodes.begin(), spk.nodes.end());
        view.test_speakers.push_back(SpeakerGroup{spk.nodes, label});
        view.test_speaker_index.push_back(s);
        break;
    }
  }
  return view;
}

// ---------------------------------------------------------------------------

GridSpec GridSpec::defaults(ModelKind model) {
  using graph::Distance;
  GridSpec g;
  g.model = model;
  const std::vector<Distance> all = {Distance::euclidean, Distance::cosine, Distance::manhattan};
  switch (model) {
    case ModelKind::fc:
      g.learning_rates = {1e-3, 1e-2};
      break;
    case ModelKind::knn:
      g.neighbors = {1, 2, 3, 5, 7, 10};
      g.distances = all;
      break;
    case ModelKind::gcn:
      g.learning_rates = {1e-3, 1e-4};
      g.neighbors = {1, 2, 3, 5, 7, 10};
      g.depths = {2, 3, 4, 5};
      g.distances = all;
      break;
  }
  return g;
}

void GridSpec::validate() const {
  auto positive = [](const auto& v) {
    return std::all_of(v.begin(), v.end(), [](auto x) { return x > 0; });
  };
  if (model != ModelKind::knn && (learning_rates.empty() || !positive(learning_rates))) {
    throw_usage("invalid-grid", "learning rates must be a nonempty list of positive values");
  }
  if (model != ModelKind::fc && (neighbors.empty() || !positive(neighbors))) {
    throw_usage("invalid-grid", "k values must be a nonempty list of positive integers");
  }
  if (model == ModelKind::gcn && (depths.empty() || !positive(depths))) {
    throw_usage("invalid-grid", "L values must be a nonempty list of positive integers");
  }
  if (model != ModelKind::fc && distances.empty()) {
    throw_usage("invalid-grid", "at least one distance is required");
  }
}

std::vector<GridCell> grid_cells(const GridSpec& grid) {
  std::vector<double> lrs = grid.model == ModelKind::knn ? std::vector<double>{0.0} : grid.learning_rates;
  std::vector<std::size_t> ks = grid.model == ModelKind::fc ? std::vector<std::size_t>{0} : grid.neighbors;
  std::vector<std::size_t> ls = grid.model == ModelKind::gcn ? grid.depths : std::vector<std::size_t>{0};
  std::vector<GridCell> cells;
  for (double lr : lrs) {
    for (auto k : ks) {
      for (auto l : ls) cells.push_back(GridCell{lr, k, l});
    }
  }
  std::sort(cells.begin(), cells.end());
  cells.erase(std::unique(cells.begin(), cells.end()), cells.end());
  return cells;
}

const GraphCache::Entry& GraphCache::entry(graph::Distance d, std::size_t k) {
  std::lock_guard lock(mutex_);
  auto key = std::make_pair(d, k);
  if (auto it = entries_.find(key); it != entries_.end()) return *it->second;
  auto& ranking = rankings_[d];
  if (!ranking) {
    ranking = std::make_unique<graph::ColumnRanking>(graph::kernel_from_features(features_, d));
  }
  auto e = std::make_unique<Entry>();
  e->adjacency = ranking->graph(k);
  e->propagation = gcn::normalize_adjacency(e->adjacency);
  return *entries_.emplace(key, std::move(e)).first->second;
}

const gcn::PropagationMatrix& GraphCache::propagation(graph::Distance d, std::size_t k) {
  return entry(d, k).propagation;
}

const graph::Adjacency& GraphCache::adjacency(graph::Distance d, std::size_t k) {
  return entry(d, k).adjacency;
}

gcn::TrainResult train_gcn_cell(const dataset::Dataset& data, const FoldView& view,
                                const gcn::PropagationMatrix& P, const GridCell& cell,
                                const gcn::TrainConfig& base, std::uint64_t seed) {
  gcn::TrainConfig cfg = base;
  cfg.learning_rate = cell.learning_rate;
  cfg.seed = seed;
  auto model = gcn::GcnModel::initialize(data.dim(), cfg.hidden_width, cell.depth, seed);
  gcn::TrainInputs inputs;
  inputs.labels = view.training_labels;
  inputs.train_mask = view.train_mask;
  inputs.val_speakers = view.val_speakers;
  return gcn::train(std::move(model), P, data.features(), inputs, cfg);
}

// ---------------------------------------------------------------------------

namespace {

Matrix gather_rows(const Matrix& M, const std::vector<std::size_t>& rows) {
  Matrix out(static_cast<Eigen::Index>(rows.size()), M.cols());
  for (std::size_t i = 0; i < rows.size(); ++i) out.row(static_cast<Eigen::Index>(i)) = M.row(static_cast<Eigen::Index>(rows[i]));
  return out;
}

std::vector<int> gather_labels(const std::vector<int>& labels, const std::vector<std::size_t>& rows) {
  std::vector<int> out;
  out.reserve(rows.size());
  for (auto r : rows) out.push_back(labels[r]);
  return out;
}

// Renumbers group rows 0.. in group order, matching gather_rows over the
// concatenated group nodes (how FoldView builds val_nodes/test_nodes).
std::vector<SpeakerGroup> localize(const std::vector<SpeakerGroup>& groups) {
  std::vector<SpeakerGroup> out;
  std::size_t next = 0;
  for (const auto& g : groups) {
    SpeakerGroup local{{}, g.label};
    for (std::size_t i = 0; i < g.rows.size(); ++i) local.rows.push_back(next++);
    out.push_back(std::move(local));
  }
  return out;
}

struct CellProbs {
  Matrix val;   // rows follow view.val_nodes
  Matrix test;  // rows follow view.test_nodes
};

// Evaluates every cell for one fold and keeps the first cell with the
// highest validation speaker accuracy.
FoldRecord evaluate_fold(const dataset::Dataset& data, const FoldView& view,
                         const std::vector<GridCell>& cells,
                         const std::function<CellProbs(std::size_t)>& run_cell) {
  const auto val_local = localize(view.val_speakers);
  const auto test_local = localize(view.test_speakers);

  FoldRecord rec;
  Matrix best_test;
  double best_val = -1.0;
  for (std::size_t c = 0; c < cells.size(); ++c) {
    const auto probs = run_cell(c);
    CellResult res{cells[c], speaker_accuracy(probs.val, val_local),
                   speaker_accuracy(probs.test, test_local)};
    if (res.val_accuracy > best_val) {
      best_val = res.val_accuracy;
      rec.selected = c;
      best_test = probs.test;
    }
    rec.cells.push_back(res);
  }

  const auto votes = soft_vote(best_test, test_local);
  for (std::size_t i = 0; i < votes.size(); ++i) {
    const auto& spk = data.speakers()[view.test_speaker_index[i]];
    rec.test_speakers.push_back(SpeakerPrediction{spk.id, view.test_speakers[i].label,
                                                  votes[i].predicted, votes[i].mean_probs});
  }
  for (std::size_t i = 0; i < view.test_nodes.size(); ++i) {
    const auto r = static_cast<Eigen::Index>(i);
    rec.test_segments.push_back(SegmentPrediction{data.records()[view.test_nodes[i]].segment_id,
                                                  {best_test(r, 0), best_test(r, 1)}});
  }
  return rec;
}

void run_parallel(std::size_t count, std::size_t jobs, const std::function<void(std::size_t)>& fn) {
  if (jobs == 0) jobs = std::max(1u, std::thread::hardware_concurrency());
  jobs = std::min(jobs, count);
  if (jobs <= 1) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::exception_ptr> errors(count);
  {
    std::vector<std::jthread> workers;
    for (std::size_t w = 0; w < jobs; ++w) {
      workers.emplace_back([&] {
        for (std::size_t i; (i = next.fetch_add(1)) < count;) {
          try {
            fn(i);
          } catch (...) {
            errors[i] = std::current_exception();
          }
        }
      });
    }
  }
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

GridCell modal_cell(const std::vector<FoldRecord>& folds, const std::vector<GridCell>& cells) {
  std::vector<std::size_t> counts(cells.size(), 0);
  for (const auto& f : folds) ++counts[f.selected];
  const auto best = std::max_element(counts.begin(), counts.end()) - counts.begin();
  return cells[static_cast<std::size_t>(best)];
}

}  // namespace

Summary summarize(const std::vector<FoldRecord>& folds, std::size_t replicates) {
  Summary s;
  if (replicates == 0) return s;
  std::vector<double> sums(replicates, 0.0);
  std::vector<std::size_t> counts(replicates, 0);
  for (const auto& f : folds) {
    sums.at(f.replicate) += f.test_accuracy();
    ++counts.at(f.replicate);
  }
  for (std::size_t r = 0; r < replicates; ++r) {
    s.replicate_scores.push_back(counts[r] ? sums[r] / static_cast<double>(counts[r]) : 0.0);
  }
  const double n = static_cast<double>(replicates);
  s.mean = std::accumulate(s.replicate_scores.begin(), s.replicate_scores.end(), 0.0) / n;
  double var = 0.0;
  for (double v : s.replicate_scores) var += (v - s.mean) * (v - s.mean);
  s.std = std::sqrt(var / n);
  return s;
}

ExperimentReport run_experiment(const dataset::Dataset& data, const ExperimentConfig& config,
                                const std::vector<CvPlan>& plans, GraphCache* cache) {
  const auto& grid = config.grid;
  grid.validate();
  {
    auto probe = config.train;
    probe.learning_rate = 0.0;
    probe.validate();
  }
  if (plans.empty() || plans.size() != config.replicates) {
    throw_usage("invalid-config", "expected one CV plan per replicate");
  }
  const std::size_t folds = plans.front().folds.size();
  for (const auto& p : plans) {
    if (p.folds.size() != folds) throw_usage("invalid-config", "plans disagree on fold count");
  }

  GraphCache local_cache(data.features());
  GraphCache& graphs = cache ? *cache : local_cache;
  const auto cells = grid_cells(grid);

  ExperimentReport report;
  report.model = grid.model;
  report.config = config;
  report.folds_per_replicate = folds;
  if (grid.model == ModelKind::fc) {
    report.groups.push_back(GroupReport{});
  } else {
    for (auto d : grid.distances) {
      GroupReport g;
      g.distance = d;
      report.groups.push_back(std::move(g));
    }
  }

  if (grid.model == ModelKind::gcn) {
    // Built up front so graph errors surface before any job starts.
    for (auto d : grid.distances) {
      for (auto k : grid.neighbors) graphs.propagation(d, k);
    }
  }

  std::vector<FoldView> views;
  for (const auto& p : plans) {
    for (const auto& f : p.folds) views.push_back(make_fold_view(data, f));
  }

  const std::size_t per_group = plans.size() * folds;
  for (auto& g : report.groups) g.folds.resize(per_group);

  const Matrix& X = data.features();
  run_parallel(report.groups.size() * per_group, config.jobs, [&](std::size_t task) {
    auto& group = report.groups[task / per_group];
    const std::size_t slot = task % per_group;
    const std::size_t rep = slot / folds;
    const std::size_t fold = slot % folds;
    const FoldView& view = views[slot];

    std::function<CellProbs(std::size_t)> run_cell;
    std::vector<std::vector<std::uint32_t>> rankings;  // KNN only
    Matrix val_X, test_X, train_X;
    std::vector<int> train_labels, val_labels;
    std::vector<SpeakerGroup> val_local;

    switch (grid.model) {
      case ModelKind::gcn:
        run_cell = [&](std::size_t c) {
          const auto& P = graphs.propagation(*group.distance, cells[c].k);
          const auto result =
              train_gcn_cell(data, view, P, cells[c], config.train, derive_seed(config.seed, rep, fold, c));
          const auto probs = gcn::forward(result.model, P, X).probs;
          return CellProbs{gather_rows(probs, view.val_nodes), gather_rows(probs, view.test_nodes)};
        };
        break;
      case ModelKind::fc:
        train_X = gather_rows(X, view.train_nodes);
        val_X = gather_rows(X, view.val_nodes);
        test_X = gather_rows(X, view.test_nodes);
        train_labels = gather_labels(view.training_labels, view.train_nodes);
        val_labels = gather_labels(view.training_labels, view.val_nodes);
        val_local = localize(view.val_speakers);
        run_cell = [&](std::size_t c) {
          auto cfg = config.train;
          cfg.learning_rate = cells[c].learning_rate;
          cfg.seed = derive_seed(config.seed, rep, fold, c);
          const auto fc = baselines::fc_train(train_X, train_labels, val_X, val_labels, val_local, cfg);
          return CellProbs{baselines::fc_predict(fc.model, val_X), baselines::fc_predict(fc.model, test_X)};
        };
        break;
      case ModelKind::knn: {
        train_X = gather_rows(X, view.train_nodes);
        train_labels = gather_labels(view.training_labels, view.train_nodes);
        std::vector<std::size_t> queries = view.val_nodes;
        queries.insert(queries.end(), view.test_nodes.begin(), view.test_nodes.end());
        std::size_t depth = 0;
        for (const auto& cell : cells) depth = std::max(depth, cell.k);
        rankings = baselines::knn_rankings(train_X, gather_rows(X, queries), *group.distance, depth);
        run_cell = [&](std::size_t c) {
          const Matrix probs = baselines::knn_probs_from_rankings(rankings, train_labels, cells[c].k);
          const auto nv = static_cast<Eigen::Index>(view.val_nodes.size());
          return CellProbs{probs.topRows(nv), probs.bottomRows(probs.rows() - nv)};
        };
        break;
      }
    }

    auto rec = evaluate_fold(data, view, cells, run_cell);
    rec.replicate = rep;
    rec.fold = fold;
    group.folds[slot] = std::move(rec);
  });

  for (auto& g : report.groups) {
    g.summary = summarize(g.folds, plans.size());
    g.modal_cell = modal_cell(g.folds, cells);
  }
  return report;
}

// ---------------------------------------------------------------------------

namespace {

using ordered_json = nlohmann::ordered_json;

ordered_json cell_json(ModelKind model, const GridCell& c) {
  ordered_json j = ordered_json::object();
  if (model != ModelKind::knn) j["lr"] = c.learning_rate;
  if (model != ModelKind::fc) j["k"] = c.k;
  if (model == ModelKind::gcn) j["L"] = c.depth;
  return j;
}

std::vector<std::string> distance_names(const std::vector<graph::Distance>& ds) {
  std::vector<std::string> out;
  for (auto d : ds) out.emplace_back(graph::to_string(d));
  return out;
}

std::string format_fixed(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.4f", v);
  return buf;
}

std::string format_general(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%g", v);
  return buf;
}

}  // namespace

std::string report_json(const ExperimentReport& report) {
  const auto& cfg = report.config;
  const auto model = report.model;
  ordered_json j;
  j["model"] = std::string(to_string(model));
  j["replicates"] = cfg.replicates;
  j["folds"] = report.folds_per_replicate;
  j["seed"] = cfg.seed;
  j["grid"] = {{"lr", cfg.grid.learning_rates},
               {"k", cfg.grid.neighbors},
               {"L", cfg.grid.depths},
               {"distance", distance_names(cfg.grid.distances)}};
  j["train"] = {{"max_epochs", cfg.train.max_epochs},
                {"patience", cfg.train.patience},
                {"hidden_width", cfg.train.hidden_width},
                {"weight_decay", cfg.train.weight_decay},
                {"beta1", cfg.train.beta1},
                {"beta2", cfg.train.beta2},
                {"epsilon", cfg.train.epsilon}};

  ordered_json groups = ordered_json::array();
  for (const auto& g : report.groups) {
    ordered_json gj;
    gj["distance"] = g.distance ? ordered_json(std::string(graph::to_string(*g.distance))) : ordered_json();
    gj["mean"] = g.summary.mean;
    gj["std"] = g.summary.std;
    gj["replicate_scores"] = g.summary.replicate_scores;
    gj["most_selected"] = cell_json(model, g.modal_cell);
    ordered_json folds = ordered_json::array();
    for (const auto& f : g.folds) {
      ordered_json fj;
      fj["replicate"] = f.replicate;
      fj["fold"] = f.fold;
      fj["selected"] = cell_json(model, f.cells[f.selected].cell);
      fj["val_accuracy"] = f.cells[f.selected].val_accuracy;
      fj["test_accuracy"] = f.test_accuracy();
      ordered_json cells = ordered_json::array();
      for (const auto& c : f.cells) {
        auto cj = cell_json(model, c.cell);
        cj["val_accuracy"] = c.val_accuracy;
        cj["test_accuracy"] = c.test_accuracy;
        cells.push_back(std::move(cj));
      }
      fj["cells"] = std::move(cells);
      ordered_json speakers = ordered_json::array();
      for (const auto& s : f.test_speakers) {
        speakers.push_back({{"speaker_id", s.speaker_id},
                            {"label", s.label},
                            {"predicted", s.predicted},
                            {"probs", s.probs}});
      }
      fj["test_speakers"] = std::move(speakers);
      ordered_json segments = ordered_json::array();
      for (const auto& s : f.test_segments) {
        segments.push_back({{"segment_id", s.segment_id}, {"probs", s.probs}});
      }
      fj["test_segments"] = std::move(segments);
      folds.push_back(std::move(fj));
    }
    gj["folds"] = std::move(folds);
    groups.push_back(std::move(gj));
  }
  j["groups"] = std::move(groups);
  return j.dump(1) + "\n";
}

void write_report_json(const ExperimentReport& report, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw_io("io-error", "cannot write " + path.string());
  out << report_json(report);
  if (!out) throw_io("io-error", "failed writing " + path.string());
}

void write_summary_tsv(const ExperimentReport& report, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw_io("io-error", "cannot write " + path.string());
  const auto model = report.model;
  out << "model\tdistance\tlr\tk\tL\tmean\tstd\n";
  for (const auto& g : report.groups) {
    const auto& c = g.modal_cell;
    out << to_string(model) << '\t' << (g.distance ? graph::to_string(*g.distance) : "-") << '\t'
        << (model == ModelKind::knn ? "-" : format_general(c.learning_rate)) << '\t'
        << (model == ModelKind::fc ? "-" : std::to_string(c.k)) << '\t'
        << (model == ModelKind::gcn ? std::to_string(c.depth) : "-") << '\t'
        << format_fixed(g.summary.mean) << '\t' << format_fixed(g.summary.std) << '\n';
  }
  if (!out) throw_io("io-error", "failed writing " + path.string());
}

// ---------------------------------------------------------------------------

SweepConfig SweepConfig::defaults(SweepAxis axis) {
  using graph::Distance;
  SweepConfig c;
  c.axis = axis;
  c.learning_rates = {1e-3, 1e-4};
  c.distances = {Distance::euclidean, Distance::cosine, Distance::manhattan};
  if (axis == SweepAxis::neighbors) {
    c.values = {1, 2, 3, 5, 7, 10};
    c.fixed = {{Distance::euclidean, 3}, {Distance::cosine, 2}, {Distance::manhattan, 3}};
  } else {
    c.values = {2, 3, 4, 5};
    c.fixed = {{Distance::euclidean, 3}, {Distance::cosine, 5}, {Distance::manhattan, 3}};
  }
  return c;
}

void SweepConfig::validate() const {
  if (values.empty()) throw_usage("invalid-config", "sweep needs at least one value");
  if (distances.empty()) throw_usage("invalid-config", "sweep needs at least one distance");
  if (learning_rates.empty()) throw_usage("invalid-config", "sweep needs at least one learning rate");
  for (auto v : values) {
    if (v == 0) throw_usage("invalid-config", "sweep values must be positive");
  }
  for (auto d : distances) {
    auto it = fixed.find(d);
    if (it == fixed.end() || it->second == 0) {
      throw_usage("invalid-config", "no fixed " + std::string(axis == SweepAxis::neighbors ? "L" : "k") +
                                        " for distance " + std::string(graph::to_string(d)));
    }
  }
}

std::vector<CurvePoint> sweep(const dataset::Dataset& data, const SweepConfig& config,
                              const std::vector<CvPlan>& plans) {
  config.validate();
  GraphCache cache(data.features());
  std::vector<CurvePoint> points;
  for (auto d : config.distances) {
    for (auto value : config.values) {
      ExperimentConfig ec;
      ec.grid.model = ModelKind::gcn;
      ec.grid.learning_rates = config.learning_rates;
      ec.grid.distances = {d};
      if (config.axis == SweepAxis::neighbors) {
        ec.grid.neighbors = {value};
        ec.grid.depths = {config.fixed.at(d)};
      } else {
        ec.grid.neighbors = {config.fixed.at(d)};
        ec.grid.depths = {value};
      }
      ec.train = config.train;
      ec.replicates = config.replicates;
      ec.seed = config.seed;
      ec.jobs = config.jobs;
      const auto report = run_experiment(data, ec, plans, &cache);
      const auto& s = report.groups.front().summary;
      points.push_back(CurvePoint{d, value, s.mean, s.std});
    }
  }
  return points;
}

void write_curve_tsv(SweepAxis axis, const std::vector<CurvePoint>& points,
                     const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw_io("io-error", "cannot write " + path.string());
  out << "axis\tvalue\tdistance\tmean\tstd\n";
  for (const auto& p : points) {
    out << to_string(axis) << '\t' << p.value << '\t' << graph::to_string(p.distance) << '\t'
        << format_fixed(p.mean) << '\t' << format_fixed(p.std) << '\n';
  }
  if (!out) throw_io("io-error", "failed writing " + path.string());
}

}  // namespace graphpd::eval
