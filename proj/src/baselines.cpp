#include "baselines.hpp"

#include <algorithm>
#include <numeric>

namespace graphpd::baselines {

Matrix fc_logits(const FcModel& model, const Matrix& X) {
  if (X.cols() != model.weight.rows()) {
    throw_usage("shape-mismatch", "feature width does not match the FC weight");
  }
  Matrix logits = X * model.weight;
  logits.rowwise() += model.bias.transpose();
  return logits;
}

Matrix fc_predict(const FcModel& model, const Matrix& X) {
  return gcn::softmax_rows(fc_logits(model, X));
}

FcTrainResult fc_train(const Matrix& X_train, std::span<const int> labels_train,
                       const Matrix& X_val, std::span<const int> labels_val,
                       std::span<const eval::SpeakerGroup> val_speakers,
                       const gcn::TrainConfig& cfg) {
  const auto n_train = static_cast<std::size_t>(X_train.rows());
  const auto n_val = static_cast<std::size_t>(X_val.rows());
  if (n_train == 0) throw_usage("empty-mask", "FC training set is empty");
  if (labels_train.size() != n_train || labels_val.size() != n_val) {
    throw_usage("shape-mismatch", "label counts must match the feature rows");
  }
  if (n_val > 0 && X_val.cols() != X_train.cols()) {
    throw_usage("shape-mismatch", "train and validation widths differ");
  }

  Matrix X(static_cast<Eigen::Index>(n_train + n_val), X_train.cols());
  X.topRows(static_cast<Eigen::Index>(n_train)) = X_train;
  if (n_val > 0) X.bottomRows(static_cast<Eigen::Index>(n_val)) = X_val;

  std::vector<int> labels(labels_train.begin(), labels_train.end());
  labels.insert(labels.end(), labels_val.begin(), labels_val.end());

  gcn::TrainInputs inputs;
  inputs.labels = labels;
  inputs.train_mask.assign(n_train + n_val, false);
  std::fill(inputs.train_mask.begin(), inputs.train_mask.begin() + static_cast<std::ptrdiff_t>(n_train), true);
  for (const auto& g : val_speakers) {
    eval::SpeakerGroup shifted{g.rows, g.label};
    for (auto& r : shifted.rows) r += n_train;
    inputs.val_speakers.push_back(std::move(shifted));
  }

  auto model = gcn::GcnModel::initialize(static_cast<std::size_t>(X.cols()), cfg.hidden_width, 0, cfg.seed);
  auto trained = gcn::train(std::move(model), gcn::identity_propagation(n_train + n_val), X, inputs, cfg);
  return FcTrainResult{FcModel{trained.model.head_weight, trained.model.head_bias},
                       std::move(trained.history)};
}

std::vector<std::vector<std::uint32_t>> knn_rankings(const Matrix& train_X, const Matrix& query_X,
                                                     graph::Distance distance, std::size_t depth) {
  const auto n = static_cast<std::size_t>(train_X.rows());
  if (depth < 1) throw_usage("invalid-k", "k must be at least 1");
  if (depth > n) {
    throw_data("k-too-large", "k = " + std::to_string(depth) + " exceeds the " +
                                  std::to_string(n) + " training rows");
  }
  if (query_X.rows() > 0 && query_X.cols() != train_X.cols()) {
    throw_usage("shape-mismatch", "query and training widths differ");
  }
  const Matrix train_pts = train_X.transpose();
  const Matrix query_pts = query_X.transpose();

  std::vector<std::vector<std::uint32_t>> out(static_cast<std::size_t>(query_X.rows()));
  std::vector<double> dist(n);
  std::vector<std::uint32_t> idx(n);
  for (Eigen::Index q = 0; q < query_pts.cols(); ++q) {
    for (std::size_t t = 0; t < n; ++t) {
      dist[t] = graph::distance(query_pts.col(q), train_pts.col(static_cast<Eigen::Index>(t)), distance);
    }
    std::iota(idx.begin(), idx.end(), 0u);
    std::partial_sort(idx.begin(), idx.begin() + static_cast<std::ptrdiff_t>(depth), idx.end(),
                      [&](std::uint32_t a, std::uint32_t b) {
                        return dist[a] < dist[b] || (dist[a] == dist[b] && a < b);
                      });
    out[static_cast<std::size_t>(q)].assign(idx.begin(), idx.begin() + static_cast<std::ptrdiff_t>(depth));
  }
  return out;
}

Matrix knn_probs_from_rankings(const std::vector<std::vector<std::uint32_t>>& rankings,
                               std::span<const int> train_labels, std::size_t k) {
  Matrix probs = Matrix::Zero(static_cast<Eigen::Index>(rankings.size()), 2);
  for (std::size_t q = 0; q < rankings.size(); ++q) {
    if (rankings[q].size() < k) throw_usage("invalid-k", "ranking shallower than k");
    for (std::size_t r = 0; r < k; ++r) {
      const int y = train_labels[rankings[q][r]];
      if (y != 0 && y != 1) throw_usage("invalid-label", "training row has no usable label");
      probs(static_cast<Eigen::Index>(q), y) += 1.0;
    }
  }
  probs /= static_cast<double>(k);
  return probs;
}

Matrix knn_predict(const Matrix& train_X, std::span<const int> train_labels,
                   const Matrix& query_X, const KnnConfig& cfg) {
  if (train_labels.size() != static_cast<std::size_t>(train_X.rows())) {
    throw_usage("shape-mismatch", "one label per training row required");
  }
  return knn_probs_from_rankings(knn_rankings(train_X, query_X, cfg.distance, cfg.k),
                                 train_labels, cfg.k);
}

}  // namespace graphpd::baselines
