#pragma once

#include "common.hpp"
#include "gcn.hpp"
#include "graph_builder.hpp"
#include "voting.hpp"

#include <cstdint>
#include <span>
#include <vector>

namespace graphpd::baselines {

// Single linear layer + softmax on raw embeddings.
struct FcModel {
  Matrix weight;  // m x 2
  Vector bias;    // 2
};

Matrix fc_logits(const FcModel& model, const Matrix& X);
Matrix fc_predict(const FcModel& model, const Matrix& X);  // probabilities, rows sum to 1

struct FcTrainResult {
  FcModel model;
  gcn::TrainHistory history;
};

// Trains with the same Adam/early-stopping loop as the GCN (it is the GCN
// with no graph layers and identity propagation). `val_speakers` rows index
// into X_val. Only cfg.learning_rate/seed and the shared knobs are used.
FcTrainResult fc_train(const Matrix& X_train, std::span<const int> labels_train,
                       const Matrix& X_val, std::span<const int> labels_val,
                       std::span<const eval::SpeakerGroup> val_speakers,
                       const gcn::TrainConfig& cfg);

struct KnnConfig {
  std::size_t k = 1;
  graph::Distance distance = graph::Distance::euclidean;
};

// For every query, training rows ordered by (distance, row index), truncated
// to the first `depth` entries.
std::vector<std::vector<std::uint32_t>> knn_rankings(const Matrix& train_X, const Matrix& query_X,
                                                     graph::Distance distance, std::size_t depth);

// Class fractions among the first k ranked neighbors.
Matrix knn_probs_from_rankings(const std::vector<std::vector<std::uint32_t>>& rankings,
                               std::span<const int> train_labels, std::size_t k);

Matrix knn_predict(const Matrix& train_X, std::span<const int> train_labels,
                   const Matrix& query_X, const KnnConfig& cfg);

}  // namespace graphpd::baselines
