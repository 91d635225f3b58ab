#pragma once

#include "common.hpp"
#include "graph_builder.hpp"
#include "voting.hpp"

#include <Eigen/SparseCore>

#include <cstdint>
#include <filesystem>
#include <span>
#include <tuple>
#include <vector>

namespace graphpd::gcn {

using SparseMatrix = Eigen::SparseMatrix<double>;
using NodeMask = std::vector<bool>;

// D^-1/2 (A + I) D^-1/2 with D the degree matrix of A + I.
struct PropagationMatrix {
  SparseMatrix matrix;

  std::size_t size() const { return static_cast<std::size_t>(matrix.rows()); }
  Matrix dense() const { return Matrix(matrix); }
};

PropagationMatrix normalize_adjacency(const graph::Adjacency& A);
PropagationMatrix identity_propagation(std::size_t n);

struct TrainConfig {
  double learning_rate = 1e-3;
  std::size_t max_epochs = 300;
  std::size_t patience = 30;
  std::size_t hidden_width = 64;
  std::uint64_t seed = 0;
  double weight_decay = 5e-4;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;

  void validate() const;
};

// L graph-convolution layers followed by a linear 2-class head. With L = 0
// the model is a plain linear classifier on the input features.
struct GcnModel {
  std::vector<Matrix> layer_weights;  // m x h1, h1 x h2, ...
  Matrix head_weight;                 // h_L x 2
  Vector head_bias;                   // 2

  static GcnModel initialize(std::size_t input_dim, std::size_t hidden_width,
                             std::size_t depth, std::uint64_t seed);
  static GcnModel zeros_like(const GcnModel& other);

  std::size_t depth() const { return layer_weights.size(); }
  std::size_t input_dim() const;
  std::size_t parameter_count() const;
  bool all_finite() const;
  void check_shapes() const;

  bool operator==(const GcnModel& other) const;
};

// Gradients share the model's layout.
using Gradients = GcnModel;

// Calls f on corresponding tensors of each argument, in a fixed order:
// layer weights, head weight, head bias.
template <typename F, typename... Models>
void for_each_tensor(F&& f, Models&&... models) {
  const auto depth = std::get<0>(std::forward_as_tuple(models...)).layer_weights.size();
  for (std::size_t l = 0; l < depth; ++l) f(models.layer_weights[l]...);
  f(models.head_weight...);
  f(models.head_bias...);
}

struct ForwardPass {
  std::vector<Matrix> activations;      // [0] = X, [l+1] = ReLU(pre[l])
  std::vector<Matrix> pre_activations;  // P H_l W_l
  Matrix logits;                        // n x 2
  Matrix probs;                         // row-wise softmax of logits
};

ForwardPass forward(const GcnModel& model, const PropagationMatrix& P, const Matrix& X);

Matrix softmax_rows(const Matrix& logits);

struct LossResult {
  double loss = 0.0;
  Gradients gradients;
  bool single_class = false;  // training mask holds only one class
};

// Mean cross-entropy over masked nodes plus weight_decay/2 * sum ||W||^2
// (bias excluded), with exact reverse-mode gradients.
LossResult loss_and_gradients(const GcnModel& model, const PropagationMatrix& P, const Matrix& X,
                              std::span<const int> labels, const NodeMask& train_mask,
                              double weight_decay);

struct TrainInputs {
  std::span<const int> labels;  // -1 marks a withheld label
  NodeMask train_mask;
  std::vector<eval::SpeakerGroup> val_speakers;  // rows are node indices
};

struct TrainHistory {
  std::vector<double> train_loss;
  std::vector<double> val_accuracy;
  std::vector<double> val_loss;
};

struct TrainResult {
  GcnModel model;  // best snapshot
  TrainHistory history;
  std::size_t best_epoch = 0;
  bool single_class_warning = false;
};

// Full-batch Adam. Epoch e evaluates the parameters after e updates; the
// snapshot with the highest validation speaker accuracy is kept (ties: lower
// validation loss, then earliest epoch) and training stops after `patience`
// epochs without improvement. Without validation speakers the final
// parameters are returned.
TrainResult train(GcnModel model, const PropagationMatrix& P, const Matrix& X,
                  const TrainInputs& inputs, const TrainConfig& cfg);

struct Checkpoint {
  GcnModel model;
  TrainConfig config;
};

// u32 LE header length, JSON header, then every parameter as f64 LE in
// for_each_tensor order, row-major within a tensor.
void save_checkpoint(const Checkpoint& ckpt, const std::filesystem::path& path);
Checkpoint load_checkpoint(const std::filesystem::path& path);

}  // namespace graphpd::gcn
