#include "gcn.hpp"

#include <nlohmann/json.hpp>

#include <bit>
#include <cmath>
#include <fstream>
#include <random>

namespace graphpd::gcn {

PropagationMatrix normalize_adjacency(const graph::Adjacency& A) {
  const auto n = A.node_count();
  std::vector<double> inv_sqrt_deg(n);
  for (std::size_t i = 0; i < n; ++i) {
    inv_sqrt_deg[i] = 1.0 / std::sqrt(static_cast<double>(A.degrees()[i] + 1));
  }
  std::vector<Eigen::Triplet<double>> triplets;
  triplets.reserve(n + 2 * A.edges().size());
  for (std::size_t i = 0; i < n; ++i) {
    const auto ii = static_cast<Eigen::Index>(i);
    triplets.emplace_back(ii, ii, inv_sqrt_deg[i] * inv_sqrt_deg[i]);
  }
  for (const auto& e : A.edges()) {
    const double w = inv_sqrt_deg[e.a] * inv_sqrt_deg[e.b];
    triplets.emplace_back(e.a, e.b, w);
    triplets.emplace_back(e.b, e.a, w);
  }
  PropagationMatrix P;
  P.matrix.resize(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
  P.matrix.setFromTriplets(triplets.begin(), triplets.end());
  P.matrix.makeCompressed();
  return P;
}

PropagationMatrix identity_propagation(std::size_t n) {
  PropagationMatrix P;
  P.matrix.resize(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
  P.matrix.setIdentity();
  return P;
}

void TrainConfig::validate() const {
  if (!(learning_rate >= 0.0) || !std::isfinite(learning_rate)) {
    throw_usage("invalid-config", "learning_rate must be finite and nonnegative");
  }
  if (max_epochs == 0) throw_usage("invalid-config", "max_epochs must be positive");
  if (patience == 0) throw_usage("invalid-config", "patience must be positive");
  if (hidden_width == 0) throw_usage("invalid-config", "hidden_width must be positive");
  if (!(weight_decay >= 0.0)) throw_usage("invalid-config", "weight_decay must be nonnegative");
}

namespace {

Matrix glorot(std::size_t fan_in, std::size_t fan_out, std::mt19937_64& rng) {
  const double limit = std::sqrt(6.0 / static_cast<double>(fan_in + fan_out));
  std::uniform_real_distribution<double> dist(-limit, limit);
  Matrix W(static_cast<Eigen::Index>(fan_in), static_cast<Eigen::Index>(fan_out));
  // Fill row-major so the draw order is layout independent.
  for (Eigen::Index r = 0; r < W.rows(); ++r) {
    for (Eigen::Index c = 0; c < W.cols(); ++c) W(r, c) = dist(rng);
  }
  return W;
}

}  // namespace

GcnModel GcnModel::initialize(std::size_t input_dim, std::size_t hidden_width,
                              std::size_t depth, std::uint64_t seed) {
  if (input_dim == 0) throw_usage("invalid-config", "input dimension must be positive");
  if (depth > 0 && hidden_width == 0) throw_usage("invalid-config", "hidden_width must be positive");
  std::mt19937_64 rng(seed);
  GcnModel model;
  std::size_t in = input_dim;
  for (std::size_t l = 0; l < depth; ++l) {
    model.layer_weights.push_back(glorot(in, hidden_width, rng));
    in = hidden_width;
  }
  model.head_weight = glorot(in, 2, rng);
  model.head_bias = Vector::Zero(2);
  return model;
}

GcnModel GcnModel::zeros_like(const GcnModel& other) {
  GcnModel z;
  for (const auto& W : other.layer_weights) z.layer_weights.push_back(Matrix::Zero(W.rows(), W.cols()));
  z.head_weight = Matrix::Zero(other.head_weight.rows(), other.head_weight.cols());
  z.head_bias = Vector::Zero(other.head_bias.size());
  return z;
}

std::size_t GcnModel::input_dim() const {
  return static_cast<std::size_t>(layer_weights.empty() ? head_weight.rows()
                                                        : layer_weights.front().rows());
}

std::size_t GcnModel::parameter_count() const {
  std::size_t count = 0;
  for_each_tensor([&](const auto& t) { count += static_cast<std::size_t>(t.size()); }, *this);
  return count;
}

bool GcnModel::all_finite() const {
  bool ok = true;
  for_each_tensor([&](const auto& t) { ok = ok && t.allFinite(); }, *this);
  return ok;
}

void GcnModel::check_shapes() const {
  Eigen::Index in = layer_weights.empty() ? head_weight.rows() : layer_weights.front().rows();
  for (const auto& W : layer_weights) {
    if (W.rows() != in) throw_usage("shape-mismatch", "layer weight shapes do not chain");
    in = W.cols();
  }
  if (head_weight.rows() != in || head_weight.cols() != 2 || head_bias.size() != 2) {
    throw_usage("shape-mismatch", "head must map the last width to 2 classes");
  }
}

bool GcnModel::operator==(const GcnModel& other) const {
  if (layer_weights.size() != other.layer_weights.size()) return false;
  bool same = true;
  for_each_tensor(
      [&](const auto& a, const auto& b) {
        same = same && a.rows() == b.rows() && a.cols() == b.cols() && a == b;
      },
      *this, other);
  return same;
}

Matrix softmax_rows(const Matrix& logits) {
  Matrix probs(logits.rows(), logits.cols());
  for (Eigen::Index i = 0; i < logits.rows(); ++i) {
    const double mx = logits.row(i).maxCoeff();
    probs.row(i) = (logits.row(i).array() - mx).exp();
    probs.row(i) /= probs.row(i).sum();
  }
  return probs;
}

ForwardPass forward(const GcnModel& model, const PropagationMatrix& P, const Matrix& X) {
  model.check_shapes();
  if (X.cols() != static_cast<Eigen::Index>(model.input_dim())) {
    throw_usage("shape-mismatch", "feature width does not match the model input dimension");
  }
  if (P.matrix.rows() != X.rows() || P.matrix.cols() != X.rows()) {
    throw_usage("shape-mismatch", "propagation matrix does not match the node count");
  }
  ForwardPass fp;
  fp.activations.reserve(model.depth() + 1);
  fp.pre_activations.reserve(model.depth());
  fp.activations.push_back(X);
  for (const auto& W : model.layer_weights) {
    Matrix Z = P.matrix * (fp.activations.back() * W);
    fp.activations.push_back(Z.cwiseMax(0.0));
    fp.pre_activations.push_back(std::move(Z));
  }
  fp.logits = fp.activations.back() * model.head_weight;
  fp.logits.rowwise() += model.head_bias.transpose();
  fp.probs = softmax_rows(fp.logits);
  return fp;
}

namespace {

struct MaskInfo {
  std::size_t count = 0;
  bool has_class[2] = {false, false};
};

MaskInfo inspect_mask(std::span<const int> labels, const NodeMask& mask, std::size_t n) {
  if (labels.size() != n || mask.size() != n) {
    throw_usage("shape-mismatch", "labels and mask must have one entry per node");
  }
  MaskInfo info;
  for (std::size_t i = 0; i < n; ++i) {
    if (!mask[i]) continue;
    if (labels[i] != 0 && labels[i] != 1) {
      throw_usage("invalid-label", "training node " + std::to_string(i) + " has no usable label");
    }
    ++info.count;
    info.has_class[labels[i]] = true;
  }
  if (info.count == 0) throw_usage("empty-mask", "training mask selects no nodes");
  return info;
}

double weight_penalty(const GcnModel& model) {
  double s = model.head_weight.squaredNorm();
  for (const auto& W : model.layer_weights) s += W.squaredNorm();
  return 0.5 * s;
}

LossResult loss_from_forward(const GcnModel& model, const PropagationMatrix& P,
                             const ForwardPass& fp, std::span<const int> labels,
                             const NodeMask& mask, double weight_decay) {
  const auto n = static_cast<std::size_t>(fp.probs.rows());
  const auto info = inspect_mask(labels, mask, n);
  const double inv = 1.0 / static_cast<double>(info.count);

  LossResult out;
  out.single_class = !(info.has_class[0] && info.has_class[1]);

  Matrix d_logits = Matrix::Zero(fp.probs.rows(), 2);
  double ce = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    if (!mask[i]) continue;
    const auto r = static_cast<Eigen::Index>(i);
    const int y = labels[i];
    // log-softmax from logits for accuracy on confident rows
    const double mx = fp.logits.row(r).maxCoeff();
    const double lse = mx + std::log((fp.logits.row(r).array() - mx).exp().sum());
    ce -= fp.logits(r, y) - lse;
    d_logits.row(r) = fp.probs.row(r) * inv;
    d_logits(r, y) -= inv;
  }
  out.loss = ce * inv + weight_decay * weight_penalty(model);

  Gradients& g = out.gradients;
  g.layer_weights.resize(model.depth());
  const Matrix& last = fp.activations.back();
  g.head_weight = last.transpose() * d_logits + weight_decay * model.head_weight;
  g.head_bias = d_logits.colwise().sum().transpose();

  Matrix d_act = d_logits * model.head_weight.transpose();
  for (std::size_t l = model.depth(); l-- > 0;) {
    // d pre-activation through ReLU (derivative 0 at the kink)
    Matrix d_pre = (fp.pre_activations[l].array() > 0.0).select(d_act, 0.0);
    Matrix d_u = P.matrix.transpose() * d_pre;  // U = H_l W_l, Z = P U
    g.layer_weights[l] =
        fp.activations[l].transpose() * d_u + weight_decay * model.layer_weights[l];
    if (l > 0) d_act = d_u * model.layer_weights[l].transpose();
  }
  return out;
}

double masked_cross_entropy(const ForwardPass& fp, std::span<const int> labels,
                            std::span<const eval::SpeakerGroup> groups) {
  double ce = 0.0;
  std::size_t count = 0;
  for (const auto& g : groups) {
    for (auto node : g.rows) {
      const auto r = static_cast<Eigen::Index>(node);
      const double mx = fp.logits.row(r).maxCoeff();
      const double lse = mx + std::log((fp.logits.row(r).array() - mx).exp().sum());
      ce -= fp.logits(r, labels[node]) - lse;
      ++count;
    }
  }
  return count == 0 ? 0.0 : ce / static_cast<double>(count);
}

class Adam {
 public:
  Adam(const GcnModel& like, const TrainConfig& cfg)
      : m_(GcnModel::zeros_like(like)), v_(GcnModel::zeros_like(like)), cfg_(cfg) {}

  void step(GcnModel& params, const Gradients& grads) {
    ++t_;
    const double b1 = cfg_.beta1, b2 = cfg_.beta2;
    const double c1 = 1.0 - std::pow(b1, static_cast<double>(t_));
    const double c2 = 1.0 - std::pow(b2, static_cast<double>(t_));
    const double lr = cfg_.learning_rate, eps = cfg_.epsilon;
    for_each_tensor(
        [&](auto& p, const auto& g, auto& m, auto& v) {
          m = b1 * m + (1.0 - b1) * g;
          v = b2 * v + (1.0 - b2) * g.cwiseProduct(g);
          p.array() -= lr * (m.array() / c1) / ((v.array() / c2).sqrt() + eps);
        },
        params, grads, m_, v_);
  }

 private:
  GcnModel m_;
  GcnModel v_;
  TrainConfig cfg_;
  long t_ = 0;
};

}  // namespace

LossResult loss_and_gradients(const GcnModel& model, const PropagationMatrix& P, const Matrix& X,
                              std::span<const int> labels, const NodeMask& train_mask,
                              double weight_decay) {
  const auto fp = forward(model, P, X);
  return loss_from_forward(model, P, fp, labels, train_mask, weight_decay);
}

TrainResult train(GcnModel model, const PropagationMatrix& P, const Matrix& X,
                  const TrainInputs& inputs, const TrainConfig& cfg) {
  cfg.validate();
  const auto n = static_cast<std::size_t>(X.rows());
  for (const auto& g : inputs.val_speakers) {
    for (auto node : g.rows) {
      if (node >= n) throw_usage("shape-mismatch", "validation node index out of range");
      if (inputs.train_mask.size() == n && inputs.train_mask[node]) {
        throw_usage("overlapping-masks", "a node is in both the training and validation sets");
      }
      if (inputs.labels.size() != n || (inputs.labels[node] != 0 && inputs.labels[node] != 1)) {
        throw_usage("invalid-label", "validation node has no usable label");
      }
    }
  }
  const bool has_val = !inputs.val_speakers.empty();

  TrainResult result;
  Adam adam(model, cfg);
  double best_acc = -1.0;
  double best_loss = 0.0;
  std::size_t since_best = 0;

  for (std::size_t epoch = 0; epoch < cfg.max_epochs; ++epoch) {
    const auto fp = forward(model, P, X);
    auto lr = loss_from_forward(model, P, fp, inputs.labels, inputs.train_mask, cfg.weight_decay);
    if (!std::isfinite(lr.loss)) {
      throw_training("training-diverged", "non-finite loss at epoch " + std::to_string(epoch));
    }
    result.single_class_warning = result.single_class_warning || lr.single_class;

    const double val_acc = has_val ? eval::speaker_accuracy(fp.probs, inputs.val_speakers) : 0.0;
    const double val_loss = has_val ? masked_cross_entropy(fp, inputs.labels, inputs.val_speakers) : 0.0;
    result.history.train_loss.push_back(lr.loss);
    result.history.val_accuracy.push_back(val_acc);
    result.history.val_loss.push_back(val_loss);

    if (has_val) {
      if (val_acc > best_acc || (val_acc == best_acc && val_loss < best_loss)) {
        best_acc = val_acc;
        best_loss = val_loss;
        result.model = model;
        result.best_epoch = epoch;
        since_best = 0;
      } else if (++since_best >= cfg.patience) {
        break;
      }
    } else {
      result.model = model;
      result.best_epoch = epoch;
    }

    if (epoch + 1 == cfg.max_epochs) break;
    adam.step(model, lr.gradients);
    if (!model.all_finite()) {
      throw_training("training-diverged", "non-finite parameters after epoch " + std::to_string(epoch));
    }
  }
  return result;
}

namespace {

nlohmann::json config_to_json(const TrainConfig& c) {
  return {{"learning_rate", c.learning_rate}, {"max_epochs", c.max_epochs},
          {"patience", c.patience},           {"hidden_width", c.hidden_width},
          {"seed", c.seed},                   {"weight_decay", c.weight_decay},
          {"beta1", c.beta1},                 {"beta2", c.beta2},
          {"epsilon", c.epsilon}};
}

TrainConfig config_from_json(const nlohmann::json& j) {
  TrainConfig c;
  c.learning_rate = j.at("learning_rate").get<double>();
  c.max_epochs = j.at("max_epochs").get<std::size_t>();
  c.patience = j.at("patience").get<std::size_t>();
  c.hidden_width = j.at("hidden_width").get<std::size_t>();
  c.seed = j.at("seed").get<std::uint64_t>();
  c.weight_decay = j.at("weight_decay").get<double>();
  c.beta1 = j.at("beta1").get<double>();
  c.beta2 = j.at("beta2").get<double>();
  c.epsilon = j.at("epsilon").get<double>();
  return c;
}

}  // namespace

void save_checkpoint(const Checkpoint& ckpt, const std::filesystem::path& path) {
  ckpt.model.check_shapes();
  std::vector<std::size_t> widths;
  for (const auto& W : ckpt.model.layer_weights) widths.push_back(static_cast<std::size_t>(W.cols()));
  const nlohmann::json header = {{"version", 1},
                                 {"input_dim", ckpt.model.input_dim()},
                                 {"layers", ckpt.model.depth()},
                                 {"widths", widths},
                                 {"classes", 2},
                                 {"seed", ckpt.config.seed},
                                 {"config", config_to_json(ckpt.config)},
                                 {"dtype", "f64"},
                                 {"byte_order", "little"}};
  const std::string text = header.dump();

  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw_io("io-error", "cannot write " + path.string());
  const auto len = static_cast<std::uint32_t>(text.size());
  for (int i = 0; i < 4; ++i) out.put(static_cast<char>((len >> (8 * i)) & 0xff));
  out.write(text.data(), static_cast<std::streamsize>(text.size()));
  for_each_tensor(
      [&](const auto& t) {
        for (Eigen::Index r = 0; r < t.rows(); ++r) {
          for (Eigen::Index c = 0; c < t.cols(); ++c) {
            const auto bits = std::bit_cast<std::uint64_t>(t(r, c));
            for (int i = 0; i < 8; ++i) out.put(static_cast<char>((bits >> (8 * i)) & 0xff));
          }
        }
      },
      ckpt.model);
  if (!out) throw_io("io-error", "failed writing " + path.string());
}

Checkpoint load_checkpoint(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw_io("io-error", "cannot open " + path.string());
  std::vector<unsigned char> bytes((std::istreambuf_iterator<char>(in)),
                                   std::istreambuf_iterator<char>());
  if (bytes.size() < 4) throw_data("malformed-header", "checkpoint shorter than 4 bytes");
  const std::uint32_t len = bytes[0] | (bytes[1] << 8) | (bytes[2] << 16) |
                            (static_cast<std::uint32_t>(bytes[3]) << 24);
  if (bytes.size() - 4 < len) throw_data("malformed-header", "header length exceeds file size");

  Checkpoint ckpt;
  std::size_t input_dim = 0;
  std::vector<std::size_t> widths;
  try {
    const auto header = nlohmann::json::parse(bytes.begin() + 4, bytes.begin() + 4 + len);
    input_dim = header.at("input_dim").get<std::size_t>();
    widths = header.at("widths").get<std::vector<std::size_t>>();
    ckpt.config = config_from_json(header.at("config"));
  } catch (const nlohmann::json::exception& e) {
    throw_data("malformed-header", std::string("bad checkpoint header: ") + e.what());
  }

  std::size_t in_dim = input_dim;
  for (auto w : widths) {
    ckpt.model.layer_weights.emplace_back(static_cast<Eigen::Index>(in_dim), static_cast<Eigen::Index>(w));
    in_dim = w;
  }
  ckpt.model.head_weight.resize(static_cast<Eigen::Index>(in_dim), 2);
  ckpt.model.head_bias.resize(2);

  const std::size_t expected = ckpt.model.parameter_count() * 8;
  if (bytes.size() - 4 - len != expected) {
    throw_data("size-mismatch", "checkpoint payload does not match the declared shapes");
  }
  const unsigned char* p = bytes.data() + 4 + len;
  for_each_tensor(
      [&](auto& t) {
        for (Eigen::Index r = 0; r < t.rows(); ++r) {
          for (Eigen::Index c = 0; c < t.cols(); ++c) {
            std::uint64_t bits = 0;
            for (int i = 0; i < 8; ++i) bits |= static_cast<std::uint64_t>(p[i]) << (8 * i);
            t(r, c) = std::bit_cast<double>(bits);
            p += 8;
          }
        }
      },
      ckpt.model);
  return ckpt;
}

}  // namespace graphpd::gcn
