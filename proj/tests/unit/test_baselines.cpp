#include "baselines.hpp"
#include "oracles.hpp"
#include "test_util.hpp"

#include <doctest.h>

#include <random>

using namespace graphpd;
using namespace graphpd::baselines;
using graph::Distance;

namespace {

constexpr Distance kAll[] = {Distance::euclidean, Distance::cosine, Distance::manhattan};

struct Split {
  Matrix X_train, X_val;
  std::vector<int> y_train, y_val;
  std::vector<eval::SpeakerGroup> val_speakers;
};

Split separable(std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> g(0.0, 1.0);
  auto draw = [&](std::size_t n, Matrix& X, std::vector<int>& y) {
    X.resize(static_cast<Eigen::Index>(n), 3);
    for (std::size_t i = 0; i < n; ++i) {
      y.push_back(static_cast<int>(i % 2));
      for (Eigen::Index c = 0; c < 3; ++c) X(i, c) = g(rng) + (c == 1 ? (i % 2 ? 5.0 : -5.0) : 0.0);
    }
  };
  Split s;
  draw(60, s.X_train, s.y_train);
  draw(8, s.X_val, s.y_val);
  s.val_speakers = {{{0, 2, 4, 6}, 0}, {{1, 3, 5, 7}, 1}};
  return s;
}

}  // namespace

TEST_SUITE("baselines") {

TEST_CASE("FC fits separable clusters") {
  const auto s = separable(1);
  gcn::TrainConfig cfg;
  cfg.learning_rate = 1e-2;
  cfg.max_epochs = 200;
  const auto res = fc_train(s.X_train, s.y_train, s.X_val, s.y_val, s.val_speakers, cfg);
  const Matrix p = fc_predict(res.model, s.X_train);
  int ok = 0;
  for (Eigen::Index i = 0; i < p.rows(); ++i) ok += (p(i, 1) > p(i, 0)) == (s.y_train[i] == 1);
  CHECK(ok >= 60 * 99 / 100);
  for (Eigen::Index i = 0; i < p.rows(); ++i) CHECK(std::abs(p.row(i).sum() - 1.0) <= 1e-12);
}

TEST_CASE("FC with zero learning rate keeps its initialization and is deterministic") {
  const auto s = separable(2);
  gcn::TrainConfig cfg;
  cfg.learning_rate = 0.0;
  cfg.max_epochs = 15;
  cfg.seed = 4;
  const auto res = fc_train(s.X_train, s.y_train, s.X_val, s.y_val, s.val_speakers, cfg);
  const auto init = gcn::GcnModel::initialize(3, cfg.hidden_width, 0, 4);
  CHECK(res.model.weight == init.head_weight);
  CHECK(res.model.bias == init.head_bias);

  cfg.learning_rate = 1e-2;
  const auto a = fc_train(s.X_train, s.y_train, s.X_val, s.y_val, s.val_speakers, cfg);
  const auto b = fc_train(s.X_train, s.y_train, s.X_val, s.y_val, s.val_speakers, cfg);
  CHECK(a.model.weight == b.model.weight);
  CHECK(a.model.bias == b.model.bias);
}

TEST_CASE("FC equals a depth-0 GCN with identity propagation") {
  const auto s = separable(3);
  gcn::TrainConfig cfg;
  cfg.learning_rate = 1e-2;
  cfg.max_epochs = 40;
  cfg.seed = 12;
  const auto fc = fc_train(s.X_train, s.y_train, s.X_val, s.y_val, s.val_speakers, cfg);

  Matrix X(68, 3);
  X << s.X_train, s.X_val;
  std::vector<int> labels = s.y_train;
  labels.insert(labels.end(), s.y_val.begin(), s.y_val.end());
  gcn::TrainInputs in;
  in.labels = labels;
  in.train_mask.assign(68, false);
  for (std::size_t i = 0; i < 60; ++i) in.train_mask[i] = true;
  in.val_speakers = {{{60, 62, 64, 66}, 0}, {{61, 63, 65, 67}, 1}};
  const auto g = gcn::train(gcn::GcnModel::initialize(3, cfg.hidden_width, 0, 12), gcn::identity_propagation(68),
                            X, in, cfg);
  const Matrix diff = fc_logits(fc.model, X) - gcn::forward(g.model, gcn::identity_propagation(68), X).logits;
  CHECK(diff.cwiseAbs().maxCoeff() <= 1e-10);
}

TEST_CASE("KNN examples") {
  Matrix train(3, 2);
  train << 0, 0, 1, 0, 5, 5;
  const std::vector<int> y{0, 0, 1};
  Matrix q(1, 2);
  q << 5, 5;
  const Matrix p1 = knn_predict(train, y, q, {1, Distance::euclidean});
  CHECK(p1(0, 1) == 1.0);
  const Matrix p3 = knn_predict(train, y, q, {3, Distance::euclidean});
  CHECK(p3(0, 0) == doctest::Approx(2.0 / 3.0));
  CHECK(p3(0, 1) == doctest::Approx(1.0 / 3.0));
  CHECK(testutil::error_code([&] { knn_predict(train, y, q, {4, Distance::euclidean}); }) == "k-too-large");
}

TEST_CASE("KNN distance ties go to the lower training row") {
  Matrix train(4, 1);
  train << 1, -1, 1, -1;  // rows 0/1 and 2/3 equidistant from 0
  Matrix q = Matrix::Zero(1, 1);
  const auto r = knn_rankings(train, q, Distance::euclidean, 4);
  CHECK(r[0] == std::vector<std::uint32_t>{0, 1, 2, 3});
  CHECK(knn_predict(train, std::vector<int>{1, 0, 0, 0}, q, {1, Distance::manhattan})(0, 1) == 1.0);
  CHECK(knn_predict(train, std::vector<int>{0, 0, 0, 1}, q, {3, Distance::manhattan})(0, 1) == 0.0);
}

TEST_CASE("KNN matches the brute-force oracle on 20 random points") {
  std::mt19937_64 rng(40);
  const Matrix train = oracle::random_matrix(20, 4, rng);
  const Matrix query = oracle::random_matrix(10, 4, rng);
  std::vector<int> y(20);
  for (auto& v : y) v = static_cast<int>(rng() % 2);
  for (auto d : kAll) {
    CHECK(knn_predict(train, y, query, {5, d}) == oracle::knn(train, y, query, 5, d));
  }
}

TEST_CASE("KNN is invariant to training-row order without ties") {
  std::mt19937_64 rng(41);
  const Matrix train = oracle::random_matrix(15, 3, rng);
  const Matrix query = oracle::random_matrix(6, 3, rng);
  std::vector<int> y(15);
  for (auto& v : y) v = static_cast<int>(rng() % 2);
  Matrix rev = train.colwise().reverse();
  std::vector<int> yrev(y.rbegin(), y.rend());
  for (auto d : kAll) {
    const Matrix a = knn_predict(train, y, query, {3, d});
    const Matrix b = knn_predict(rev, yrev, query, {3, d});
    CHECK((a - b).cwiseAbs().maxCoeff() < 1e-15);
  }
}

}
