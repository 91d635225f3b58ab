#include "graph_builder.hpp"
#include "oracles.hpp"
#include "test_util.hpp"

#include <doctest.h>

#include <cmath>
#include <fstream>
#include <random>
#include <set>

using namespace graphpd;
using namespace graphpd::graph;

namespace {

Matrix rows(std::initializer_list<std::initializer_list<double>> data) {
  Matrix M(static_cast<Eigen::Index>(data.size()), static_cast<Eigen::Index>(data.begin()->size()));
  Eigen::Index i = 0;
  for (const auto& r : data) {
    Eigen::Index j = 0;
    for (double v : r) M(i, j++) = v;
    ++i;
  }
  return M;
}

std::set<std::pair<std::size_t, std::size_t>> edge_set(const Adjacency& A) {
  std::set<std::pair<std::size_t, std::size_t>> out;
  for (const auto& e : A.edges()) out.emplace(e.a, e.b);
  return out;
}

constexpr Distance kAll[] = {Distance::euclidean, Distance::cosine, Distance::manhattan};

}  // namespace

TEST_SUITE("graph_builder") {

TEST_CASE("distance examples") {
  CHECK(pairwise_distances(rows({{0, 0}, {3, 4}}), Distance::euclidean)(0, 1) == doctest::Approx(5.0));
  CHECK(pairwise_distances(rows({{1, 0}, {0, 1}}), Distance::cosine)(0, 1) == doctest::Approx(1.0));
  CHECK(pairwise_distances(rows({{1, 2}, {4, 6}}), Distance::manhattan)(0, 1) == doctest::Approx(7.0));
}

TEST_CASE("distance matrices are symmetric, nonnegative, zero on the diagonal") {
  std::mt19937_64 rng(11);
  const Matrix X = oracle::random_matrix(9, 4, rng);
  for (auto d : kAll) {
    const Matrix D = pairwise_distances(X, d);
    const Matrix ref = oracle::pairwise(X, d);
    CHECK((D - D.transpose()).cwiseAbs().maxCoeff() == 0.0);
    CHECK(D.diagonal().cwiseAbs().maxCoeff() == 0.0);
    CHECK(D.minCoeff() >= 0.0);
    CHECK((D - ref).cwiseAbs().maxCoeff() < 1e-12);
  }
}

TEST_CASE("cosine rejects zero-norm rows") {
  CHECK(testutil::error_code([] { pairwise_distances(rows({{0, 0}, {1, 1}}), Distance::cosine); }) ==
        "degenerate-vector");
}

TEST_CASE("distance names parse") {
  CHECK(parse_distance("manhattan") == Distance::manhattan);
  CHECK(to_string(Distance::cosine) == "cosine");
  CHECK(testutil::error_code([] { parse_distance("chebyshev"); }) == "unknown-distance");
}

TEST_CASE("bandwidth examples") {
  Matrix D = Matrix::Zero(3, 3);
  D(0, 1) = D(1, 0) = 1;
  D(0, 2) = D(2, 0) = 2;
  D(1, 2) = D(2, 1) = 3;
  CHECK(bandwidth(D) == doctest::Approx(2.0));

  Matrix D2 = Matrix::Zero(2, 2);
  D2(0, 1) = D2(1, 0) = 5;
  CHECK(bandwidth(D2) == doctest::Approx(5.0));

  std::mt19937_64 rng(5);
  const Matrix X = oracle::random_matrix(6, 3, rng);
  for (auto d : kAll) {
    const Matrix Dr = oracle::pairwise(X, d);
    CHECK(bandwidth(Dr) == doctest::Approx(oracle::bandwidth(Dr)).epsilon(1e-14));
  }
  CHECK(testutil::error_code([] { bandwidth(Matrix::Zero(4, 4)); }) == "degenerate-dataset");
}

TEST_CASE("kernel examples") {
  Matrix D = Matrix::Zero(2, 2);
  D(0, 1) = D(1, 0) = 2.0;
  const Matrix K = kernel(D, 2.0);
  CHECK(K(0, 0) == 1.0);
  CHECK(K(0, 1) == doctest::Approx(std::exp(-1.0)).epsilon(1e-15));

  std::mt19937_64 rng(8);
  const Matrix X = oracle::random_matrix(5, 3, rng);
  const Matrix Dr = pairwise_distances(X, Distance::euclidean);
  const double h = bandwidth(Dr);
  CHECK((kernel(Dr, h) - oracle::kernel(Dr, h)).cwiseAbs().maxCoeff() < 1e-15);
  const Matrix Kr = kernel(Dr, h);
  CHECK((Kr - Kr.transpose()).cwiseAbs().maxCoeff() == 0.0);
  CHECK(Kr.maxCoeff() <= 1.0);
  CHECK(Kr.minCoeff() > 0.0);
}

TEST_CASE("kernel is invariant to rescaling distances") {
  std::mt19937_64 rng(21);
  std::uniform_real_distribution<double> scale(1e-9, 100.0);
  for (int trial = 0; trial < 20; ++trial) {
    const Matrix D = pairwise_distances(oracle::random_matrix(7, 3, rng), Distance::manhattan);
    const double c = scale(rng);
    const Matrix cD = c * D;
    CHECK((kernel(cD, bandwidth(cD)) - kernel(D, bandwidth(D))).cwiseAbs().maxCoeff() < 1e-12);
  }
}

TEST_CASE("small graph examples") {
  Matrix K3 = Matrix::Constant(3, 3, 0.5);
  K3.diagonal().setOnes();
  const auto tri = build_graph(K3, 2);
  CHECK(tri.edges().size() == 3);
  CHECK(tri.contains(0, 1));
  CHECK(tri.contains(1, 2));
  CHECK(tri.contains(0, 2));

  Matrix K2 = Matrix::Constant(2, 2, 0.3);
  K2.diagonal().setOnes();
  const auto one = build_graph(K2, 1);
  REQUIRE(one.edges().size() == 1);
  CHECK(one.edges()[0] == Edge{0, 1});

  CHECK(testutil::error_code([&] { build_graph(K3, 3); }) == "k-too-large");
  CHECK(testutil::error_code([&] { build_graph(K3, 0); }) == "invalid-k");
}

TEST_CASE("random 8-node kernel matches the exhaustive oracle") {
  std::mt19937_64 rng(99);
  const Matrix K = kernel_from_features(oracle::random_matrix(8, 4, rng), Distance::euclidean);
  CHECK(edge_set(build_graph(K, 3)) == oracle::topk_graph(K, 3));
}

TEST_CASE("ties on column distance go to the lower index") {
  // Every off-diagonal entry equal: all column distances tie, so each node
  // picks the lowest-index others.
  Matrix K = Matrix::Constant(5, 5, 0.2);
  K.diagonal().setOnes();
  const ColumnRanking ranking(K);
  CHECK(ranking.neighbors(3) == std::vector<std::uint32_t>{0, 1, 2, 4});
  const auto A = ranking.graph(1);
  // node 0 -> 1, nodes 1..4 -> 0
  CHECK(edge_set(A) == std::set<std::pair<std::size_t, std::size_t>>{{0, 1}, {0, 2}, {0, 3}, {0, 4}});
}

TEST_CASE("adjacency invariants and monotonicity in k") {
  std::mt19937_64 rng(4);
  const Matrix X = oracle::random_matrix(11, 3, rng);
  for (auto d : kAll) {
    const ColumnRanking ranking(kernel_from_features(X, d));
    std::set<std::pair<std::size_t, std::size_t>> prev;
    for (std::size_t k = 1; k < 11; ++k) {
      const auto A = ranking.graph(k);
      const Matrix M = A.dense();
      CHECK((M - M.transpose()).cwiseAbs().maxCoeff() == 0.0);
      CHECK(M.diagonal().cwiseAbs().maxCoeff() == 0.0);
      for (auto deg : A.degrees()) CHECK(deg >= k);
      const auto cur = edge_set(A);
      CHECK(std::includes(cur.begin(), cur.end(), prev.begin(), prev.end()));
      prev = cur;
    }
    CHECK(prev.size() == 11 * 10 / 2);
  }
}

TEST_CASE("edge list export") {
  Matrix K = Matrix::Constant(3, 3, 0.5);
  K.diagonal().setOnes();
  auto dir = testutil::scratch_dir("edges");
  write_edge_list(build_graph(K, 2), dir / "e.tsv");
  std::ifstream in(dir / "e.tsv");
  std::string text((std::istreambuf_iterator<char>(in)), {});
  CHECK(text == "0\t1\n0\t2\n1\t2\n");
}

}
