#pragma once

#include "common.hpp"

#include <compare>
#include <cstdint>
#include <filesystem>
#include <string_view>
#include <vector>

namespace graphpd::graph {

enum class Distance { euclidean, cosine, manhattan };

std::string_view to_string(Distance d);
Distance parse_distance(std::string_view name);  // throws usage error "unknown-distance"

// d(a, b) for one pair. Cosine on a zero-norm vector throws "degenerate-vector".
double distance(const Eigen::Ref<const Vector>& a, const Eigen::Ref<const Vector>& b, Distance d);

// n x n, symmetric, zero diagonal, nonnegative. Rows of X are points.
Matrix pairwise_distances(const Matrix& X, Distance d);

// Mean distance over the n(n-1)/2 distinct pairs.
double bandwidth(const Matrix& D);

// K_ij = exp(-D_ij / h).
Matrix kernel(const Matrix& D, double h);

struct Edge {
  std::uint32_t a;  // a < b
  std::uint32_t b;
  auto operator<=>(const Edge&) const = default;
};

// Undirected simple graph stored as a sorted edge list with degrees.
class Adjacency {
 public:
  Adjacency() = default;
  Adjacency(std::size_t n, std::vector<Edge> edges);

  std::size_t node_count() const { return n_; }
  const std::vector<Edge>& edges() const { return edges_; }
  const std::vector<std::size_t>& degrees() const { return degree_; }
  bool contains(std::size_t i, std::size_t j) const;
  Matrix dense() const;

 private:
  std::size_t n_ = 0;
  std::vector<Edge> edges_;
  std::vector<std::size_t> degree_;
};

// Per-node ordering of all other nodes by Euclidean distance between kernel
// columns, ties broken by ascending index. Building it is O(n^3); graphs for
// any k are then read off in O(nk).
class ColumnRanking {
 public:
  explicit ColumnRanking(const Matrix& K);

  std::size_t node_count() const { return n_; }
  // Other nodes sorted from most to least similar column.
  std::vector<std::uint32_t> neighbors(std::size_t node) const;
  Adjacency graph(std::size_t k) const;

 private:
  std::size_t n_ = 0;
  std::vector<std::uint32_t> order_;  // n rows of n-1 entries
};

// Edge (i, j) iff i is in the top-k columns of j or j is in the top-k of i.
Adjacency build_graph(const Matrix& K, std::size_t k);

// Distances -> bandwidth -> kernel in one call.
Matrix kernel_from_features(const Matrix& X, Distance d);

// "i<TAB>j" per line, i < j, sorted.
void write_edge_list(const Adjacency& A, const std::filesystem::path& path);

}  // namespace graphpd::graph
