#include "graph_builder.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <string>

namespace graphpd::graph {

std::string_view to_string(Distance d) {
  switch (d) {
    case Distance::euclidean: return "euclidean";
    case Distance::cosine: return "cosine";
    case Distance::manhattan: return "manhattan";
  }
  return "unknown";
}

Distance parse_distance(std::string_view name) {
  if (name == "euclidean") return Distance::euclidean;
  if (name == "cosine") return Distance::cosine;
  if (name == "manhattan") return Distance::manhattan;
  throw_usage("unknown-distance", "unknown distance '" + std::string(name) + "'");
}

double distance(const Eigen::Ref<const Vector>& a, const Eigen::Ref<const Vector>& b, Distance d) {
  switch (d) {
    case Distance::euclidean: return (a - b).norm();
    case Distance::manhattan: return (a - b).lpNorm<1>();
    case Distance::cosine: {
      const double na = a.norm();
      const double nb = b.norm();
      if (na == 0.0 || nb == 0.0) {
        throw_data("degenerate-vector", "cosine distance undefined for a zero-norm vector");
      }
      return std::max(0.0, 1.0 - a.dot(b) / (na * nb));
    }
  }
  return 0.0;
}

Matrix pairwise_distances(const Matrix& X, Distance d) {
  const auto n = X.rows();
  if (n < 2) throw_usage("too-few-points", "pairwise distances need at least 2 points");
  // Columns of the transpose are contiguous points.
  const Matrix pts = X.transpose();
  Matrix D = Matrix::Zero(n, n);
  for (Eigen::Index j = 0; j < n; ++j) {
    for (Eigen::Index i = j + 1; i < n; ++i) {
      const double v = distance(pts.col(i), pts.col(j), d);
      D(i, j) = v;
      D(j, i) = v;
    }
  }
  return D;
}

double bandwidth(const Matrix& D) {
  const auto n = D.rows();
  if (n < 2 || D.cols() != n) throw_usage("too-few-points", "bandwidth needs a square D, n >= 2");
  double sum = 0.0;
  for (Eigen::Index j = 0; j < n; ++j) {
    for (Eigen::Index i = j + 1; i < n; ++i) sum += D(i, j);
  }
  const double h = 2.0 * sum / (static_cast<double>(n) * static_cast<double>(n - 1));
  if (!(h > 0.0)) throw_data("degenerate-dataset", "all points coincide: bandwidth is zero");
  return h;
}

Matrix kernel(const Matrix& D, double h) {
  if (!(h > 0.0)) throw_usage("invalid-bandwidth", "kernel bandwidth must be positive");
  Matrix K = (-D.array() / h).exp().matrix();
  K.diagonal().setOnes();
  return K;
}

Adjacency::Adjacency(std::size_t n, std::vector<Edge> edges)
    : n_(n), edges_(std::move(edges)), degree_(n, 0) {
  std::sort(edges_.begin(), edges_.end());
  edges_.erase(std::unique(edges_.begin(), edges_.end()), edges_.end());
  for (const auto& e : edges_) {
    ++degree_[e.a];
    ++degree_[e.b];
  }
}

bool Adjacency::contains(std::size_t i, std::size_t j) const {
  if (i == j) return false;
  const Edge e{static_cast<std::uint32_t>(std::min(i, j)), static_cast<std::uint32_t>(std::max(i, j))};
  return std::binary_search(edges_.begin(), edges_.end(), e);
}

Matrix Adjacency::dense() const {
  const auto n = static_cast<Eigen::Index>(n_);
  Matrix A = Matrix::Zero(n, n);
  for (const auto& e : edges_) {
    A(e.a, e.b) = 1.0;
    A(e.b, e.a) = 1.0;
  }
  return A;
}

ColumnRanking::ColumnRanking(const Matrix& K) : n_(static_cast<std::size_t>(K.rows())) {
  if (K.rows() != K.cols()) throw_usage("shape-mismatch", "kernel must be square");
  if (n_ < 2) throw_usage("too-few-points", "graph construction needs at least 2 nodes");
  const auto n = K.rows();

  Matrix C = Matrix::Zero(n, n);
  for (Eigen::Index j = 0; j < n; ++j) {
    const double* cj = K.col(j).data();
    for (Eigen::Index i = j + 1; i < n; ++i) {
      const double* ci = K.col(i).data();
      double s = 0.0;
      for (Eigen::Index r = 0; r < n; ++r) {
        const double diff = ci[r] - cj[r];
        s += diff * diff;
      }
      C(i, j) = C(j, i) = std::sqrt(s);
    }
  }

  order_.resize(n_ * (n_ - 1));
  std::vector<std::uint32_t> cand(n_ - 1);
  for (std::size_t j = 0; j < n_; ++j) {
    std::size_t w = 0;
    for (std::size_t i = 0; i < n_; ++i) {
      if (i != j) cand[w++] = static_cast<std::uint32_t>(i);
    }
    const double* dist = C.col(static_cast<Eigen::Index>(j)).data();
    std::sort(cand.begin(), cand.end(), [dist](std::uint32_t a, std::uint32_t b) {
      return dist[a] < dist[b] || (dist[a] == dist[b] && a < b);
    });
    std::copy(cand.begin(), cand.end(), order_.begin() + static_cast<std::ptrdiff_t>(j * (n_ - 1)));
  }
}

std::vector<std::uint32_t> ColumnRanking::neighbors(std::size_t node) const {
  const auto first = order_.begin() + static_cast<std::ptrdiff_t>(node * (n_ - 1));
  return {first, first + static_cast<std::ptrdiff_t>(n_ - 1)};
}

Adjacency ColumnRanking::graph(std::size_t k) const {
  if (k < 1) throw_usage("invalid-k", "k must be at least 1");
  if (k >= n_) {
    throw_data("k-too-large", "k = " + std::to_string(k) + " but the graph has only " +
                                  std::to_string(n_) + " nodes");
  }
  std::vector<Edge> edges;
  edges.reserve(n_ * k);
  for (std::size_t j = 0; j < n_; ++j) {
    const auto* top = order_.data() + j * (n_ - 1);
    for (std::size_t r = 0; r < k; ++r) {
      const auto i = static_cast<std::uint32_t>(top[r]);
      const auto jj = static_cast<std::uint32_t>(j);
      edges.push_back(Edge{std::min(i, jj), std::max(i, jj)});
    }
  }
  return Adjacency(n_, std::move(edges));
}

Adjacency build_graph(const Matrix& K, std::size_t k) {
  if (K.rows() >= 1 && k >= static_cast<std::size_t>(K.rows())) {
    throw_data("k-too-large", "k = " + std::to_string(k) + " but the graph has only " +
                                  std::to_string(K.rows()) + " nodes");
  }
  return ColumnRanking(K).graph(k);
}

Matrix kernel_from_features(const Matrix& X, Distance d) {
  const Matrix D = pairwise_distances(X, d);
  return kernel(D, bandwidth(D));
}

void write_edge_list(const Adjacency& A, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw_io("io-error", "cannot write " + path.string());
  for (const auto& e : A.edges()) out << e.a << '\t' << e.b << '\n';
  if (!out) throw_io("io-error", "failed writing " + path.string());
}

}  // namespace graphpd::graph
