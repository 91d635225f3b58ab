#pragma once

// Brute-force reference implementations used only by tests. They share no
// code path with the library beyond the plain data types.

#include "gcn.hpp"
#include "graph_builder.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <set>
#include <utility>
#include <vector>

namespace oracle {

using graphpd::Matrix;
using graphpd::graph::Distance;

inline double point_distance(const Matrix& A, Eigen::Index i, const Matrix& B, Eigen::Index j,
                             Distance d) {
  const auto m = A.cols();
  switch (d) {
    case Distance::euclidean: {
      double s = 0.0;
      for (Eigen::Index c = 0; c < m; ++c) s += (A(i, c) - B(j, c)) * (A(i, c) - B(j, c));
      return std::sqrt(s);
    }
    case Distance::manhattan: {
      double s = 0.0;
      for (Eigen::Index c = 0; c < m; ++c) s += std::abs(A(i, c) - B(j, c));
      return s;
    }
    case Distance::cosine: {
      double dot = 0.0, na = 0.0, nb = 0.0;
      for (Eigen::Index c = 0; c < m; ++c) {
        dot += A(i, c) * B(j, c);
        na += A(i, c) * A(i, c);
        nb += B(j, c) * B(j, c);
      }
      return std::max(0.0, 1.0 - dot / (std::sqrt(na) * std::sqrt(nb)));
    }
  }
  return 0.0;
}

inline Matrix pairwise(const Matrix& X, Distance d) {
  Matrix D(X.rows(), X.rows());
  for (Eigen::Index i = 0; i < X.rows(); ++i) {
    for (Eigen::Index j = 0; j < X.rows(); ++j) D(i, j) = i == j ? 0.0 : point_distance(X, i, X, j, d);
  }
  return D;
}

// Mean over an explicit list of all unordered pairs.
inline double bandwidth(const Matrix& D) {
  std::vector<double> pairs;
  for (Eigen::Index i = 0; i < D.rows(); ++i) {
    for (Eigen::Index j = 0; j < i; ++j) pairs.push_back(D(i, j));
  }
  double s = 0.0;
  for (double v : pairs) s += v;
  return s / static_cast<double>(pairs.size());
}

inline Matrix kernel(const Matrix& D, double h) {
  Matrix K(D.rows(), D.cols());
  for (Eigen::Index i = 0; i < D.rows(); ++i) {
    for (Eigen::Index j = 0; j < D.cols(); ++j) K(i, j) = std::exp(-D(i, j) / h);
  }
  return K;
}

// For each node, sort every other node by (column distance, index) and take
// the first k; connect by the OR rule.
inline std::set<std::pair<std::size_t, std::size_t>> topk_graph(const Matrix& K, std::size_t k) {
  const auto n = static_cast<std::size_t>(K.rows());
  std::set<std::pair<std::size_t, std::size_t>> edges;
  for (std::size_t j = 0; j < n; ++j) {
    std::vector<std::pair<double, std::size_t>> cand;
    for (std::size_t i = 0; i < n; ++i) {
      if (i == j) continue;
      double s = 0.0;
      for (std::size_t r = 0; r < n; ++r) {
        const double diff = K(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(i)) -
                            K(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(j));
        s += diff * diff;
      }
      cand.emplace_back(std::sqrt(s), i);
    }
    std::sort(cand.begin(), cand.end());
    for (std::size_t r = 0; r < k; ++r) {
      const auto i = cand[r].second;
      edges.emplace(std::min(i, j), std::max(i, j));
    }
  }
  return edges;
}

inline Matrix knn(const Matrix& train, const std::vector<int>& labels, const Matrix& query,
                  std::size_t k, Distance d) {
  Matrix probs = Matrix::Zero(query.rows(), 2);
  for (Eigen::Index q = 0; q < query.rows(); ++q) {
    std::vector<std::pair<double, std::size_t>> all;
    for (Eigen::Index t = 0; t < train.rows(); ++t) {
      all.emplace_back(point_distance(query, q, train, t, d), static_cast<std::size_t>(t));
    }
    std::sort(all.begin(), all.end());
    std::size_t votes[2] = {0, 0};
    for (std::size_t r = 0; r < k; ++r) ++votes[labels[all[r].second]];
    probs(q, 0) = static_cast<double>(votes[0]) / static_cast<double>(k);
    probs(q, 1) = static_cast<double>(votes[1]) / static_cast<double>(k);
  }
  return probs;
}

inline Matrix propagation(const Matrix& A) {
  const auto n = A.rows();
  Matrix P(n, n);
  std::vector<double> deg(static_cast<std::size_t>(n), 1.0);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) deg[i] += A(i, j);
  }
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) {
      const double a = A(i, j) + (i == j ? 1.0 : 0.0);
      P(i, j) = a / std::sqrt(deg[i] * deg[j]);
    }
  }
  return P;
}

inline Matrix matmul(const Matrix& A, const Matrix& B) {
  Matrix C = Matrix::Zero(A.rows(), B.cols());
  for (Eigen::Index i = 0; i < A.rows(); ++i) {
    for (Eigen::Index j = 0; j < B.cols(); ++j) {
      double s = 0.0;
      for (Eigen::Index r = 0; r < A.cols(); ++r) s += A(i, r) * B(r, j);
      C(i, j) = s;
    }
  }
  return C;
}

// Straight-line forward pass with a dense propagation matrix.
inline Matrix logits(const graphpd::gcn::GcnModel& model, const Matrix& P, const Matrix& X) {
  Matrix H = X;
  for (const auto& W : model.layer_weights) {
    H = matmul(P, matmul(H, W));
    for (Eigen::Index i = 0; i < H.rows(); ++i) {
      for (Eigen::Index j = 0; j < H.cols(); ++j) H(i, j) = H(i, j) > 0.0 ? H(i, j) : 0.0;
    }
  }
  Matrix out = matmul(H, model.head_weight);
  for (Eigen::Index i = 0; i < out.rows(); ++i) {
    out(i, 0) += model.head_bias[0];
    out(i, 1) += model.head_bias[1];
  }
  return out;
}

inline double loss(const graphpd::gcn::GcnModel& model, const Matrix& P, const Matrix& X,
                   const std::vector<int>& labels, const std::vector<bool>& mask,
                   double weight_decay) {
  const Matrix z = logits(model, P, X);
  double ce = 0.0;
  int count = 0;
  for (Eigen::Index i = 0; i < z.rows(); ++i) {
    if (!mask[i]) continue;
    const double lse = std::log(std::exp(z(i, 0)) + std::exp(z(i, 1)));
    ce += lse - z(i, labels[i]);
    ++count;
  }
  double penalty = 0.0;
  for (const auto& W : model.layer_weights) penalty += W.array().square().sum();
  penalty += model.head_weight.array().square().sum();
  return ce / count + 0.5 * weight_decay * penalty;
}

// Central differences of `loss` with respect to every parameter.
inline graphpd::gcn::Gradients finite_differences(const graphpd::gcn::GcnModel& model,
                                                  const Matrix& P, const Matrix& X,
                                                  const std::vector<int>& labels,
                                                  const std::vector<bool>& mask,
                                                  double weight_decay, double eps) {
  auto probe = model;
  auto grads = graphpd::gcn::GcnModel::zeros_like(model);
  graphpd::gcn::for_each_tensor(
      [&](auto& p, auto& g) {
        for (Eigen::Index i = 0; i < p.size(); ++i) {
          const double orig = p.data()[i];
          p.data()[i] = orig + eps;
          const double up = loss(probe, P, X, labels, mask, weight_decay);
          p.data()[i] = orig - eps;
          const double down = loss(probe, P, X, labels, mask, weight_decay);
          p.data()[i] = orig;
          g.data()[i] = (up - down) / (2.0 * eps);
        }
      },
      probe, grads);
  return grads;
}

inline Matrix random_matrix(Eigen::Index rows, Eigen::Index cols, std::mt19937_64& rng,
                            double lo = -1.0, double hi = 1.0) {
  std::uniform_real_distribution<double> u(lo, hi);
  Matrix M(rows, cols);
  for (Eigen::Index i = 0; i < rows; ++i) {
    for (Eigen::Index j = 0; j < cols; ++j) M(i, j) = u(rng);
  }
  return M;
}

// Symmetric 0/1 matrix with zero diagonal.
inline Matrix random_adjacency(Eigen::Index n, double p, std::mt19937_64& rng) {
  std::bernoulli_distribution coin(p);
  Matrix A = Matrix::Zero(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = i + 1; j < n; ++j) {
      if (coin(rng)) A(i, j) = A(j, i) = 1.0;
    }
  }
  return A;
}

inline graphpd::graph::Adjacency to_adjacency(const Matrix& A) {
  std::vector<graphpd::graph::Edge> edges;
  for (Eigen::Index i = 0; i < A.rows(); ++i) {
    for (Eigen::Index j = i + 1; j < A.cols(); ++j) {
      if (A(i, j) != 0.0) edges.push_back({static_cast<std::uint32_t>(i), static_cast<std::uint32_t>(j)});
    }
  }
  return graphpd::graph::Adjacency(static_cast<std::size_t>(A.rows()), std::move(edges));
}

// max over coordinates of |a - b| / max(|a|, |b|, floor)
inline double max_relative_error(const graphpd::gcn::Gradients& a, const graphpd::gcn::Gradients& b,
                                 double floor = 1e-6) {
  double worst = 0.0;
  graphpd::gcn::for_each_tensor(
      [&](const auto& x, const auto& y) {
        for (Eigen::Index i = 0; i < x.size(); ++i) {
          const double xa = x.data()[i], yb = y.data()[i];
          const double denom = std::max({std::abs(xa), std::abs(yb), floor});
          worst = std::max(worst, std::abs(xa - yb) / denom);
        }
      },
      a, b);
  return worst;
}

}  // namespace oracle
