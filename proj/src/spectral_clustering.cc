/*
 * Copyright 2026 The HML-RF Authors.
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include "hmlrf/spectral_clustering.h"

#include <Eigen/Dense>
#include <cmath>
#include <string>

#include "hmlrf/affinity_graph.h"
#include "hmlrf/error.h"
#include "hmlrf/kmeans.h"

namespace hmlrf {
namespace {

constexpr char kModule[] = "spectral_clustering";

using RowMajor =
    Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

}  // namespace

SpectralEmbedding TopEigenvectors(const Matrix& normalized, int p) {
  const int n = normalized.rows();
  if (normalized.cols() != n) throw Error(kModule, "matrix must be square");
  if (p < 1 || p > n) {
    throw Error(kModule, "cluster count p=" + std::to_string(p) +
                             " must lie in [1, " + std::to_string(n) + "]");
  }
  const Eigen::Map<const RowMajor> s(normalized.values().data(), n, n);
  const Eigen::MatrixXd dense = s;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(dense);
  if (solver.info() != Eigen::Success) {
    throw Error(kModule, "symmetric eigensolver did not converge");
  }

  SpectralEmbedding embedding;
  embedding.eigenvalues.resize(p);
  embedding.eigenvectors = Matrix(n, p);
  for (int c = 0; c < p; ++c) {
    // Eigen sorts ascending.
    const int source = n - 1 - c;
    const double lambda = solver.eigenvalues()(source);
    const Eigen::VectorXd v = solver.eigenvectors().col(source);
    const double residual = (dense * v - lambda * v).norm();
    if (!(residual <= kEigenResidualTolerance)) {
      throw Error(kModule, "eigenpair residual " + std::to_string(residual) +
                               " exceeds tolerance");
    }
    embedding.eigenvalues[c] = lambda;
    for (int i = 0; i < n; ++i) embedding.eigenvectors(i, c) = v(i);
  }

  embedding.rows = embedding.eigenvectors;
  for (int i = 0; i < n; ++i) {
    auto row = embedding.rows.row(i);
    double norm = 0.0;
    for (double v : row) norm += v * v;
    norm = std::sqrt(norm);
    if (norm > 0.0) {
      for (double& v : row) v /= norm;
    }
  }
  return embedding;
}

Clustering ClusterEmbedding(const SpectralEmbedding& embedding, int p,
                            std::uint64_t seed) {
  if (p < 1) throw Error(kModule, "cluster count must be positive");
  const KMeansResult result = KMeans(embedding.rows, p, seed);
  std::vector<int> relabel(p, -1);
  Clustering clustering;
  clustering.assignment.reserve(result.assignment.size());
  for (int c : result.assignment) {
    if (relabel[c] < 0) relabel[c] = clustering.num_clusters++;
    clustering.assignment.push_back(relabel[c]);
  }
  return clustering;
}

Clustering ClusterAffinity(const Matrix& affinity, int p, int kappa,
                           std::uint64_t seed) {
  const Matrix sparse = KnnSparsify(affinity, kappa);
  const Matrix normalized = NormalizeAffinity(sparse);
  return ClusterEmbedding(TopEigenvectors(normalized, p), p, seed);
}

Clustering ClusterPipeline(const HmlForest& forest, int p, int kappa,
                           std::uint64_t seed, int threads) {
  return ClusterAffinity(ForestAffinity(forest, threads), p, kappa, seed);
}

}  // namespace hmlrf
