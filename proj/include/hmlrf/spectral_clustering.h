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

#ifndef HMLRF_SPECTRAL_CLUSTERING_H_
#define HMLRF_SPECTRAL_CLUSTERING_H_

#include <cstdint>
#include <vector>

#include "hmlrf/core_data.h"
#include "hmlrf/forest.h"

namespace hmlrf {

struct Clustering {
  int num_clusters = 0;
  std::vector<int> assignment;  // sample -> cluster in [0, num_clusters)
};

struct SpectralEmbedding {
  std::vector<double> eigenvalues;  // non-increasing
  Matrix eigenvectors;              // n x p, orthonormal columns
  Matrix rows;                      // eigenvectors with unit-length rows
};

// Largest residual ||S v - lambda v|| accepted from the eigensolver.
inline constexpr double kEigenResidualTolerance = 1e-8;

// Eigenvectors of the p algebraically largest eigenvalues of the symmetric
// matrix `normalized`, then row-normalised. Throws if the solver fails or a
// residual exceeds kEigenResidualTolerance.
SpectralEmbedding TopEigenvectors(const Matrix& normalized, int p);

// K-means on the embedding rows; labels renumbered in order of first
// appearance.
Clustering ClusterEmbedding(const SpectralEmbedding& embedding, int p,
                            std::uint64_t seed);

// Forest affinity -> kappa-NN graph -> normalisation -> embedding -> K-means.
Clustering ClusterPipeline(const HmlForest& forest, int p, int kappa,
                           std::uint64_t seed, int threads = 1);

// Same, starting from a dense forest affinity.
Clustering ClusterAffinity(const Matrix& affinity, int p, int kappa,
                           std::uint64_t seed);

}  // namespace hmlrf

#endif  // HMLRF_SPECTRAL_CLUSTERING_H_
