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

#ifndef HMLRF_AFFINITY_GRAPH_H_
#define HMLRF_AFFINITY_GRAPH_H_

#include "hmlrf/core_data.h"
#include "hmlrf/forest.h"

namespace hmlrf {

inline constexpr int kDefaultKappa = 20;

// 1 where two samples share a leaf of `tree`, else 0.
Matrix TreeAffinity(const Tree& tree, int num_samples);

// Fraction of trees in which each pair shares a leaf. Symmetric, unit
// diagonal, entries in [0, 1]. Co-leaf counts are accumulated as integers
// per worker and summed, so the result is independent of `threads`.
Matrix ForestAffinity(const HmlForest& forest, int threads = 1);

// Keeps an off-diagonal entry when either endpoint ranks the other among
// its `kappa` largest affinities (ties by ascending index); zeroes the rest.
// Requires 1 <= kappa < n.
Matrix KnnSparsify(const Matrix& affinity, int kappa);

// D^-1/2 A D^-1/2 with D the row sums of A; zero-degree rows stay zero.
Matrix NormalizeAffinity(const Matrix& affinity);

}  // namespace hmlrf

#endif  // HMLRF_AFFINITY_GRAPH_H_
