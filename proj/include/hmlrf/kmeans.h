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

#ifndef HMLRF_KMEANS_H_
#define HMLRF_KMEANS_H_

#include <cstdint>
#include <vector>

#include "hmlrf/core_data.h"

namespace hmlrf {

struct KMeansResult {
  std::vector<int> assignment;  // row -> cluster in [0, k)
  Matrix centroids;             // k x dim
  std::vector<bool> empty;      // clusters left without members
  int iterations = 0;
  double inertia = 0.0;         // sum of squared distances to centroids
};

inline constexpr int kDefaultKMeansIterations = 300;

// Lloyd's algorithm from a k-means++ seeding. Stops when the assignment is
// stable or after `max_iterations` rounds. A cluster that empties out is
// re-seeded with the point farthest from its centroid taken from a cluster
// that can spare it; on ties a point keeps its current cluster. Throws if
// k < 1 or k exceeds the number of rows.
KMeansResult KMeans(const Matrix& points, int k, std::uint64_t seed,
                    int max_iterations = kDefaultKMeansIterations);

}  // namespace hmlrf

#endif  // HMLRF_KMEANS_H_
