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

#include "hmlrf/kmeans.h"

#include <limits>
#include <string>

#include "hmlrf/error.h"
#include "hmlrf/random.h"

namespace hmlrf {
namespace {

double SquaredDistance(std::span<const double> a, std::span<const double> b) {
  double sum = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double diff = a[i] - b[i];
    sum += diff * diff;
  }
  return sum;
}

Matrix SeedPlusPlus(const Matrix& points, int k, Rng& rng) {
  const int n = points.rows();
  Matrix centroids(k, points.cols());
  std::vector<bool> chosen(n, false);
  std::vector<double> nearest(n, std::numeric_limits<double>::infinity());

  int pick = static_cast<int>(rng.UniformIndex(n));
  for (int c = 0; c < k; ++c) {
    if (c > 0) {
      double total = 0.0;
      for (int i = 0; i < n; ++i) total += nearest[i];
      if (total > 0.0) {
        const double target = rng.UniformDouble() * total;
        double running = 0.0;
        pick = -1;
        for (int i = 0; i < n; ++i) {
          if (nearest[i] <= 0.0) continue;
          running += nearest[i];
          pick = i;
          if (running > target) break;
        }
      } else {
        // Remaining points coincide with existing centroids.
        pick = 0;
        while (chosen[pick]) ++pick;
      }
    }
    chosen[pick] = true;
    std::copy(points.row(pick).begin(), points.row(pick).end(),
              centroids.row(c).begin());
    for (int i = 0; i < n; ++i) {
      nearest[i] = std::min(nearest[i],
                            SquaredDistance(points.row(i), centroids.row(c)));
    }
  }
  return centroids;
}

}  // namespace

KMeansResult KMeans(const Matrix& points, int k, std::uint64_t seed,
                    int max_iterations) {
  const int n = points.rows();
  const int dim = points.cols();
  if (k < 1) throw Error("kmeans", "cluster count must be positive");
  if (k > n) {
    throw Error("kmeans", "cluster count " + std::to_string(k) +
                              " exceeds sample count " + std::to_string(n));
  }
  Rng rng(seed);
  KMeansResult result;
  result.centroids = SeedPlusPlus(points, k, rng);
  result.assignment.assign(n, -1);
  std::vector<double> distance(n, 0.0);
  std::vector<int> sizes(k, 0);

  for (int iteration = 0; iteration < max_iterations; ++iteration) {
    bool changed = false;
    for (int i = 0; i < n; ++i) {
      int best = result.assignment[i];
      double best_distance =
          best >= 0 ? SquaredDistance(points.row(i), result.centroids.row(best))
                    : std::numeric_limits<double>::infinity();
      for (int c = 0; c < k; ++c) {
        const double d = SquaredDistance(points.row(i), result.centroids.row(c));
        if (d < best_distance) {
          best_distance = d;
          best = c;
        }
      }
      if (best != result.assignment[i]) changed = true;
      result.assignment[i] = best;
      distance[i] = best_distance;
    }
    result.iterations = iteration + 1;

    std::fill(sizes.begin(), sizes.end(), 0);
    for (int c : result.assignment) ++sizes[c];
    for (int c = 0; c < k; ++c) {
      if (sizes[c] > 0) continue;
      int donor = -1;
      for (int i = 0; i < n; ++i) {
        if (sizes[result.assignment[i]] < 2) continue;
        if (donor < 0 || distance[i] > distance[donor]) donor = i;
      }
      if (donor < 0) break;
      --sizes[result.assignment[donor]];
      result.assignment[donor] = c;
      distance[donor] = 0.0;
      sizes[c] = 1;
      changed = true;
    }

    Matrix sums(k, dim);
    for (int i = 0; i < n; ++i) {
      auto target = sums.row(result.assignment[i]);
      const auto source = points.row(i);
      for (int j = 0; j < dim; ++j) target[j] += source[j];
    }
    for (int c = 0; c < k; ++c) {
      if (sizes[c] == 0) continue;
      for (int j = 0; j < dim; ++j) {
        result.centroids(c, j) = sums(c, j) / sizes[c];
      }
    }
    if (!changed) break;
  }

  result.empty.assign(k, false);
  std::fill(sizes.begin(), sizes.end(), 0);
  result.inertia = 0.0;
  for (int i = 0; i < n; ++i) {
    ++sizes[result.assignment[i]];
    result.inertia += SquaredDistance(points.row(i),
                                      result.centroids.row(result.assignment[i]));
  }
  for (int c = 0; c < k; ++c) result.empty[c] = sizes[c] == 0;
  return result;
}

}  // namespace hmlrf
