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

#ifndef HMLRF_SYNTHETIC_H_
#define HMLRF_SYNTHETIC_H_

#include <cstdint>

#include "hmlrf/core_data.h"

namespace hmlrf {

// Planted-structure dataset: Gaussian blobs with a two-layer tag hierarchy.
// Cluster c is centred at (separation * sigma / sqrt(2)) * e_c, so every
// pair of centres is `separation` standard deviations apart. The abstract
// layer holds one tag per cluster, set on all of its members. The specific
// layer holds `specific_per_cluster` tags per cluster, each set on a member
// with probability `specific_probability`.
struct SyntheticConfig {
  int clusters = 4;
  int samples = 400;
  int dims = 10;
  double sigma = 1.0;
  double separation = 3.0;
  int specific_per_cluster = 3;
  double specific_probability = 0.6;
  // When true, specific tag t of a cluster fires iff the member's noise on
  // feature (clusters + t) exceeds the (1 - probability) normal quantile, so
  // specific tags describe visual content. When false, they are independent
  // coin flips.
  bool visually_grounded_specific_tags = true;
};

// Returns features, full tags, hierarchy and ground-truth clusters. Cluster
// sizes differ by at most one; membership is shuffled.
Dataset GenerateSynthetic(const SyntheticConfig& config, std::uint64_t seed);

// Writes features.csv, tags.csv, hierarchy.json and clusters.csv.
void SaveDataset(const Dataset& dataset, const std::filesystem::path& dir);

}  // namespace hmlrf

#endif  // HMLRF_SYNTHETIC_H_
