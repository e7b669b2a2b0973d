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

#ifndef HMLRF_METRICS_H_
#define HMLRF_METRICS_H_

#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "hmlrf/core_data.h"

namespace hmlrf {

// Counts of samples per (predicted cluster, true class). Labels may be any
// integers; rows and columns follow ascending label value.
struct ContingencyTable {
  std::vector<std::vector<std::int64_t>> counts;  // [cluster][class]
  std::vector<std::int64_t> cluster_sizes;
  std::vector<std::int64_t> class_sizes;
  std::int64_t total = 0;
};

// Throws on length mismatch or empty input.
ContingencyTable BuildContingency(std::span<const int> predicted,
                                  std::span<const int> truth);

double Purity(std::span<const int> predicted, std::span<const int> truth);

// I(C; G) / sqrt(H(C) H(G)), natural logs. 1 when both partitions are a
// single block, 0 when exactly one is.
double NormalizedMutualInformation(std::span<const int> predicted,
                                   std::span<const int> truth);

// Pair-counting metrics over the n(n-1)/2 sample pairs. Require n >= 2.
double RandIndex(std::span<const int> predicted, std::span<const int> truth);
// Hubert-Arabie adjustment; 1 when the index cannot deviate from its
// expectation (both partitions trivial and equal).
double AdjustedRandIndex(std::span<const int> predicted,
                         std::span<const int> truth);
// Harmonic mean of pair precision and recall; 0 when both are 0.
double PairF1(std::span<const int> predicted, std::span<const int> truth);

struct ClusteringMetrics {
  double purity = 0.0;
  double nmi = 0.0;
  double rand_index = 0.0;
  double adjusted_rand = 0.0;
  double f1 = 0.0;
};

ClusteringMetrics EvaluateClustering(std::span<const int> predicted,
                                     std::span<const int> truth);

// Per sample: the held-out tags to recover and the tags still observed.
struct CompletionTruth {
  std::vector<std::vector<int>> missing;
  std::vector<std::vector<int>> observed;
};

struct CompletionMetrics {
  int top_n = 0;
  double average_precision = 0.0;  // AP@N
  double average_recall = 0.0;     // AR@N
  double coverage = 0.0;           // Coverage@N
  int evaluated_samples = 0;
};

// Averages precision (hits / N), recall (hits / |missing|) and coverage
// (hits > 0) over the samples that have held-out tags; `recovered` holds
// each sample's ranked list, truncated to N here. Throws when no sample has
// held-out tags.
CompletionMetrics EvaluateCompletion(
    const std::vector<std::vector<int>>& recovered,
    const CompletionTruth& truth, int top_n);

struct SparsifiedTags {
  TagMatrix tags;
  std::vector<std::pair<int, int>> removed;  // (sample, tag), row-major order
};

// Clears floor(ratio * #positives) positive entries chosen uniformly without
// replacement. Requires 0 <= ratio < 1.
SparsifiedTags SimulateSparsity(const TagMatrix& tags, double ratio,
                                std::uint64_t seed);

CompletionTruth MakeCompletionTruth(
    const TagMatrix& observed, const std::vector<std::pair<int, int>>& removed);

}  // namespace hmlrf

#endif  // HMLRF_METRICS_H_
