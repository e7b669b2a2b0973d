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

#include "hmlrf/metrics.h"

#include <algorithm>
#include <cmath>
#include <map>
#include <string>

#include "hmlrf/error.h"
#include "hmlrf/random.h"

namespace hmlrf {
namespace {

constexpr char kModule[] = "metrics";

double Pairs(std::int64_t count) {
  return static_cast<double>(count) * static_cast<double>(count - 1) / 2.0;
}

struct PairCounts {
  double same_both = 0.0;       // TP
  double same_predicted = 0.0;  // TP + FP
  double same_truth = 0.0;      // TP + FN
  double total = 0.0;
};

PairCounts CountPairs(std::span<const int> predicted,
                      std::span<const int> truth) {
  const ContingencyTable table = BuildContingency(predicted, truth);
  if (table.total < 2) throw Error(kModule, "pair metrics need n >= 2");
  PairCounts pairs;
  for (const auto& row : table.counts) {
    for (std::int64_t count : row) pairs.same_both += Pairs(count);
  }
  for (std::int64_t size : table.cluster_sizes) pairs.same_predicted += Pairs(size);
  for (std::int64_t size : table.class_sizes) pairs.same_truth += Pairs(size);
  pairs.total = Pairs(table.total);
  return pairs;
}

double Entropy(const std::vector<std::int64_t>& sizes, double total) {
  double h = 0.0;
  for (std::int64_t size : sizes) {
    if (size == 0) continue;
    const double p = size / total;
    h -= p * std::log(p);
  }
  return h;
}

}  // namespace

ContingencyTable BuildContingency(std::span<const int> predicted,
                                  std::span<const int> truth) {
  if (predicted.size() != truth.size()) {
    throw Error(kModule, "length mismatch: " + std::to_string(predicted.size()) +
                             " predictions vs " +
                             std::to_string(truth.size()) + " labels");
  }
  if (predicted.empty()) throw Error(kModule, "empty partition");
  std::map<int, int> cluster_index;
  std::map<int, int> class_index;
  for (int c : predicted) cluster_index.emplace(c, 0);
  for (int g : truth) class_index.emplace(g, 0);
  int next = 0;
  for (auto& [label, index] : cluster_index) index = next++;
  next = 0;
  for (auto& [label, index] : class_index) index = next++;

  ContingencyTable table;
  table.counts.assign(cluster_index.size(),
                      std::vector<std::int64_t>(class_index.size(), 0));
  table.cluster_sizes.assign(cluster_index.size(), 0);
  table.class_sizes.assign(class_index.size(), 0);
  for (std::size_t i = 0; i < predicted.size(); ++i) {
    const int c = cluster_index[predicted[i]];
    const int g = class_index[truth[i]];
    ++table.counts[c][g];
    ++table.cluster_sizes[c];
    ++table.class_sizes[g];
  }
  table.total = static_cast<std::int64_t>(predicted.size());
  return table;
}

double Purity(std::span<const int> predicted, std::span<const int> truth) {
  const ContingencyTable table = BuildContingency(predicted, truth);
  std::int64_t dominant = 0;
  for (const auto& row : table.counts) {
    dominant += *std::max_element(row.begin(), row.end());
  }
  return static_cast<double>(dominant) / table.total;
}

double NormalizedMutualInformation(std::span<const int> predicted,
                                   std::span<const int> truth) {
  const ContingencyTable table = BuildContingency(predicted, truth);
  const double n = static_cast<double>(table.total);
  const double h_pred = Entropy(table.cluster_sizes, n);
  const double h_truth = Entropy(table.class_sizes, n);
  const bool pred_trivial = table.cluster_sizes.size() == 1;
  const bool truth_trivial = table.class_sizes.size() == 1;
  if (pred_trivial && truth_trivial) return 1.0;
  if (pred_trivial || truth_trivial) return 0.0;
  // Identical partitions up to relabelling: every cell is empty or a whole
  // cluster and a whole class. The ratio is then exactly 1, which the
  // floating-point sums below would only approximate.
  bool matching = table.cluster_sizes.size() == table.class_sizes.size();
  for (std::size_t c = 0; matching && c < table.counts.size(); ++c) {
    for (std::size_t g = 0; g < table.counts[c].size(); ++g) {
      const std::int64_t count = table.counts[c][g];
      if (count != 0 && count != table.cluster_sizes[c]) matching = false;
    }
  }
  if (matching) return 1.0;
  double mutual = 0.0;
  for (std::size_t c = 0; c < table.counts.size(); ++c) {
    for (std::size_t g = 0; g < table.counts[c].size(); ++g) {
      const std::int64_t count = table.counts[c][g];
      if (count == 0) continue;
      mutual += count / n *
                std::log(count * n /
                         (static_cast<double>(table.cluster_sizes[c]) *
                          table.class_sizes[g]));
    }
  }
  return std::clamp(mutual / std::sqrt(h_pred * h_truth), 0.0, 1.0);
}

double RandIndex(std::span<const int> predicted, std::span<const int> truth) {
  const PairCounts pairs = CountPairs(predicted, truth);
  const double agree_different =
      pairs.total - pairs.same_predicted - pairs.same_truth + pairs.same_both;
  return (pairs.same_both + agree_different) / pairs.total;
}

double AdjustedRandIndex(std::span<const int> predicted,
                         std::span<const int> truth) {
  const PairCounts pairs = CountPairs(predicted, truth);
  const double expected = pairs.same_predicted * pairs.same_truth / pairs.total;
  const double maximum = (pairs.same_predicted + pairs.same_truth) / 2.0;
  if (maximum == expected) return 1.0;
  return (pairs.same_both - expected) / (maximum - expected);
}

double PairF1(std::span<const int> predicted, std::span<const int> truth) {
  const PairCounts pairs = CountPairs(predicted, truth);
  const double precision =
      pairs.same_predicted > 0 ? pairs.same_both / pairs.same_predicted : 0.0;
  const double recall =
      pairs.same_truth > 0 ? pairs.same_both / pairs.same_truth : 0.0;
  if (precision + recall == 0.0) return 0.0;
  return 2.0 * precision * recall / (precision + recall);
}

ClusteringMetrics EvaluateClustering(std::span<const int> predicted,
                                     std::span<const int> truth) {
  ClusteringMetrics metrics;
  metrics.purity = Purity(predicted, truth);
  metrics.nmi = NormalizedMutualInformation(predicted, truth);
  metrics.rand_index = RandIndex(predicted, truth);
  metrics.adjusted_rand = AdjustedRandIndex(predicted, truth);
  metrics.f1 = PairF1(predicted, truth);
  return metrics;
}

CompletionMetrics EvaluateCompletion(
    const std::vector<std::vector<int>>& recovered,
    const CompletionTruth& truth, int top_n) {
  if (top_n < 1) throw Error(kModule, "N must be at least 1");
  if (recovered.size() != truth.missing.size()) {
    throw Error(kModule, "recovered lists and truth disagree on sample count");
  }
  CompletionMetrics metrics;
  metrics.top_n = top_n;
  double precision = 0.0;
  double recall = 0.0;
  double covered = 0.0;
  for (std::size_t s = 0; s < recovered.size(); ++s) {
    const std::vector<int>& missing = truth.missing[s];
    if (missing.empty()) continue;
    const std::size_t limit =
        std::min<std::size_t>(recovered[s].size(), static_cast<std::size_t>(top_n));
    int hits = 0;
    for (std::size_t r = 0; r < limit; ++r) {
      if (std::find(missing.begin(), missing.end(), recovered[s][r]) !=
          missing.end()) {
        ++hits;
      }
    }
    precision += static_cast<double>(hits) / top_n;
    recall += static_cast<double>(hits) / missing.size();
    covered += hits > 0 ? 1.0 : 0.0;
    ++metrics.evaluated_samples;
  }
  if (metrics.evaluated_samples == 0) {
    throw Error(kModule, "no sample has held-out tags to evaluate");
  }
  metrics.average_precision = precision / metrics.evaluated_samples;
  metrics.average_recall = recall / metrics.evaluated_samples;
  metrics.coverage = covered / metrics.evaluated_samples;
  return metrics;
}

SparsifiedTags SimulateSparsity(const TagMatrix& tags, double ratio,
                                std::uint64_t seed) {
  if (!(ratio >= 0.0 && ratio < 1.0)) {
    throw Error(kModule, "sparsity ratio must lie in [0, 1)");
  }
  std::vector<std::pair<int, int>> positives;
  for (int s = 0; s < tags.num_samples(); ++s) {
    for (int j = 0; j < tags.num_tags(); ++j) {
      if (tags(s, j)) positives.emplace_back(s, j);
    }
  }
  const int count = static_cast<int>(
      std::floor(ratio * static_cast<double>(positives.size())));
  Rng rng(seed);
  std::vector<int> picks =
      rng.SampleWithoutReplacement(static_cast<int>(positives.size()), count);
  std::sort(picks.begin(), picks.end());

  SparsifiedTags result{tags, {}};
  for (int p : picks) {
    result.tags.Set(positives[p].first, positives[p].second, false);
    result.removed.push_back(positives[p]);
  }
  return result;
}

CompletionTruth MakeCompletionTruth(
    const TagMatrix& observed,
    const std::vector<std::pair<int, int>>& removed) {
  CompletionTruth truth;
  truth.missing.resize(observed.num_samples());
  truth.observed.resize(observed.num_samples());
  for (int s = 0; s < observed.num_samples(); ++s) {
    for (int j = 0; j < observed.num_tags(); ++j) {
      if (observed(s, j)) truth.observed[s].push_back(j);
    }
  }
  for (const auto& [s, j] : removed) {
    if (s < 0 || s >= observed.num_samples() || j < 0 ||
        j >= observed.num_tags()) {
      throw Error(kModule, "held-out pair outside the tag matrix");
    }
    if (observed(s, j)) {
      throw Error(kModule, "held-out tag is also observed");
    }
    truth.missing[s].push_back(j);
  }
  return truth;
}

}  // namespace hmlrf
