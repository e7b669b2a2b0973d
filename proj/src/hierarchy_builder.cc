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

#include "hmlrf/hierarchy_builder.h"

#include <algorithm>
#include <cmath>
#include <string>

#include "hmlrf/error.h"
#include "hmlrf/kmeans.h"

namespace hmlrf {
namespace {

constexpr char kModule[] = "hierarchy_builder";

// Columns `keep` of `tags`, in the given order.
TagMatrix SelectColumns(const TagMatrix& tags, const std::vector<int>& keep) {
  std::vector<std::string> names;
  for (int j : keep) names.push_back(tags.tag_names()[j]);
  std::vector<std::uint8_t> values;
  values.reserve(static_cast<std::size_t>(tags.num_samples()) * keep.size());
  for (int i = 0; i < tags.num_samples(); ++i) {
    for (int j : keep) values.push_back(tags(i, j));
  }
  return TagMatrix(tags.num_samples(), std::move(names), std::move(values));
}

}  // namespace

WeightedTagMatrix TfidfWeight(const TagMatrix& tags) {
  const int n = tags.num_samples();
  const int m = tags.num_tags();
  WeightedTagMatrix weighted{Matrix(n, m)};
  for (int j = 0; j < m; ++j) {
    const int occurrences = tags.Occurrences(j);
    if (occurrences == 0) continue;
    const double idf = std::log(static_cast<double>(n) / occurrences);
    for (int i = 0; i < n; ++i) {
      if (tags(i, j)) weighted.weights(i, j) = idf;
    }
  }
  return weighted;
}

TopicClustering KMeansTopics(const WeightedTagMatrix& weighted, int num_topics,
                             std::uint64_t seed) {
  if (num_topics < 1) throw Error(kModule, "topic count must be positive");
  if (num_topics > weighted.weights.rows()) {
    throw Error(kModule, "topic count " + std::to_string(num_topics) +
                             " exceeds sample count " +
                             std::to_string(weighted.weights.rows()));
  }
  KMeansResult result = KMeans(weighted.weights, num_topics, seed);
  return TopicClustering{num_topics, std::move(result.assignment),
                         std::move(result.centroids), std::move(result.empty)};
}

Matrix TopicTagScores(const WeightedTagMatrix& weighted,
                      const TopicClustering& topics) {
  const Matrix& w = weighted.weights;
  Matrix scores(topics.num_topics, w.cols());
  for (int i = 0; i < w.rows(); ++i) {
    auto target = scores.row(topics.assignment[i]);
    const auto source = w.row(i);
    for (int j = 0; j < w.cols(); ++j) target[j] += source[j];
  }
  return scores;
}

std::vector<int> SelectRepresentativeTags(const Matrix& scores, int eta) {
  std::vector<bool> selected(scores.cols(), false);
  std::vector<int> order;
  for (int e = 0; e < scores.rows(); ++e) {
    order.clear();
    for (int j = 0; j < scores.cols(); ++j) {
      if (scores(e, j) > 0.0) order.push_back(j);
    }
    std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
      return scores(e, a) > scores(e, b);
    });
    const int take = std::min<int>(eta, static_cast<int>(order.size()));
    for (int r = 0; r < take; ++r) selected[order[r]] = true;
  }
  std::vector<int> result;
  for (int j = 0; j < scores.cols(); ++j) {
    if (selected[j]) result.push_back(j);
  }
  return result;
}

TagHierarchy BuildHierarchy(const TagMatrix& tags, int num_topics,
                            int num_layers, std::uint64_t seed) {
  if (num_layers < 1) throw Error(kModule, "layer count must be positive");
  if (num_topics < 1) throw Error(kModule, "topic count must be positive");
  const int m = tags.num_tags();
  std::vector<int> remaining(m);
  for (int j = 0; j < m; ++j) remaining[j] = j;

  std::vector<std::vector<int>> layers;
  for (int layer = 0; layer + 1 < num_layers; ++layer) {
    if (remaining.empty()) break;
    const TagMatrix sub = SelectColumns(tags, remaining);
    const WeightedTagMatrix weighted = TfidfWeight(sub);
    const TopicClustering topics =
        KMeansTopics(weighted, num_topics, seed + static_cast<std::uint64_t>(layer));
    const Matrix scores = TopicTagScores(weighted, topics);
    const std::vector<int> picked =
        SelectRepresentativeTags(scores, 3 * (layer + 1));
    if (picked.empty()) break;

    std::vector<int> chosen;
    std::vector<bool> taken(remaining.size(), false);
    for (int local : picked) {
      chosen.push_back(remaining[local]);
      taken[local] = true;
    }
    std::vector<int> rest;
    for (std::size_t r = 0; r < remaining.size(); ++r) {
      if (!taken[r]) rest.push_back(remaining[r]);
    }
    layers.push_back(std::move(chosen));
    remaining = std::move(rest);
  }
  if (!remaining.empty()) layers.push_back(std::move(remaining));
  if (static_cast<int>(layers.size()) != num_layers) {
    throw Error(kModule, "cannot form " + std::to_string(num_layers) +
                             " non-empty layers from " + std::to_string(m) +
                             " tags");
  }
  return TagHierarchy(std::move(layers), m);
}

}  // namespace hmlrf
