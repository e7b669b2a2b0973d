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

#include "hmlrf/tag_stats.h"

#include <algorithm>
#include <string>

#include "hmlrf/error.h"

namespace hmlrf {
namespace {

constexpr char kModule[] = "tag_stats";

int CoCount(const TagMatrix& tags, int i, int j) {
  int count = 0;
  for (int s = 0; s < tags.num_samples(); ++s) count += tags(s, i) && tags(s, j);
  return count;
}

double MaxOrZero(const Matrix& m) {
  double best = 0.0;
  for (double v : m.values()) best = std::max(best, v);
  return best;
}

void DivideBy(Matrix& m, double divisor) {
  if (divisor <= 0.0) return;
  for (double& v : m.values()) v /= divisor;
}

}  // namespace

double Cooccurrence(const TagMatrix& tags, int i, int j) {
  const int occurrences = tags.Occurrences(j);
  if (occurrences == 0) return 0.0;
  return static_cast<double>(CoCount(tags, i, j)) / occurrences;
}

double MutualExclusion(const TagMatrix& tags, int i, int j) {
  const int n = tags.num_samples();
  const int occurrences_j = tags.Occurrences(j);
  const int occurrences_i = tags.Occurrences(i);
  if (occurrences_j == 0 || occurrences_i == 0) return 0.0;
  const double negative_rate = static_cast<double>(n - occurrences_i) / n;
  const double negative_rate_given_j =
      static_cast<double>(occurrences_j - CoCount(tags, i, j)) / occurrences_j;
  return std::max(0.0, negative_rate_given_j - negative_rate) /
         (1.0 - negative_rate);
}

CorrelationTables ComputeCorrelations(const TagMatrix& tags,
                                      const TagHierarchy& hierarchy,
                                      int target_layer) {
  if (target_layer < 0 || target_layer >= hierarchy.num_layers()) {
    throw Error(kModule, "target layer " + std::to_string(target_layer) +
                             " out of range");
  }
  if (target_layer == hierarchy.num_layers() - 1) {
    throw Error(kModule, "no subordinate layers below target layer " +
                             std::to_string(target_layer));
  }
  CorrelationTables tables;
  tables.target_layer = target_layer;
  tables.target_tags = hierarchy.layer(target_layer);
  for (int k = target_layer + 1; k < hierarchy.num_layers(); ++k) {
    const auto& layer = hierarchy.layer(k);
    tables.subordinate_tags.insert(tables.subordinate_tags.end(), layer.begin(),
                                   layer.end());
  }
  const int rows = static_cast<int>(tables.target_tags.size());
  const int cols = static_cast<int>(tables.subordinate_tags.size());
  tables.cooccurrence = Matrix(rows, cols);
  tables.mutual_exclusion = Matrix(rows, cols);
  for (int r = 0; r < rows; ++r) {
    for (int c = 0; c < cols; ++c) {
      const int i = tables.target_tags[r];
      const int j = tables.subordinate_tags[c];
      tables.cooccurrence(r, c) = Cooccurrence(tags, i, j);
      tables.mutual_exclusion(r, c) = MutualExclusion(tags, i, j);
    }
  }
  return tables;
}

SoftTagScores ComputeSoftScores(const TagMatrix& tags,
                                const TagHierarchy& hierarchy,
                                const CorrelationTables& correlations) {
  if (correlations.target_layer >= hierarchy.num_layers() - 1) {
    throw Error(kModule, "no subordinate layers below target layer " +
                             std::to_string(correlations.target_layer));
  }
  SoftTagScores scores;
  scores.target_layer = correlations.target_layer;
  scores.target_tags = correlations.target_tags;
  scores.row_of_sample.assign(tags.num_samples(), -1);
  for (int s = 0; s < tags.num_samples(); ++s) {
    const bool labelled =
        std::any_of(scores.target_tags.begin(), scores.target_tags.end(),
                    [&](int tag) { return tags(s, tag); });
    if (labelled) continue;
    scores.row_of_sample[s] = static_cast<int>(scores.missing_samples.size());
    scores.missing_samples.push_back(s);
  }

  const int rows = static_cast<int>(scores.missing_samples.size());
  const int cols = static_cast<int>(scores.target_tags.size());
  scores.positive = Matrix(rows, cols);
  scores.negative = Matrix(rows, cols);
  for (int r = 0; r < rows; ++r) {
    const int s = scores.missing_samples[r];
    for (int t = 0; t < cols; ++t) {
      double positive = 0.0;
      double negative = 0.0;
      for (std::size_t c = 0; c < correlations.subordinate_tags.size(); ++c) {
        if (!tags(s, correlations.subordinate_tags[c])) continue;
        positive += correlations.cooccurrence(t, static_cast<int>(c));
        negative += correlations.mutual_exclusion(t, static_cast<int>(c));
      }
      scores.positive(r, t) = positive;
      scores.negative(r, t) = negative;
    }
  }
  DivideBy(scores.positive, MaxOrZero(scores.positive));
  DivideBy(scores.negative, MaxOrZero(scores.negative));
  return scores;
}

}  // namespace hmlrf
