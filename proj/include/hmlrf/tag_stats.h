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

#ifndef HMLRF_TAG_STATS_H_
#define HMLRF_TAG_STATS_H_

// Cross-layer tag correlations and the soft presence/absence scores they
// induce for samples that carry no label in a target layer.

#include <vector>

#include "hmlrf/core_data.h"

namespace hmlrf {

// Rate at which tag i is labelled among the samples labelled with tag j:
// co(i, j) / o_j. Zero when tag j never occurs.
double Cooccurrence(const TagMatrix& tags, int i, int j);

// Normalised excess of tag i's negative rate among samples labelled with
// tag j over its overall negative rate:
//   max(0, r_neg_given_j(i) - r_neg(i)) / (1 - r_neg(i)).
// Zero when tag j never occurs or tag i is never labelled.
double MutualExclusion(const TagMatrix& tags, int i, int j);

// Correlations between the tags of one target layer and every tag of the
// layers below it.
struct CorrelationTables {
  int target_layer = 0;
  std::vector<int> target_tags;       // rows
  std::vector<int> subordinate_tags;  // columns, layer order
  Matrix cooccurrence;                // |target| x |subordinate|
  Matrix mutual_exclusion;            // |target| x |subordinate|
};

// Throws when `target_layer` is the last layer (nothing below it).
CorrelationTables ComputeCorrelations(const TagMatrix& tags,
                                      const TagHierarchy& hierarchy,
                                      int target_layer);

// Scores for the samples unlabelled on every tag of the target layer.
struct SoftTagScores {
  int target_layer = 0;
  std::vector<int> target_tags;
  std::vector<int> missing_samples;  // ascending sample ids
  std::vector<int> row_of_sample;    // sample -> row, -1 if labelled
  Matrix positive;                   // |missing| x |target|, in [0, 1]
  Matrix negative;                   // |missing| x |target|, in [0, 1]

  bool IsMissing(int sample) const { return row_of_sample[sample] >= 0; }
};

// Accumulates co-occurrence (positive) and mutual-exclusion (negative)
// support from each missing sample's labelled subordinate tags, then divides
// each score family by its largest raw value so that it lies in [0, 1].
SoftTagScores ComputeSoftScores(const TagMatrix& tags,
                                const TagHierarchy& hierarchy,
                                const CorrelationTables& correlations);

}  // namespace hmlrf

#endif  // HMLRF_TAG_STATS_H_
