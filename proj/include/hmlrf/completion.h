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

#ifndef HMLRF_COMPLETION_H_
#define HMLRF_COMPLETION_H_

// Missing tag completion from the structure learned by a forest: local leaf
// neighbourhoods, global clusters, or forest affinities.

#include <string_view>
#include <vector>

#include "hmlrf/core_data.h"
#include "hmlrf/forest.h"
#include "hmlrf/spectral_clustering.h"

namespace hmlrf {

enum class CompletionMethod {
  kLocalNeighbourhoods,  // "ln"
  kGlobalClusters,       // "gc"
  kAffinityMeasure,      // "am"
};

std::string_view MethodName(CompletionMethod method);
CompletionMethod ParseMethod(std::string_view name);

// Leaf membership of every training sample in every tree.
class LeafIndex {
 public:
  explicit LeafIndex(const HmlForest& forest);

  int num_trees() const { return static_cast<int>(leaf_of_.size()); }
  // Samples sharing `sample`'s leaf in tree `t`, including `sample`.
  const std::vector<int>& Neighbourhood(int t, int sample) const {
    return leaves_[t][leaf_of_[t][sample]];
  }

 private:
  std::vector<std::vector<std::vector<int>>> leaves_;  // [tree][leaf]
  std::vector<std::vector<int>> leaf_of_;              // [tree][sample]
};

// |P+| / (|P+| + |P-|) over the trees whose leaf neighbours of `sample`
// (itself excluded) are unanimously labelled (P+) or unanimously unlabelled
// (P-) on `tag`. Zero when no tree gives a confident neighbourhood.
double CompleteLocalNeighbourhoods(const LeafIndex& leaves,
                                   const TagMatrix& tags, int sample, int tag);

// Share of the other members of `sample`'s cluster labelled with `tag`;
// zero for a singleton cluster.
double CompleteGlobalClusters(const Clustering& clustering,
                              const TagMatrix& tags, int sample, int tag);

// (1 / kappa) * sum over the kappa highest-affinity other samples i of
// y(i, tag) * A(i, sample). Ties in affinity go to the lower index.
double CompleteAffinityMeasure(const Matrix& affinity, const TagMatrix& tags,
                               int sample, int tag, int kappa);

// Existence probabilities for every (sample, tag). Pairs already labelled
// positive are excluded from ranking.
struct CompletionScores {
  Matrix scores;      // n x m, in [0, 1]
  TagMatrix observed;

  bool Excluded(int sample, int tag) const { return observed(sample, tag); }
};

struct CompletionInputs {
  const LeafIndex* leaves = nullptr;        // kLocalNeighbourhoods
  const Clustering* clustering = nullptr;   // kGlobalClusters
  const Matrix* affinity = nullptr;         // kAffinityMeasure
  int kappa = 20;
};

CompletionScores ScoreCompletion(CompletionMethod method,
                                 const CompletionInputs& inputs,
                                 const TagMatrix& observed);

// Top-N unobserved tags of `sample` by score, ties by ascending index. Fewer
// than N are returned when fewer candidates exist.
std::vector<int> RecoverTopN(const CompletionScores& scores, int sample, int n);

}  // namespace hmlrf

#endif  // HMLRF_COMPLETION_H_
