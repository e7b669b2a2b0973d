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

#include "hmlrf/completion.h"

#include <algorithm>
#include <string>

#include "hmlrf/error.h"

namespace hmlrf {
namespace {

constexpr char kModule[] = "completion";

// The kappa other samples with the highest affinity to `sample`.
std::vector<int> NearestByAffinity(const Matrix& affinity, int sample,
                                   int kappa) {
  const int n = affinity.rows();
  std::vector<int> others;
  others.reserve(n - 1);
  for (int i = 0; i < n; ++i) {
    if (i != sample) others.push_back(i);
  }
  const int take = std::min<int>(kappa, static_cast<int>(others.size()));
  std::partial_sort(others.begin(), others.begin() + take, others.end(),
                    [&](int a, int b) {
                      const double va = affinity(a, sample);
                      const double vb = affinity(b, sample);
                      return va > vb || (va == vb && a < b);
                    });
  others.resize(take);
  return others;
}

void CheckKappa(const Matrix& affinity, int kappa) {
  if (kappa < 1 || kappa >= affinity.rows()) {
    throw Error(kModule, "kappa must satisfy 1 <= kappa < n");
  }
}

}  // namespace

std::string_view MethodName(CompletionMethod method) {
  switch (method) {
    case CompletionMethod::kLocalNeighbourhoods:
      return "ln";
    case CompletionMethod::kGlobalClusters:
      return "gc";
    case CompletionMethod::kAffinityMeasure:
      return "am";
  }
  return "am";
}

CompletionMethod ParseMethod(std::string_view name) {
  if (name == "ln") return CompletionMethod::kLocalNeighbourhoods;
  if (name == "gc") return CompletionMethod::kGlobalClusters;
  if (name == "am") return CompletionMethod::kAffinityMeasure;
  throw Error(kModule, "unknown completion method '" + std::string(name) +
                           "' (expected ln, gc or am)");
}

LeafIndex::LeafIndex(const HmlForest& forest) {
  for (const Tree& tree : forest.trees) {
    leaves_.push_back(tree.Leaves());
    leaf_of_.push_back(tree.LeafOfSample(forest.num_samples));
  }
}

double CompleteLocalNeighbourhoods(const LeafIndex& leaves,
                                   const TagMatrix& tags, int sample, int tag) {
  int positive = 0;
  int negative = 0;
  for (int t = 0; t < leaves.num_trees(); ++t) {
    int neighbours = 0;
    int labelled = 0;
    for (int s : leaves.Neighbourhood(t, sample)) {
      if (s == sample) continue;
      ++neighbours;
      labelled += tags(s, tag);
    }
    if (neighbours == 0) continue;
    if (labelled == neighbours) {
      ++positive;
    } else if (labelled == 0) {
      ++negative;
    }
  }
  if (positive + negative == 0) return 0.0;
  return static_cast<double>(positive) / (positive + negative);
}

double CompleteGlobalClusters(const Clustering& clustering,
                              const TagMatrix& tags, int sample, int tag) {
  const int cluster = clustering.assignment[sample];
  int members = 0;
  int labelled = 0;
  for (int s = 0; s < static_cast<int>(clustering.assignment.size()); ++s) {
    if (clustering.assignment[s] != cluster || s == sample) continue;
    ++members;
    labelled += tags(s, tag);
  }
  if (members == 0) return 0.0;
  return static_cast<double>(labelled) / members;
}

double CompleteAffinityMeasure(const Matrix& affinity, const TagMatrix& tags,
                               int sample, int tag, int kappa) {
  CheckKappa(affinity, kappa);
  double sum = 0.0;
  for (int i : NearestByAffinity(affinity, sample, kappa)) {
    if (tags(i, tag)) sum += affinity(i, sample);
  }
  return sum / kappa;
}

CompletionScores ScoreCompletion(CompletionMethod method,
                                 const CompletionInputs& inputs,
                                 const TagMatrix& observed) {
  const int n = observed.num_samples();
  const int m = observed.num_tags();
  CompletionScores result{Matrix(n, m), observed};
  switch (method) {
    case CompletionMethod::kLocalNeighbourhoods: {
      if (inputs.leaves == nullptr) throw Error(kModule, "ln needs a forest");
      for (int s = 0; s < n; ++s) {
        for (int j = 0; j < m; ++j) {
          result.scores(s, j) =
              CompleteLocalNeighbourhoods(*inputs.leaves, observed, s, j);
        }
      }
      break;
    }
    case CompletionMethod::kGlobalClusters: {
      if (inputs.clustering == nullptr) {
        throw Error(kModule, "gc needs a clustering");
      }
      const Clustering& clustering = *inputs.clustering;
      if (static_cast<int>(clustering.assignment.size()) != n) {
        throw Error(kModule, "clustering does not cover every sample");
      }
      // Per-cluster member and label counts, then remove the sample itself.
      std::vector<int> size(clustering.num_clusters, 0);
      Matrix labelled(clustering.num_clusters, m);
      for (int s = 0; s < n; ++s) {
        const int c = clustering.assignment[s];
        ++size[c];
        for (int j = 0; j < m; ++j) labelled(c, j) += observed(s, j);
      }
      for (int s = 0; s < n; ++s) {
        const int c = clustering.assignment[s];
        if (size[c] < 2) continue;
        for (int j = 0; j < m; ++j) {
          result.scores(s, j) =
              (labelled(c, j) - observed(s, j)) / (size[c] - 1);
        }
      }
      break;
    }
    case CompletionMethod::kAffinityMeasure: {
      if (inputs.affinity == nullptr) {
        throw Error(kModule, "am needs an affinity matrix");
      }
      const Matrix& affinity = *inputs.affinity;
      if (affinity.rows() != n || affinity.cols() != n) {
        throw Error(kModule, "affinity matrix must be n x n");
      }
      CheckKappa(affinity, inputs.kappa);
      for (int s = 0; s < n; ++s) {
        const std::vector<int> nearest =
            NearestByAffinity(affinity, s, inputs.kappa);
        for (int j = 0; j < m; ++j) {
          double sum = 0.0;
          for (int i : nearest) {
            if (observed(i, j)) sum += affinity(i, s);
          }
          result.scores(s, j) = sum / inputs.kappa;
        }
      }
      break;
    }
  }
  return result;
}

std::vector<int> RecoverTopN(const CompletionScores& scores, int sample,
                             int n) {
  if (n < 1) throw Error(kModule, "top-N needs N >= 1");
  std::vector<int> candidates;
  for (int j = 0; j < scores.scores.cols(); ++j) {
    if (!scores.Excluded(sample, j)) candidates.push_back(j);
  }
  std::stable_sort(candidates.begin(), candidates.end(), [&](int a, int b) {
    return scores.scores(sample, a) > scores.scores(sample, b);
  });
  if (static_cast<int>(candidates.size()) > n) candidates.resize(n);
  return candidates;
}

}  // namespace hmlrf
