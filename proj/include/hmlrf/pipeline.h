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

#ifndef HMLRF_PIPELINE_H_
#define HMLRF_PIPELINE_H_

// End-to-end runs: optional hierarchy estimation, forest training, global
// clustering, tag completion and evaluation; plus the ablation grid over
// forest modes and tag sparsity.

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "hmlrf/completion.h"
#include "hmlrf/core_data.h"
#include "hmlrf/forest.h"
#include "hmlrf/metrics.h"
#include "hmlrf/spectral_clustering.h"
#include "hmlrf/tag_stats.h"

namespace hmlrf {

struct RunConfig {
  ForestConfig forest;              // tau 1000, phi 3, nu_try sqrt(d), full
  int kappa = 20;
  int p = 0;                        // 0: number of ground-truth clusters
  std::uint64_t seed = 0;
  double sparsity = 0.0;            // share of positive tags hidden first
  CompletionMethod method = CompletionMethod::kAffinityMeasure;
  int top_n = 3;
  bool complete = true;             // skip completion when false
  int threads = 1;
  bool build_hierarchy = false;     // estimate instead of using the dataset's
  int topics = 30;
  int layers = 2;
};

struct PipelineResult {
  TagMatrix observed;                         // tags the forest saw
  std::vector<std::pair<int, int>> held_out;  // (sample, tag) to recover
  TagHierarchy hierarchy;
  HmlForest forest;
  Matrix affinity;
  Clustering clustering;
  std::optional<ClusteringMetrics> clustering_metrics;
  std::optional<CompletionScores> completion;
  std::vector<std::vector<int>> recovered;    // top-N per sample
  std::optional<CompletionMetrics> completion_metrics;
};

// Seeds: the sparsity draw uses DeriveSeed(seed, 1), hierarchy estimation
// DeriveSeed(seed, 2), K-means DeriveSeed(seed, 3); trees use seed + t.
// Held-out tags come from the sparsity draw, else from the dataset's
// ground-truth tag matrix when present.
PipelineResult RunPipeline(const Dataset& dataset, const RunConfig& config);

// One target layer's correlation tables as JSON: target_layer, target_tags,
// subordinate_tags (names) and the cooccurrence / mutual_exclusion rows.
std::string CorrelationsJson(const TagMatrix& tags,
                             const CorrelationTables& tables);

// JSON with fields purity, nmi, ri, ari, f1, ap@N, ar@N, coverage@N (null
// when not computable).
std::string MetricsJson(const PipelineResult& result, int top_n);

// Writes every intermediate artifact of `result` under `dir`:
// observed_tags.csv, held_out.csv, hierarchy.json, corr.json (one table
// per layer with layers below it), forest.json,
// affinity.csv, clusters.csv, completed.csv and metrics.json.
void WritePipelineArtifacts(const PipelineResult& result,
                            const RunConfig& config,
                            const std::filesystem::path& dir);

// Ranked completion rows "sample,rank,tag,score" (tag by name).
void SaveCompletion(const CompletionScores& scores,
                    const std::vector<std::vector<int>>& recovered,
                    const std::filesystem::path& path);
// Returns per-sample ranked tag indices; `tag_names` resolves names.
std::vector<std::vector<int>> LoadCompletion(
    const std::filesystem::path& path, int num_samples,
    const std::vector<std::string>& tag_names);

// Held-out pairs as "sample,tag" rows (tag by name).
void SaveHeldOut(const std::vector<std::pair<int, int>>& held_out,
                 const std::vector<std::string>& tag_names,
                 const std::filesystem::path& path);
std::vector<std::pair<int, int>> LoadHeldOut(
    const std::filesystem::path& path,
    const std::vector<std::string>& tag_names);

struct AblationRow {
  ForestMode mode = ForestMode::kFull;
  double sparsity = 0.0;
  std::uint64_t seed = 0;
  double nmi = 0.0;
};

// Runs every (mode, sparsity, repeat) cell, repeat r using seed + 1000 r,
// and reports clustering NMI. Rows follow grid order regardless of `jobs`.
std::vector<AblationRow> RunAblation(const Dataset& dataset,
                                     const RunConfig& config,
                                     const std::vector<double>& sparsity_grid,
                                     int repeats, int jobs = 1);

void SaveAblationReport(const std::vector<AblationRow>& rows,
                        const std::filesystem::path& path);

}  // namespace hmlrf

#endif  // HMLRF_PIPELINE_H_
