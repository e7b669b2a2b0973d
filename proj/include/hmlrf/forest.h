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

#ifndef HMLRF_FOREST_H_
#define HMLRF_FOREST_H_

// Hierarchical multi-label random forest training.
//
// Trees split on visual features while the tags act as structuring
// constraints: every node scores candidate cut-points by the summed Gini gain
// of the tags in its target layer, i.e. the most abstract layer whose tags
// are not constant over the node's samples. Samples with no label in the
// target layer can be given soft masses derived from cross-layer tag
// correlations.

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "hmlrf/core_data.h"
#include "hmlrf/random.h"
#include "hmlrf/tag_stats.h"

namespace hmlrf {

enum class ForestMode {
  kFull,      // hierarchy + soft tags from correlations
  kFlatTags,  // every tag in every node, zeros read as negatives
  kNoCorr,    // hierarchy, unlabelled target-layer samples left out
};

std::string_view ModeName(ForestMode mode);
// Accepts "full", "flat-tags" and "no-corr" (underscores also accepted).
ForestMode ParseMode(std::string_view name);

struct SplitParams {
  int feature = -1;
  double threshold = 0.0;

  // h(x) = 0 (left) iff x_f < threshold.
  bool GoesRight(std::span<const double> x) const {
    return !(x[feature] < threshold);
  }
};

struct TreeNode {
  SplitParams split;         // feature < 0 on leaves
  int left = -1;
  int right = -1;
  std::vector<int> samples;  // leaves only, ascending

  bool is_leaf() const { return split.feature < 0; }
  bool operator==(const TreeNode& other) const {
    return split.feature == other.split.feature &&
           split.threshold == other.split.threshold && left == other.left &&
           right == other.right && samples == other.samples;
  }
};

// Node 0 is the root; both children of a node are appended when it splits.
struct Tree {
  std::vector<TreeNode> nodes;

  int num_leaves() const;
  // Sample sets of the leaves, in node order.
  std::vector<std::vector<int>> Leaves() const;
  // Rank (in node order) of the leaf holding each training sample.
  std::vector<int> LeafOfSample(int num_samples) const;
  bool operator==(const Tree& other) const = default;
};

struct ForestConfig {
  int tau = 1000;   // number of trees
  int phi = 3;      // nodes with at most phi samples become leaves
  int nu_try = 0;   // features drawn per node; 0 means floor(sqrt(d))
  ForestMode mode = ForestMode::kFull;

  bool operator==(const ForestConfig& other) const = default;
};

struct HmlForest {
  ForestConfig config;
  std::uint64_t seed = 0;
  int num_samples = 0;
  std::vector<Tree> trees;

  bool operator==(const HmlForest& other) const = default;
};

// Per-tag positive and negative mass accumulated over a set of samples.
struct ClassMass {
  std::vector<double> positive;
  std::vector<double> negative;
};

// 1 - p^2 - (1 - p)^2 with p = pos / (pos + neg). Throws on an empty node.
double Gini(double positive_mass, double negative_mass);

// Weighted Gini gain of one tag; total mass plays the role of set size.
// Children without mass contribute nothing.
double SingleTagGain(const ClassMass& parent, const ClassMass& left,
                     const ClassMass& right, int tag);

// First layer with a non-constant tag over `samples`, or nullopt when every
// layer is pure.
std::optional<int> TargetLayer(const TagMatrix& tags,
                               std::span<const int> samples,
                               const TagHierarchy& hierarchy);

// Everything a node needs to score splits: the hierarchy used for target
// layer selection (a single layer in flat-tags mode) and, in full mode, soft
// tag scores for every layer that has subordinate layers. Built once per
// forest and shared read-only by all trees.
class GainModel {
 public:
  GainModel(const TagMatrix& tags, const TagHierarchy& hierarchy,
            ForestMode mode);

  ForestMode mode() const { return mode_; }
  const TagMatrix& tags() const { return tags_; }
  const TagHierarchy& hierarchy() const { return hierarchy_; }

  std::optional<int> TargetLayer(std::span<const int> samples) const;

  // Mass a sample contributes to one target-layer tag. Labelled positives
  // give (1, 0) and other samples (0, 1), except samples unlabelled on the
  // whole target layer when a lower layer exists: full mode splits their
  // unit mass in proportion to the soft scores (or drops them if both scores
  // are zero) and no-corr mode drops them.
  void SampleMass(int sample, int layer, int tag_slot, double* positive,
                  double* negative) const;

  // Soft scores for `layer`, if computed.
  const SoftTagScores* Soft(int layer) const;

  // Multi-label gain of partition left | right, summed over the tags of the
  // target layer of left u right. Zero if that node has no target layer.
  double Gain(std::span<const int> left, std::span<const int> right) const;

 private:
  TagMatrix tags_;
  TagHierarchy hierarchy_;
  ForestMode mode_;
  std::vector<std::optional<SoftTagScores>> soft_;
  std::vector<std::vector<bool>> unlabelled_;  // [layer][sample]
};

struct SplitResult {
  SplitParams split;
  double gain = 0.0;
  std::vector<int> left;
  std::vector<int> right;
};

// Draws nu_try features without replacement, scans the midpoints between
// consecutive distinct values of each and keeps the first candidate with the
// highest gain. Returns nullopt when no candidate has positive gain.
std::optional<SplitResult> OptimiseSplit(std::span<const int> samples,
                                         const FeatureMatrix& features,
                                         const GainModel& model, int nu_try,
                                         Rng& rng);

// Effective nu_try for `num_features`.
int ResolveNuTry(const ForestConfig& config, int num_features);

Tree TrainTree(const FeatureMatrix& features, const GainModel& model,
               const ForestConfig& config, std::uint64_t seed);

// Trains config.tau trees; tree t uses seed + t. `threads` <= 0 selects the
// hardware concurrency. The result does not depend on the thread count.
HmlForest TrainForest(const Dataset& dataset, const ForestConfig& config,
                      std::uint64_t seed, int threads = 1);

// Versioned JSON dump: config, seed and every tree's node list.
void SaveForest(const HmlForest& forest, const std::filesystem::path& path);
HmlForest LoadForest(const std::filesystem::path& path);

}  // namespace hmlrf

#endif  // HMLRF_FOREST_H_
