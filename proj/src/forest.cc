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

#include "hmlrf/forest.h"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <fstream>
#include <thread>

#include "hmlrf/error.h"
#include "json.hpp"

namespace hmlrf {
namespace {

constexpr char kModule[] = "forest";
constexpr int kFormatVersion = 1;

// Below this mass a child is treated as empty; dropping it perturbs the gain
// by at most half its mass.
constexpr double kNegligibleMass = 1e-12;

// Gains within this margin count as equal (the earlier candidate wins) and a
// best gain below it counts as no improvement.
constexpr double kGainTolerance = 1e-12;

// Mass-weighted Gini impurity, m * gini = 2 * pos * neg / m.
double WeightedImpurity(double positive, double negative) {
  positive = std::max(positive, 0.0);
  negative = std::max(negative, 0.0);
  const double mass = positive + negative;
  if (mass <= kNegligibleMass) return 0.0;
  return 2.0 * positive * negative / mass;
}

// Split midpoint that sends `low` left and `high` right under x < threshold.
double Midpoint(double low, double high) {
  const double mid = low + (high - low) / 2.0;
  return mid > low ? mid : high;
}

int ResolveThreads(int threads) {
  if (threads > 0) return threads;
  const unsigned hardware = std::thread::hardware_concurrency();
  return hardware == 0 ? 1 : static_cast<int>(hardware);
}

}  // namespace

std::string_view ModeName(ForestMode mode) {
  switch (mode) {
    case ForestMode::kFull:
      return "full";
    case ForestMode::kFlatTags:
      return "flat-tags";
    case ForestMode::kNoCorr:
      return "no-corr";
  }
  return "full";
}

ForestMode ParseMode(std::string_view name) {
  if (name == "full") return ForestMode::kFull;
  if (name == "flat-tags" || name == "flat_tags") return ForestMode::kFlatTags;
  if (name == "no-corr" || name == "no_corr") return ForestMode::kNoCorr;
  throw Error(kModule, "unknown mode '" + std::string(name) +
                           "' (expected full, flat-tags or no-corr)");
}

int Tree::num_leaves() const {
  int count = 0;
  for (const TreeNode& node : nodes) count += node.is_leaf();
  return count;
}

std::vector<std::vector<int>> Tree::Leaves() const {
  std::vector<std::vector<int>> leaves;
  for (const TreeNode& node : nodes) {
    if (node.is_leaf()) leaves.push_back(node.samples);
  }
  return leaves;
}

std::vector<int> Tree::LeafOfSample(int num_samples) const {
  std::vector<int> leaf_of(num_samples, -1);
  int rank = 0;
  for (const TreeNode& node : nodes) {
    if (!node.is_leaf()) continue;
    for (int s : node.samples) leaf_of[s] = rank;
    ++rank;
  }
  return leaf_of;
}

double Gini(double positive_mass, double negative_mass) {
  const double mass = positive_mass + negative_mass;
  if (!(mass > 0.0)) throw Error(kModule, "Gini impurity of an empty node");
  const double p = positive_mass / mass;
  return 1.0 - p * p - (1.0 - p) * (1.0 - p);
}

double SingleTagGain(const ClassMass& parent, const ClassMass& left,
                     const ClassMass& right, int tag) {
  const double parent_mass = parent.positive[tag] + parent.negative[tag];
  if (!(parent_mass > 0.0)) return 0.0;
  double gain = Gini(parent.positive[tag], parent.negative[tag]);
  const double left_mass = left.positive[tag] + left.negative[tag];
  if (left_mass > 0.0) {
    gain -= left_mass / parent_mass * Gini(left.positive[tag], left.negative[tag]);
  }
  const double right_mass = right.positive[tag] + right.negative[tag];
  if (right_mass > 0.0) {
    gain -= right_mass / parent_mass *
            Gini(right.positive[tag], right.negative[tag]);
  }
  return gain;
}

std::optional<int> TargetLayer(const TagMatrix& tags,
                               std::span<const int> samples,
                               const TagHierarchy& hierarchy) {
  if (samples.empty()) return std::nullopt;
  const auto first = tags.row(samples.front());
  for (int k = 0; k < hierarchy.num_layers(); ++k) {
    for (int tag : hierarchy.layer(k)) {
      for (int s : samples) {
        if (tags(s, tag) != (first[tag] != 0)) return k;
      }
    }
  }
  return std::nullopt;
}

GainModel::GainModel(const TagMatrix& tags, const TagHierarchy& hierarchy,
                     ForestMode mode)
    : tags_(tags),
      hierarchy_(mode == ForestMode::kFlatTags
                     ? TagHierarchy::Flat(tags.num_tags())
                     : hierarchy),
      mode_(mode) {
  if (hierarchy.num_tags() != tags.num_tags()) {
    throw Error(kModule, "hierarchy and tag matrix disagree on tag count");
  }
  const int layers = hierarchy_.num_layers();
  soft_.resize(layers);
  unlabelled_.resize(layers);
  for (int k = 0; k < layers; ++k) {
    unlabelled_[k].assign(tags_.num_samples(), true);
    for (int s = 0; s < tags_.num_samples(); ++s) {
      for (int tag : hierarchy_.layer(k)) {
        if (tags_(s, tag)) {
          unlabelled_[k][s] = false;
          break;
        }
      }
    }
    if (mode_ == ForestMode::kFull && k + 1 < layers) {
      soft_[k] = ComputeSoftScores(tags_, hierarchy_,
                                   ComputeCorrelations(tags_, hierarchy_, k));
    }
  }
}

std::optional<int> GainModel::TargetLayer(std::span<const int> samples) const {
  return hmlrf::TargetLayer(tags_, samples, hierarchy_);
}

const SoftTagScores* GainModel::Soft(int layer) const {
  return soft_[layer] ? &*soft_[layer] : nullptr;
}

void GainModel::SampleMass(int sample, int layer, int tag_slot,
                           double* positive, double* negative) const {
  const int tag = hierarchy_.layer(layer)[tag_slot];
  const bool has_lower_layer = layer + 1 < hierarchy_.num_layers();
  if (mode_ == ForestMode::kFlatTags || !has_lower_layer ||
      !unlabelled_[layer][sample]) {
    const bool labelled = tags_(sample, tag);
    *positive = labelled ? 1.0 : 0.0;
    *negative = labelled ? 0.0 : 1.0;
    return;
  }
  *positive = 0.0;
  *negative = 0.0;
  if (mode_ == ForestMode::kNoCorr) return;
  const SoftTagScores& soft = *soft_[layer];
  const int row = soft.row_of_sample[sample];
  const double pos = soft.positive(row, tag_slot);
  const double neg = soft.negative(row, tag_slot);
  if (pos + neg > 0.0) {
    *positive = pos / (pos + neg);
    *negative = 1.0 - *positive;
  }
}

double GainModel::Gain(std::span<const int> left,
                       std::span<const int> right) const {
  std::vector<int> all(left.begin(), left.end());
  all.insert(all.end(), right.begin(), right.end());
  const std::optional<int> layer = TargetLayer(all);
  if (!layer) return 0.0;
  const int slots = static_cast<int>(hierarchy_.layer(*layer).size());
  ClassMass parent{std::vector<double>(slots), std::vector<double>(slots)};
  ClassMass left_mass = parent;
  ClassMass right_mass = parent;
  auto accumulate = [&](std::span<const int> samples, ClassMass& mass) {
    for (int s : samples) {
      for (int t = 0; t < slots; ++t) {
        double pos, neg;
        SampleMass(s, *layer, t, &pos, &neg);
        mass.positive[t] += pos;
        mass.negative[t] += neg;
        parent.positive[t] += pos;
        parent.negative[t] += neg;
      }
    }
  };
  accumulate(left, left_mass);
  accumulate(right, right_mass);
  double gain = 0.0;
  for (int t = 0; t < slots; ++t) {
    gain += SingleTagGain(parent, left_mass, right_mass, t);
  }
  return gain;
}

int ResolveNuTry(const ForestConfig& config, int num_features) {
  if (config.nu_try > 0) return std::min(config.nu_try, num_features);
  const int root = static_cast<int>(std::floor(std::sqrt(num_features)));
  return std::clamp(root, 1, num_features);
}

std::optional<SplitResult> OptimiseSplit(std::span<const int> samples,
                                         const FeatureMatrix& features,
                                         const GainModel& model, int nu_try,
                                         Rng& rng) {
  const std::optional<int> layer = model.TargetLayer(samples);
  if (!layer) return std::nullopt;
  const int size = static_cast<int>(samples.size());
  const int slots = static_cast<int>(model.hierarchy().layer(*layer).size());

  // Row-major |S| x slots masses, and node totals per slot.
  std::vector<double> positive(static_cast<std::size_t>(size) * slots);
  std::vector<double> negative(positive.size());
  std::vector<double> total_positive(slots, 0.0);
  std::vector<double> total_negative(slots, 0.0);
  for (int r = 0; r < size; ++r) {
    for (int t = 0; t < slots; ++t) {
      const std::size_t at = static_cast<std::size_t>(r) * slots + t;
      model.SampleMass(samples[r], *layer, t, &positive[at], &negative[at]);
      total_positive[t] += positive[at];
      total_negative[t] += negative[at];
    }
  }
  std::vector<double> parent_impurity(slots);
  std::vector<double> parent_mass(slots);
  for (int t = 0; t < slots; ++t) {
    parent_impurity[t] = WeightedImpurity(total_positive[t], total_negative[t]);
    parent_mass[t] = total_positive[t] + total_negative[t];
  }

  const int d = features.num_features();
  const std::vector<int> drawn =
      rng.SampleWithoutReplacement(d, std::min(nu_try, d));

  double best_gain = kGainTolerance;  // bar a candidate must clear
  double best_score = 0.0;
  SplitParams best;
  std::vector<int> order(size);
  std::vector<double> values(size);
  std::vector<double> left_positive(slots);
  std::vector<double> left_negative(slots);
  for (int feature : drawn) {
    for (int r = 0; r < size; ++r) values[r] = features(samples[r], feature);
    for (int r = 0; r < size; ++r) order[r] = r;
    std::sort(order.begin(), order.end(), [&](int a, int b) {
      return values[a] < values[b] || (values[a] == values[b] && a < b);
    });
    std::fill(left_positive.begin(), left_positive.end(), 0.0);
    std::fill(left_negative.begin(), left_negative.end(), 0.0);
    for (int r = 0; r + 1 < size; ++r) {
      const std::size_t base = static_cast<std::size_t>(order[r]) * slots;
      for (int t = 0; t < slots; ++t) {
        left_positive[t] += positive[base + t];
        left_negative[t] += negative[base + t];
      }
      const double low = values[order[r]];
      const double high = values[order[r + 1]];
      if (!(low < high)) continue;
      double gain = 0.0;
      for (int t = 0; t < slots; ++t) {
        if (parent_mass[t] <= kNegligibleMass) continue;
        const double children =
            WeightedImpurity(left_positive[t], left_negative[t]) +
            WeightedImpurity(total_positive[t] - left_positive[t],
                             total_negative[t] - left_negative[t]);
        gain += (parent_impurity[t] - children) / parent_mass[t];
      }
      if (gain > best_gain) {
        best_gain = gain + kGainTolerance;
        best_score = gain;
        best.feature = feature;
        best.threshold = Midpoint(low, high);
      }
    }
  }
  if (best.feature < 0) return std::nullopt;

  SplitResult result;
  result.split = best;
  result.gain = best_score;
  for (int s : samples) {
    if (features(s, best.feature) < best.threshold) {
      result.left.push_back(s);
    } else {
      result.right.push_back(s);
    }
  }
  return result;
}

Tree TrainTree(const FeatureMatrix& features, const GainModel& model,
               const ForestConfig& config, std::uint64_t seed) {
  const int n = features.num_samples();
  const int nu_try = ResolveNuTry(config, features.num_features());
  Rng rng(seed);
  Tree tree;
  struct Pending {
    int node;
    std::vector<int> samples;
  };
  std::vector<Pending> stack;
  std::vector<int> all(n);
  for (int i = 0; i < n; ++i) all[i] = i;
  tree.nodes.emplace_back();
  stack.push_back({0, std::move(all)});

  while (!stack.empty()) {
    Pending job = std::move(stack.back());
    stack.pop_back();
    std::optional<SplitResult> split;
    if (static_cast<int>(job.samples.size()) > config.phi) {
      split = OptimiseSplit(job.samples, features, model, nu_try, rng);
    }
    if (!split) {
      tree.nodes[job.node].samples = std::move(job.samples);
      continue;
    }
    const int left = static_cast<int>(tree.nodes.size());
    tree.nodes.emplace_back();
    tree.nodes.emplace_back();
    TreeNode& node = tree.nodes[job.node];
    node.split = split->split;
    node.left = left;
    node.right = left + 1;
    // Left subtree is grown first.
    stack.push_back({left + 1, std::move(split->right)});
    stack.push_back({left, std::move(split->left)});
  }
  return tree;
}

HmlForest TrainForest(const Dataset& dataset, const ForestConfig& config,
                      std::uint64_t seed, int threads) {
  if (config.tau < 1) throw Error(kModule, "tree count must be positive");
  if (config.phi < 1) throw Error(kModule, "leaf size threshold must be positive");
  if (config.nu_try < 0) throw Error(kModule, "nu_try must be non-negative");
  dataset.Validate();
  const GainModel model(dataset.tags, dataset.hierarchy, config.mode);

  HmlForest forest;
  forest.config = config;
  forest.seed = seed;
  forest.num_samples = dataset.num_samples();
  forest.trees.resize(config.tau);

  std::atomic<int> next{0};
  auto worker = [&] {
    for (int t = next++; t < config.tau; t = next++) {
      forest.trees[t] = TrainTree(dataset.features, model, config,
                                  seed + static_cast<std::uint64_t>(t));
    }
  };
  const int workers = std::min(ResolveThreads(threads), config.tau);
  std::vector<std::thread> pool;
  for (int w = 1; w < workers; ++w) pool.emplace_back(worker);
  worker();
  for (auto& thread : pool) thread.join();
  return forest;
}

void SaveForest(const HmlForest& forest, const std::filesystem::path& path) {
  nlohmann::json trees = nlohmann::json::array();
  for (const Tree& tree : forest.trees) {
    nlohmann::json nodes = nlohmann::json::array();
    for (const TreeNode& node : tree.nodes) {
      if (node.is_leaf()) {
        nodes.push_back({{"leaf", node.samples}});
      } else {
        nodes.push_back({{"f", node.split.feature},
                         {"t", node.split.threshold},
                         {"l", node.left},
                         {"r", node.right}});
      }
    }
    trees.push_back({{"nodes", std::move(nodes)}});
  }
  const nlohmann::json doc = {
      {"format", "hmlrf-forest"},
      {"version", kFormatVersion},
      {"seed", forest.seed},
      {"num_samples", forest.num_samples},
      {"config",
       {{"tau", forest.config.tau},
        {"phi", forest.config.phi},
        {"nu_try", forest.config.nu_try},
        {"mode", std::string(ModeName(forest.config.mode))}}},
      {"trees", std::move(trees)}};
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw Error(kModule, "cannot write " + path.string());
  out << doc.dump() << '\n';
  out.close();
  if (!out) throw Error(kModule, "I/O failure writing " + path.string());
}

HmlForest LoadForest(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(kModule, "cannot open " + path.string());
  HmlForest forest;
  try {
    const nlohmann::json doc = nlohmann::json::parse(in);
    if (doc.at("format") != "hmlrf-forest") {
      throw Error(kModule, path.string() + " is not a forest file");
    }
    if (doc.at("version").get<int>() != kFormatVersion) {
      throw Error(kModule, "unsupported forest format version " +
                               doc.at("version").dump());
    }
    forest.seed = doc.at("seed").get<std::uint64_t>();
    forest.num_samples = doc.at("num_samples").get<int>();
    const auto& config = doc.at("config");
    forest.config.tau = config.at("tau").get<int>();
    forest.config.phi = config.at("phi").get<int>();
    forest.config.nu_try = config.at("nu_try").get<int>();
    forest.config.mode = ParseMode(config.at("mode").get<std::string>());
    for (const auto& tree_doc : doc.at("trees")) {
      Tree tree;
      for (const auto& node_doc : tree_doc.at("nodes")) {
        TreeNode node;
        if (node_doc.contains("leaf")) {
          node.samples = node_doc.at("leaf").get<std::vector<int>>();
        } else {
          node.split.feature = node_doc.at("f").get<int>();
          node.split.threshold = node_doc.at("t").get<double>();
          node.left = node_doc.at("l").get<int>();
          node.right = node_doc.at("r").get<int>();
        }
        tree.nodes.push_back(std::move(node));
      }
      forest.trees.push_back(std::move(tree));
    }
  } catch (const nlohmann::json::exception& e) {
    throw Error(kModule, "malformed forest file " + path.string() + ": " +
                             e.what());
  }
  if (static_cast<int>(forest.trees.size()) != forest.config.tau) {
    throw Error(kModule, "forest file holds " +
                             std::to_string(forest.trees.size()) +
                             " trees, config says " +
                             std::to_string(forest.config.tau));
  }
  return forest;
}

}  // namespace hmlrf
