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

// Acceptance suite: one PASS/FAIL line per criterion, tolerances pinned
// below. Exits non-zero if any criterion fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <numeric>
#include <sstream>
#include <string>
#include <vector>

#include "hmlrf/affinity_graph.h"
#include "hmlrf/completion.h"
#include "hmlrf/core_data.h"
#include "hmlrf/forest.h"
#include "hmlrf/metrics.h"
#include "hmlrf/pipeline.h"
#include "hmlrf/spectral_clustering.h"
#include "hmlrf/synthetic.h"
#include "hmlrf/tag_stats.h"
#include "oracles.h"

namespace hmlrf {
namespace {

namespace fs = std::filesystem;

constexpr double kSplitGainTolerance = 1e-9;
constexpr double kSplitRuntimeSeconds = 10.0;
constexpr double kMetricTolerance = 1e-12;
constexpr double kEigenResidual = 1e-8;
constexpr double kPlantedNmi = 0.90;
constexpr double kPlantedRuntimeSeconds = 60.0;
constexpr double kCompletionAp1 = 0.80;
constexpr double kCompletionCoverage3 = 0.90;
constexpr int kPlantedSeeds = 5;

struct Outcome {
  bool pass = true;
  std::string detail;
};

double Seconds(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
      .count();
}

std::string Fixed(double value, int digits = 4) {
  char buffer[64];
  std::snprintf(buffer, sizeof buffer, "%.*f", digits, value);
  return buffer;
}

std::string Sci(double value) {
  char buffer[64];
  std::snprintf(buffer, sizeof buffer, "%.2e", value);
  return buffer;
}

double Mean(const std::vector<double>& values) {
  return std::accumulate(values.begin(), values.end(), 0.0) / values.size();
}

std::string List(const std::vector<double>& values) {
  std::string out = "[";
  for (std::size_t i = 0; i < values.size(); ++i) {
    out += (i ? " " : "") + Fixed(values[i], 3);
  }
  return out + "]";
}

// ---- Criterion 1 -----------------------------------------------------------

Outcome SplitOracle() {
  const auto start = std::chrono::steady_clock::now();
  Rng rng(101);
  double worst = 0.0;
  int splits = 0;
  for (int trial = 0; trial < 1000; ++trial) {
    const int n = 2 + static_cast<int>(rng.UniformIndex(11));
    const int m = 2 + static_cast<int>(rng.UniformIndex(5));
    const FeatureMatrix features = oracle::RandomFeatures(rng, n, 3, 5);
    const TagMatrix tags = oracle::RandomTags(rng, n, m, 0.4);
    const TagHierarchy hierarchy = oracle::RandomHierarchy(rng, m, 2);
    const GainModel model(tags, hierarchy, ForestMode::kFull);
    const int size = 2 + static_cast<int>(rng.UniformIndex(std::min(n, 8) - 1));
    std::vector<int> node = rng.SampleWithoutReplacement(n, size);
    std::sort(node.begin(), node.end());
    Rng split_rng(trial);
    const auto split = OptimiseSplit(node, features, model, 3, split_rng);
    const double got = split ? split->gain : 0.0;
    const double expected =
        oracle::BestGain(features, tags, hierarchy, ForestMode::kFull, node);
    worst = std::max(worst, std::abs(got - expected));
    splits += split.has_value();
  }
  const double elapsed = Seconds(start);
  Outcome o;
  o.pass = worst <= kSplitGainTolerance && elapsed < kSplitRuntimeSeconds;
  o.detail = "1000 nodes (" + std::to_string(splits) +
             " split), max |gain - brute force| = " + Sci(worst) + " (tol " +
             Sci(kSplitGainTolerance) + "), " + Fixed(elapsed, 2) + " s (< " +
             Fixed(kSplitRuntimeSeconds, 0) + " s)";
  return o;
}

// ---- Criterion 2 -----------------------------------------------------------

Outcome SingleLayerReduction() {
  Rng rng(202);
  int identical = 0;
  int nodes = 0;
  for (int trial = 0; trial < 100; ++trial) {
    const int n = 5 + static_cast<int>(rng.UniformIndex(36));
    const int d = 1 + static_cast<int>(rng.UniformIndex(5));
    const int m = 1 + static_cast<int>(rng.UniformIndex(6));
    Dataset dataset;
    dataset.features = oracle::RandomFeatures(rng, n, d, 6);
    dataset.tags = oracle::RandomTags(rng, n, m, 0.35);
    dataset.hierarchy = TagHierarchy::Flat(m);
    ForestConfig config;
    config.tau = 3;
    config.phi = 1 + static_cast<int>(rng.UniformIndex(3));
    config.mode = ForestMode::kFull;
    const HmlForest full = TrainForest(dataset, config, trial);
    config.mode = ForestMode::kFlatTags;
    const HmlForest flat = TrainForest(dataset, config, trial);
    identical += full.trees == flat.trees;
    for (const Tree& tree : full.trees) nodes += tree.nodes.size();
  }
  Outcome o;
  o.pass = identical == 100;
  o.detail = std::to_string(identical) + "/100 datasets with node-identical " +
             "full and flat-tags forests (" + std::to_string(nodes) +
             " nodes compared)";
  return o;
}

// ---- Criterion 3 -----------------------------------------------------------

Outcome TagStatsOracle() {
  Rng rng(303);
  long long mismatches = 0;
  long long compared = 0;
  for (int trial = 0; trial < 1000; ++trial) {
    const int n = 1 + static_cast<int>(rng.UniformIndex(20));
    const int m = 2 + static_cast<int>(rng.UniformIndex(7));
    const int layers =
        2 + static_cast<int>(rng.UniformIndex(std::min(m, 4) - 1));
    const TagMatrix tags = oracle::RandomTags(rng, n, m, rng.UniformDouble());
    const TagHierarchy hierarchy = oracle::RandomHierarchy(rng, m, layers);
    for (int k = 0; k + 1 < layers; ++k) {
      const CorrelationTables corr = ComputeCorrelations(tags, hierarchy, k);
      for (std::size_t r = 0; r < corr.target_tags.size(); ++r) {
        for (std::size_t c = 0; c < corr.subordinate_tags.size(); ++c) {
          const int i = corr.target_tags[r];
          const int j = corr.subordinate_tags[c];
          mismatches += corr.cooccurrence(r, c) != oracle::Cooccurrence(tags, i, j);
          mismatches +=
              corr.mutual_exclusion(r, c) != oracle::MutualExclusion(tags, i, j);
          compared += 2;
        }
      }
      const SoftTagScores soft = ComputeSoftScores(tags, hierarchy, corr);
      const oracle::Soft expected = oracle::SoftScores(tags, hierarchy, k);
      for (int s = 0; s < n; ++s) {
        if (soft.IsMissing(s) == expected.positive[s].empty()) ++mismatches;
        if (!soft.IsMissing(s)) continue;
        for (std::size_t t = 0; t < soft.target_tags.size(); ++t) {
          const int row = soft.row_of_sample[s];
          mismatches += soft.positive(row, t) != expected.positive[s][t];
          mismatches += soft.negative(row, t) != expected.negative[s][t];
          compared += 2;
        }
      }
    }
  }
  Outcome o;
  o.pass = mismatches == 0;
  o.detail = std::to_string(compared) + " correlation/soft-score values, " +
             std::to_string(mismatches) + " differ from direct counting (exact)";
  return o;
}

// ---- Criterion 4 -----------------------------------------------------------

Outcome PartitionMetricOracle() {
  Rng rng(404);
  double worst = 0.0;
  for (int trial = 0; trial < 1000; ++trial) {
    const int n = 2 + static_cast<int>(rng.UniformIndex(9));
    const auto pred =
        oracle::RandomLabels(rng, n, 1 + static_cast<int>(rng.UniformIndex(n)));
    const auto truth =
        oracle::RandomLabels(rng, n, 1 + static_cast<int>(rng.UniformIndex(n)));
    const ClusteringMetrics m = EvaluateClustering(pred, truth);
    worst = std::max({worst, std::abs(m.purity - oracle::Purity(pred, truth)),
                      std::abs(m.nmi - oracle::Nmi(pred, truth)),
                      std::abs(m.rand_index - oracle::RandIndex(pred, truth)),
                      std::abs(m.adjusted_rand - oracle::AdjustedRand(pred, truth)),
                      std::abs(m.f1 - oracle::PairF1(pred, truth))});
  }
  Outcome o;
  o.pass = worst <= kMetricTolerance;
  o.detail = "1000 partitions, max |metric - oracle| = " + Sci(worst) +
             " (tol " + Sci(kMetricTolerance) + ")";
  return o;
}

// ---- Criterion 5 -----------------------------------------------------------

double MaxResidual(const Matrix& s, const SpectralEmbedding& e) {
  double worst = 0.0;
  const int n = s.rows();
  for (std::size_t k = 0; k < e.eigenvalues.size(); ++k) {
    double norm = 0.0;
    for (int i = 0; i < n; ++i) {
      double sv = 0.0;
      for (int j = 0; j < n; ++j) sv += s(i, j) * e.eigenvectors(j, k);
      const double r = sv - e.eigenvalues[k] * e.eigenvectors(i, k);
      norm += r * r;
    }
    worst = std::max(worst, std::sqrt(norm));
  }
  return worst;
}

Outcome AffinityInvariants() {
  Rng rng(505);
  int forests = 0;
  int violations = 0;
  double worst_residual = 0.0;
  auto check = [&](const HmlForest& forest, int p, int kappa) {
    ++forests;
    const Matrix a = ForestAffinity(forest);
    for (int i = 0; i < a.rows(); ++i) {
      violations += a(i, i) != 1.0;
      for (int j = 0; j < a.cols(); ++j) {
        violations += a(i, j) != a(j, i) || a(i, j) < 0.0 || a(i, j) > 1.0;
      }
    }
    const Matrix s = NormalizeAffinity(KnnSparsify(a, kappa));
    worst_residual = std::max(worst_residual, MaxResidual(s, TopEigenvectors(s, p)));
  };
  for (int trial = 0; trial < 20; ++trial) {
    const int n = 10 + static_cast<int>(rng.UniformIndex(60));
    Dataset d;
    d.features = oracle::RandomFeatures(rng, n, 4, 20);
    d.tags = oracle::RandomTags(rng, n, 6, 0.3);
    d.hierarchy = oracle::RandomHierarchy(rng, 6, 2);
    ForestConfig config;
    config.tau = 10;
    config.mode = static_cast<ForestMode>(trial % 3);
    check(TrainForest(d, config, trial), 3, std::min(n - 1, 20));
  }
  for (std::uint64_t seed = 1; seed <= 2; ++seed) {
    const Dataset d = GenerateSynthetic(SyntheticConfig{}, seed);
    ForestConfig config;
    config.tau = 50;
    check(TrainForest(d, config, seed), 4, 20);
  }

  // Block-diagonal affinities with p blocks.
  int exact = 0;
  const int blocks_trials = 50;
  for (int trial = 0; trial < blocks_trials; ++trial) {
    const int p = 2 + static_cast<int>(rng.UniformIndex(5));
    std::vector<int> labels;
    for (int b = 0; b < p; ++b) {
      labels.insert(labels.end(), 2 + rng.UniformIndex(15), b);
    }
    const int n = static_cast<int>(labels.size());
    Matrix a(n, n, 0.0);
    for (int i = 0; i < n; ++i) {
      a(i, i) = 1.0;
      for (int j = i + 1; j < n; ++j) {
        if (labels[i] == labels[j]) {
          a(i, j) = a(j, i) = 0.2 + 0.8 * rng.UniformDouble();
        }
      }
    }
    const Clustering c = ClusterAffinity(a, p, std::min(n - 1, 20), trial);
    exact += NormalizedMutualInformation(c.assignment, labels) == 1.0;
  }
  Outcome o;
  o.pass = violations == 0 && worst_residual <= kEigenResidual &&
           exact == blocks_trials;
  o.detail = std::to_string(forests) + " forests, " + std::to_string(violations) +
             " symmetry/diagonal/range violations, max eigen-residual " +
             Sci(worst_residual) + " (tol " + Sci(kEigenResidual) + "); " +
             std::to_string(exact) + "/" + std::to_string(blocks_trials) +
             " block-diagonal affinities with NMI = 1";
  return o;
}

// ---- Planted structure (criteria 6-9) ---------------------------------------

RunConfig PlantedRun(std::uint64_t seed, double sparsity, ForestMode mode) {
  RunConfig config;
  config.forest.tau = 200;
  config.forest.phi = 3;
  config.forest.mode = mode;
  config.kappa = 20;
  config.p = 4;
  config.seed = seed;
  config.sparsity = sparsity;
  config.complete = false;
  return config;
}

struct PlantedRuns {
  std::vector<double> nmi_full_30, nmi_full_0, nmi_full_50, nmi_flat_0;
  double slowest_30 = 0.0;
};

PlantedRuns RunPlanted() {
  PlantedRuns runs;
  for (int s = 1; s <= kPlantedSeeds; ++s) {
    const Dataset d = GenerateSynthetic(SyntheticConfig{}, s);
    const auto start = std::chrono::steady_clock::now();
    runs.nmi_full_30.push_back(
        RunPipeline(d, PlantedRun(s, 0.3, ForestMode::kFull)).clustering_metrics->nmi);
    runs.slowest_30 = std::max(runs.slowest_30, Seconds(start));
    runs.nmi_full_0.push_back(
        RunPipeline(d, PlantedRun(s, 0.0, ForestMode::kFull)).clustering_metrics->nmi);
    runs.nmi_full_50.push_back(
        RunPipeline(d, PlantedRun(s, 0.5, ForestMode::kFull)).clustering_metrics->nmi);
    runs.nmi_flat_0.push_back(
        RunPipeline(d, PlantedRun(s, 0.0, ForestMode::kFlatTags))
            .clustering_metrics->nmi);
  }
  return runs;
}

Outcome PlantedClustering(const PlantedRuns& runs) {
  const double mean = Mean(runs.nmi_full_30);
  Outcome o;
  o.pass = mean >= kPlantedNmi && runs.slowest_30 < kPlantedRuntimeSeconds;
  o.detail = "mean NMI at 30% sparsity " + Fixed(mean) + " (>= " +
             Fixed(kPlantedNmi, 2) + ") over seeds " + List(runs.nmi_full_30) +
             ", slowest run " + Fixed(runs.slowest_30, 2) + " s (< " +
             Fixed(kPlantedRuntimeSeconds, 0) + " s)";
  return o;
}

Outcome DegradationTrend(const PlantedRuns& runs) {
  const double at0 = Mean(runs.nmi_full_0);
  const double at50 = Mean(runs.nmi_full_50);
  Outcome o;
  o.pass = at0 >= at50;
  o.detail = "mean NMI 0% = " + Fixed(at0) + " >= 50% = " + Fixed(at50) +
             " (0%: " + List(runs.nmi_full_0) + ", 50%: " +
             List(runs.nmi_full_50) + ")";
  return o;
}

Outcome AblationOrdering(const PlantedRuns& runs) {
  const double full = Mean(runs.nmi_full_0);
  const double flat = Mean(runs.nmi_flat_0);
  Outcome o;
  o.pass = full >= flat;
  o.detail = "mean NMI at 0%: full = " + Fixed(full) + " >= flat-tags = " +
             Fixed(flat) + " (flat-tags: " + List(runs.nmi_flat_0) + ")";
  return o;
}

Outcome PlantedCompletion() {
  std::vector<double> ap1, coverage3;
  for (int s = 1; s <= kPlantedSeeds; ++s) {
    const Dataset d = GenerateSynthetic(SyntheticConfig{}, s);
    RunConfig config = PlantedRun(s, 0.4, ForestMode::kFull);
    config.complete = true;
    config.method = CompletionMethod::kAffinityMeasure;
    const PipelineResult r = RunPipeline(d, config);
    const CompletionTruth truth = MakeCompletionTruth(r.observed, r.held_out);
    ap1.push_back(EvaluateCompletion(r.recovered, truth, 1).average_precision);
    coverage3.push_back(EvaluateCompletion(r.recovered, truth, 3).coverage);
  }

  // Brute-force agreement of the three scoring rules on small instances.
  Rng rng(909);
  long long mismatches = 0;
  long long compared = 0;
  for (int trial = 0; trial < 100; ++trial) {
    const int n = 4 + static_cast<int>(rng.UniformIndex(27));
    const int m = 1 + static_cast<int>(rng.UniformIndex(6));
    Dataset d;
    d.features = oracle::RandomFeatures(rng, n, 3, 6);
    d.tags = oracle::RandomTags(rng, n, m, 0.4);
    d.hierarchy = TagHierarchy::Flat(m);
    ForestConfig config;
    config.tau = 1 + static_cast<int>(rng.UniformIndex(5));
    const HmlForest forest = TrainForest(d, config, trial);
    const LeafIndex leaves(forest);
    const Matrix affinity = ForestAffinity(forest);
    const int p = 1 + static_cast<int>(rng.UniformIndex(4));
    const Clustering clustering{p, oracle::RandomLabels(rng, n, p)};
    const int kappa = 1 + static_cast<int>(rng.UniformIndex(n - 1));
    const CompletionInputs inputs{&leaves, &clustering, &affinity, kappa};
    const auto ln =
        ScoreCompletion(CompletionMethod::kLocalNeighbourhoods, inputs, d.tags);
    const auto gc =
        ScoreCompletion(CompletionMethod::kGlobalClusters, inputs, d.tags);
    const auto am =
        ScoreCompletion(CompletionMethod::kAffinityMeasure, inputs, d.tags);
    for (int s = 0; s < n; ++s) {
      for (int j = 0; j < m; ++j) {
        mismatches += ln.scores(s, j) != oracle::CompleteLn(forest, d.tags, s, j);
        mismatches += gc.scores(s, j) !=
                      oracle::CompleteGc(clustering.assignment, d.tags, s, j);
        mismatches += am.scores(s, j) !=
                      oracle::CompleteAm(affinity, d.tags, s, j, kappa);
        compared += 3;
      }
    }
  }
  const double mean_ap = Mean(ap1);
  const double mean_coverage = Mean(coverage3);
  Outcome o;
  o.pass = mean_ap >= kCompletionAp1 && mean_coverage >= kCompletionCoverage3 &&
           mismatches == 0;
  o.detail = "AM at 40% sparsity: mean AP@1 " + Fixed(mean_ap) + " (>= " +
             Fixed(kCompletionAp1, 2) + ") " + List(ap1) + ", mean Coverage@3 " +
             Fixed(mean_coverage) + " (>= " + Fixed(kCompletionCoverage3, 2) +
             ") " + List(coverage3) + "; LN/GC/AM vs brute force: " +
             std::to_string(mismatches) + "/" + std::to_string(compared) +
             " differ (exact)";
  return o;
}

// ---- Criterion 10 ----------------------------------------------------------

std::string ReadFile(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::stringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

Outcome Determinism() {
  const Dataset d = GenerateSynthetic(SyntheticConfig{}, 11);
  RunConfig config;
  config.forest.tau = 200;
  config.kappa = 20;
  config.seed = 11;
  config.sparsity = 0.3;
  const fs::path base = fs::temp_directory_path() / "hmlrf_acceptance_runs";
  fs::remove_all(base);
  const std::vector<int> threads{1, 1, 4};
  for (std::size_t r = 0; r < threads.size(); ++r) {
    config.threads = threads[r];
    WritePipelineArtifacts(RunPipeline(d, config), config,
                           base / ("run" + std::to_string(r)));
  }
  int files = 0;
  int differing = 0;
  for (const auto& entry : fs::directory_iterator(base / "run0")) {
    const std::string name = entry.path().filename().string();
    const std::string reference = ReadFile(entry.path());
    ++files;
    differing += ReadFile(base / "run1" / name) != reference ||
                 ReadFile(base / "run2" / name) != reference;
  }
  fs::remove_all(base);
  Outcome o;
  o.pass = files >= 8 && differing == 0;
  o.detail = std::to_string(files) +
             " artifacts compared over runs with threads 1, 1, 4; " +
             std::to_string(differing) + " differ";
  return o;
}

}  // namespace
}  // namespace hmlrf

int main() {
  using hmlrf::Outcome;
  int failures = 0;
  auto report = [&](int number, const std::string& name,
                    const std::function<Outcome()>& check) {
    Outcome outcome;
    try {
      outcome = check();
    } catch (const std::exception& e) {
      outcome = {false, std::string("exception: ") + e.what()};
    }
    failures += !outcome.pass;
    std::printf("[%s] criterion %d (%s): %s\n", outcome.pass ? "PASS" : "FAIL",
                number, name.c_str(), outcome.detail.c_str());
    std::fflush(stdout);
  };
  report(1, "split optimisation oracle", hmlrf::SplitOracle);
  report(2, "single-layer reduction", hmlrf::SingleLayerReduction);
  report(3, "tag statistics oracle", hmlrf::TagStatsOracle);
  report(4, "partition metric oracle", hmlrf::PartitionMetricOracle);
  report(5, "affinity invariants", hmlrf::AffinityInvariants);
  hmlrf::PlantedRuns runs;
  try {
    runs = hmlrf::RunPlanted();
  } catch (const std::exception& e) {
    std::printf("planted runs failed: %s\n", e.what());
  }
  report(6, "planted-structure clustering",
         [&] { return hmlrf::PlantedClustering(runs); });
  report(7, "degradation trend", [&] { return hmlrf::DegradationTrend(runs); });
  report(8, "ablation ordering", [&] { return hmlrf::AblationOrdering(runs); });
  report(9, "planted completion", hmlrf::PlantedCompletion);
  report(10, "determinism", hmlrf::Determinism);
  std::printf("%d of 10 criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
