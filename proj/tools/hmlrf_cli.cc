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

// Command line front end: one subcommand per pipeline stage plus the
// end-to-end `run` and `ablation` drivers.

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "hmlrf/affinity_graph.h"
#include "hmlrf/completion.h"
#include "hmlrf/core_data.h"
#include "hmlrf/error.h"
#include "hmlrf/forest.h"
#include "hmlrf/hierarchy_builder.h"
#include "hmlrf/metrics.h"
#include "hmlrf/pipeline.h"
#include "hmlrf/spectral_clustering.h"
#include "hmlrf/synthetic.h"
#include "hmlrf/tag_stats.h"
#include "json.hpp"

namespace {

using hmlrf::Error;

void WriteText(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw Error("cli", "cannot write " + path);
  out << text;
  out.close();
  if (!out) throw Error("cli", "I/O failure writing " + path);
}

hmlrf::Dataset LoadDatasetDir(const std::string& dir) {
  return hmlrf::LoadDataset(hmlrf::DatasetPaths::FromDirectory(dir));
}

// "3" or "1..5".
std::vector<int> ParseRange(const std::string& text) {
  const auto dots = text.find("..");
  try {
    if (dots == std::string::npos) return {std::stoi(text)};
    const int first = std::stoi(text.substr(0, dots));
    const int last = std::stoi(text.substr(dots + 2));
    if (last < first) throw Error("cli", "empty range '" + text + "'");
    std::vector<int> values;
    for (int v = first; v <= last; ++v) values.push_back(v);
    return values;
  } catch (const std::logic_error&) {
    throw Error("cli", "malformed range '" + text + "'");
  }
}

std::vector<double> ParseGrid(const std::string& text) {
  std::vector<double> grid;
  std::size_t start = 0;
  while (start <= text.size()) {
    const auto comma = text.find(',', start);
    const std::string item = text.substr(
        start, comma == std::string::npos ? std::string::npos : comma - start);
    try {
      grid.push_back(std::stod(item));
    } catch (const std::logic_error&) {
      throw Error("cli", "malformed sparsity grid '" + text + "'");
    }
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  return grid;
}

struct ForestFlags {
  int tau = 1000;
  int phi = 3;
  int nu_try = 0;
  std::string mode = "full";

  void Attach(CLI::App* app) {
    app->add_option("--tau", tau, "Number of trees")->check(CLI::PositiveNumber);
    app->add_option("--phi", phi, "Leaf size threshold")->check(CLI::PositiveNumber);
    app->add_option("--nu-try", nu_try,
                    "Features drawn per node (0: floor(sqrt(d)))")
        ->check(CLI::NonNegativeNumber);
    app->add_option("--mode", mode, "full | flat-tags | no-corr");
  }
  hmlrf::ForestConfig Config() const {
    hmlrf::ForestConfig config;
    config.tau = tau;
    config.phi = phi;
    config.nu_try = nu_try;
    config.mode = hmlrf::ParseMode(mode);
    return config;
  }
};

struct RunFlags {
  ForestFlags forest;
  std::string dataset;
  std::uint64_t seed = 0;
  int kappa = hmlrf::kDefaultKappa;
  int p = 0;
  double sparsity = 0.0;
  std::string method = "am";
  int topn = 3;
  int threads = 1;
  bool build_hierarchy = false;
  int topics = hmlrf::kDefaultTopicCount;
  int layers = 2;

  void Attach(CLI::App* app) {
    forest.Attach(app);
    app->add_option("--dataset", dataset,
                    "Directory with features.csv, tags.csv, hierarchy.json")
        ->required();
    app->add_option("--seed", seed, "Random seed")->required();
    app->add_option("--knn", kappa, "Neighbours kept per sample (kappa)")
        ->check(CLI::PositiveNumber);
    app->add_option("--p", p, "Cluster count (0: number of true clusters)");
    app->add_option("--sparsity", sparsity,
                    "Share of positive tags hidden before training");
    app->add_option("--method", method, "Completion method: ln | gc | am");
    app->add_option("--topn", topn, "Tags recovered per sample")
        ->check(CLI::PositiveNumber);
    app->add_option("--threads", threads, "Worker threads (0: all cores)");
    app->add_flag("--build-hierarchy", build_hierarchy,
                  "Estimate the hierarchy instead of reading hierarchy.json");
    app->add_option("--topics", topics, "Topic clusters for --build-hierarchy");
    app->add_option("--layers", layers, "Layers for --build-hierarchy");
  }
  hmlrf::RunConfig Config() const {
    hmlrf::RunConfig config;
    config.forest = forest.Config();
    config.kappa = kappa;
    config.p = p;
    config.seed = seed;
    config.sparsity = sparsity;
    config.method = hmlrf::ParseMethod(method);
    config.top_n = topn;
    config.threads = threads;
    config.build_hierarchy = build_hierarchy;
    config.topics = topics;
    config.layers = layers;
    return config;
  }
};

// Tag names (column `tag_column`) and the largest sample id (column 0) in a
// headed CSV written by this tool.
void ScanCsv(const std::string& path, std::size_t tag_column,
             std::set<std::string>* names, int* max_sample) {
  std::ifstream in(path);
  if (!in) throw Error("cli", "cannot open " + path);
  std::string line;
  std::getline(in, line);
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::vector<std::string> fields;
    std::stringstream stream(line);
    for (std::string field; std::getline(stream, field, ',');) {
      fields.push_back(field);
    }
    if (fields.size() <= tag_column) {
      throw Error("cli", "malformed row '" + line + "' in " + path);
    }
    names->insert(fields[tag_column]);
    try {
      *max_sample = std::max(*max_sample, std::stoi(fields[0]));
    } catch (const std::logic_error&) {
      throw Error("cli", "malformed sample id '" + fields[0] + "' in " + path);
    }
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Hierarchical multi-label random forests for tagged visual data"};
  app.require_subcommand(1);

  // gen-synthetic
  auto* gen = app.add_subcommand("gen-synthetic",
                                 "Write the planted-structure dataset");
  hmlrf::SyntheticConfig synthetic;
  std::string gen_out;
  std::uint64_t gen_seed = 0;
  bool independent_specific = false;
  gen->add_option("--out", gen_out, "Output directory")->required();
  gen->add_option("--seed", gen_seed, "Random seed")->required();
  gen->add_option("--clusters", synthetic.clusters, "Planted clusters");
  gen->add_option("--samples", synthetic.samples, "Samples");
  gen->add_option("--dims", synthetic.dims, "Feature dimensions");
  gen->add_option("--separation", synthetic.separation,
                  "Centre distance in standard deviations");
  gen->add_option("--specific-per-cluster", synthetic.specific_per_cluster,
                  "Specific tags per cluster");
  gen->add_option("--specific-probability", synthetic.specific_probability,
                  "Within-cluster probability of a specific tag");
  gen->add_flag("--independent-specific", independent_specific,
                "Draw specific tags independently of the features");

  // build-hierarchy
  auto* build = app.add_subcommand("build-hierarchy",
                                   "Estimate a tag hierarchy from flat tags");
  std::string build_tags, build_out;
  int build_layers = 2;
  int build_topics = hmlrf::kDefaultTopicCount;
  std::uint64_t build_seed = 0;
  build->add_option("--tags", build_tags, "Tag CSV")->required();
  build->add_option("--layers", build_layers, "Number of layers")->required();
  build->add_option("--topics", build_topics, "Topic clusters E");
  build->add_option("--seed", build_seed, "Random seed")->required();
  build->add_option("--out", build_out, "Hierarchy JSON")->required();

  // tag-stats
  auto* stats = app.add_subcommand("tag-stats",
                                   "Dump cross-layer tag correlations");
  std::string stats_dataset, stats_out;
  int stats_layer = 0;
  stats->add_option("--dataset", stats_dataset, "Dataset directory")->required();
  stats->add_option("--target-layer", stats_layer, "Target layer (0-based)");
  stats->add_option("--out", stats_out, "Output JSON")->required();

  // train
  auto* train = app.add_subcommand("train", "Train a forest");
  ForestFlags train_flags;
  std::string train_dataset, train_out;
  std::uint64_t train_seed = 0;
  int train_threads = 1;
  train_flags.Attach(train);
  train->add_option("--dataset", train_dataset, "Dataset directory")->required();
  train->add_option("--seed", train_seed, "Random seed")->required();
  train->add_option("--threads", train_threads, "Worker threads (0: all cores)");
  train->add_option("--out", train_out, "Forest JSON")->required();

  // affinity
  auto* affinity = app.add_subcommand("affinity",
                                      "Forest affinity, optionally kappa-NN sparsified");
  std::string affinity_forest, affinity_out, affinity_dense_out;
  int affinity_knn = hmlrf::kDefaultKappa;
  int affinity_threads = 1;
  affinity->add_option("--forest", affinity_forest, "Forest JSON")->required();
  affinity->add_option("--knn", affinity_knn, "Kappa; 0 writes the dense matrix");
  affinity->add_option("--dense-out", affinity_dense_out,
                       "Also write the dense affinity here");
  affinity->add_option("--threads", affinity_threads, "Worker threads");
  affinity->add_option("--out", affinity_out, "Affinity CSV")->required();

  // cluster
  auto* cluster = app.add_subcommand("cluster", "Spectral clustering of an affinity");
  std::string cluster_affinity, cluster_out;
  int cluster_p = 0;
  int cluster_knn = 0;
  std::uint64_t cluster_seed = 0;
  cluster->add_option("--affinity", cluster_affinity, "Affinity CSV")->required();
  cluster->add_option("--p", cluster_p, "Cluster count")->required();
  cluster->add_option("--knn", cluster_knn,
                      "Sparsify with this kappa first (0: use as given)");
  cluster->add_option("--seed", cluster_seed, "Random seed")->required();
  cluster->add_option("--out", cluster_out, "Cluster CSV")->required();

  // complete
  auto* complete = app.add_subcommand("complete", "Recover missing tags");
  std::string complete_dataset, complete_tags, complete_forest, complete_affinity,
      complete_clusters, complete_out, complete_method = "am";
  int complete_topn = 3;
  int complete_knn = hmlrf::kDefaultKappa;
  auto* complete_tags_option =
      complete->add_option("--tags", complete_tags, "Observed tag CSV");
  complete->add_option("--dataset", complete_dataset,
                       "Dataset directory, for its tags.csv")
      ->excludes(complete_tags_option);
  complete->add_option("--forest", complete_forest, "Forest JSON (ln)");
  complete->add_option("--affinity", complete_affinity, "Dense affinity CSV (am)");
  complete->add_option("--clusters", complete_clusters, "Cluster CSV (gc)");
  complete->add_option("--method", complete_method, "ln | gc | am");
  complete->add_option("--topn", complete_topn, "Tags per sample");
  complete->add_option("--knn", complete_knn, "Neighbours for am");
  complete->add_option("--out", complete_out, "Completion CSV")->required();

  // sparsify
  auto* sparsify = app.add_subcommand("sparsify",
                                      "Hide a share of positive tags");
  std::string sparsify_tags, sparsify_out_tags, sparsify_out_removed;
  double sparsify_ratio = 0.0;
  std::uint64_t sparsify_seed = 0;
  sparsify->add_option("--tags", sparsify_tags, "Tag CSV")->required();
  sparsify->add_option("--ratio", sparsify_ratio, "Share removed")->required();
  sparsify->add_option("--seed", sparsify_seed, "Random seed")->required();
  sparsify->add_option("--out-tags", sparsify_out_tags, "Sparsified tag CSV")
      ->required();
  sparsify->add_option("--out-removed", sparsify_out_removed,
                       "Removed pairs CSV")->required();

  // evaluate
  auto* evaluate = app.add_subcommand("evaluate", "Clustering metrics");
  std::string evaluate_pred, evaluate_truth, evaluate_out;
  evaluate->add_option("--pred", evaluate_pred, "Predicted cluster CSV")->required();
  evaluate->add_option("--truth", evaluate_truth, "True label CSV")->required();
  evaluate->add_option("--out", evaluate_out, "Metrics JSON")->required();

  // evaluate-completion
  auto* evaluate_completion =
      app.add_subcommand("evaluate-completion", "Tag completion metrics");
  std::string ec_recovered, ec_truth, ec_tags, ec_out, ec_n = "1..5";
  evaluate_completion->add_option("--recovered", ec_recovered, "Completion CSV")
      ->required();
  evaluate_completion->add_option("--truth", ec_truth, "Held-out pairs CSV")
      ->required();
  evaluate_completion->add_option(
      "--tags", ec_tags,
      "Observed tag CSV (default: vocabulary and sample count from the inputs)");
  evaluate_completion->add_option("--n", ec_n, "N or range a..b");
  evaluate_completion->add_option("--out", ec_out, "Metrics JSON")->required();

  // run
  auto* run = app.add_subcommand("run", "Full pipeline with every artifact");
  RunFlags run_flags;
  std::string run_out;
  run_flags.Attach(run);
  run->add_option("--out", run_out, "Output directory")->required();

  // ablation
  auto* ablation = app.add_subcommand("ablation",
                                      "NMI over modes x sparsity x repeats");
  RunFlags ablation_flags;
  std::string ablation_grid = "0,0.1,0.2,0.3,0.4,0.5", ablation_out;
  int ablation_repeats = 5;
  int ablation_jobs = 1;
  ablation_flags.Attach(ablation);
  ablation->add_option("--grid", ablation_grid, "Comma-separated sparsity ratios");
  ablation->add_option("--repeats", ablation_repeats, "Seeds per cell");
  ablation->add_option("--jobs", ablation_jobs, "Grid cells run in parallel");
  ablation->add_option("--out", ablation_out, "Report CSV")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (*gen) {
      synthetic.visually_grounded_specific_tags = !independent_specific;
      hmlrf::SaveDataset(hmlrf::GenerateSynthetic(synthetic, gen_seed), gen_out);
    } else if (*build) {
      const hmlrf::TagMatrix tags = hmlrf::LoadTags(build_tags);
      hmlrf::SaveHierarchy(
          hmlrf::BuildHierarchy(tags, build_topics, build_layers, build_seed),
          tags.tag_names(), build_out);
    } else if (*stats) {
      const hmlrf::Dataset dataset = LoadDatasetDir(stats_dataset);
      const auto tables = hmlrf::ComputeCorrelations(
          dataset.tags, dataset.hierarchy, stats_layer);
      WriteText(stats_out, hmlrf::CorrelationsJson(dataset.tags, tables));
    } else if (*train) {
      const hmlrf::Dataset dataset = LoadDatasetDir(train_dataset);
      hmlrf::SaveForest(hmlrf::TrainForest(dataset, train_flags.Config(),
                                           train_seed, train_threads),
                        train_out);
    } else if (*affinity) {
      const hmlrf::HmlForest forest = hmlrf::LoadForest(affinity_forest);
      const hmlrf::Matrix dense = hmlrf::ForestAffinity(forest, affinity_threads);
      if (!affinity_dense_out.empty()) hmlrf::SaveMatrix(dense, affinity_dense_out);
      hmlrf::SaveMatrix(
          affinity_knn > 0 ? hmlrf::KnnSparsify(dense, affinity_knn) : dense,
          affinity_out);
    } else if (*cluster) {
      hmlrf::Matrix matrix = hmlrf::LoadMatrix(cluster_affinity);
      if (cluster_knn > 0) matrix = hmlrf::KnnSparsify(matrix, cluster_knn);
      const hmlrf::SpectralEmbedding embedding = hmlrf::TopEigenvectors(
          hmlrf::NormalizeAffinity(matrix), cluster_p);
      hmlrf::SaveLabels(
          hmlrf::ClusterEmbedding(embedding, cluster_p, cluster_seed).assignment,
          cluster_out);
    } else if (*complete) {
      if (complete_tags.empty() && complete_dataset.empty()) {
        throw Error("cli", "complete needs --tags or --dataset");
      }
      const hmlrf::TagMatrix observed = hmlrf::LoadTags(
          complete_tags.empty()
              ? hmlrf::DatasetPaths::FromDirectory(complete_dataset).tags
              : std::filesystem::path(complete_tags));
      const hmlrf::CompletionMethod method = hmlrf::ParseMethod(complete_method);
      std::optional<hmlrf::HmlForest> forest;
      std::optional<hmlrf::LeafIndex> leaves;
      std::optional<hmlrf::Clustering> clustering;
      std::optional<hmlrf::Matrix> matrix;
      hmlrf::CompletionInputs inputs;
      inputs.kappa = complete_knn;
      if (method == hmlrf::CompletionMethod::kLocalNeighbourhoods) {
        if (complete_forest.empty()) throw Error("cli", "ln needs --forest");
        forest = hmlrf::LoadForest(complete_forest);
        if (forest->num_samples != observed.num_samples()) {
          throw Error("cli", complete_forest + " was trained on " +
                                 std::to_string(forest->num_samples) +
                                 " samples, the tags have " +
                                 std::to_string(observed.num_samples()));
        }
        leaves.emplace(*forest);
        inputs.leaves = &*leaves;
      } else if (method == hmlrf::CompletionMethod::kGlobalClusters) {
        if (complete_clusters.empty()) throw Error("cli", "gc needs --clusters");
        clustering.emplace();
        clustering->assignment = hmlrf::LoadLabels(complete_clusters);
        for (int c : clustering->assignment) {
          if (c < 0) throw Error("cli", "cluster ids must be non-negative");
          clustering->num_clusters = std::max(clustering->num_clusters, c + 1);
        }
        inputs.clustering = &*clustering;
      } else {
        if (complete_affinity.empty()) throw Error("cli", "am needs --affinity");
        matrix = hmlrf::LoadMatrix(complete_affinity);
        inputs.affinity = &*matrix;
      }
      const hmlrf::CompletionScores scores =
          hmlrf::ScoreCompletion(method, inputs, observed);
      std::vector<std::vector<int>> recovered;
      for (int s = 0; s < observed.num_samples(); ++s) {
        recovered.push_back(hmlrf::RecoverTopN(scores, s, complete_topn));
      }
      hmlrf::SaveCompletion(scores, recovered, complete_out);
    } else if (*sparsify) {
      const hmlrf::TagMatrix tags = hmlrf::LoadTags(sparsify_tags);
      const hmlrf::SparsifiedTags sparse =
          hmlrf::SimulateSparsity(tags, sparsify_ratio, sparsify_seed);
      hmlrf::SaveTags(sparse.tags, sparsify_out_tags);
      hmlrf::SaveHeldOut(sparse.removed, tags.tag_names(), sparsify_out_removed);
    } else if (*evaluate) {
      const std::vector<int> pred = hmlrf::LoadLabels(evaluate_pred);
      const std::vector<int> truth = hmlrf::LoadLabels(evaluate_truth);
      const hmlrf::ClusteringMetrics m = hmlrf::EvaluateClustering(pred, truth);
      nlohmann::ordered_json doc;
      doc["purity"] = m.purity;
      doc["nmi"] = m.nmi;
      doc["ri"] = m.rand_index;
      doc["ari"] = m.adjusted_rand;
      doc["f1"] = m.f1;
      WriteText(evaluate_out, doc.dump(2) + "\n");
    } else if (*evaluate_completion) {
      hmlrf::CompletionTruth truth;
      std::vector<std::vector<int>> recovered;
      if (!ec_tags.empty()) {
        const hmlrf::TagMatrix observed = hmlrf::LoadTags(ec_tags);
        truth = hmlrf::MakeCompletionTruth(
            observed, hmlrf::LoadHeldOut(ec_truth, observed.tag_names()));
        recovered = hmlrf::LoadCompletion(ec_recovered, observed.num_samples(),
                                          observed.tag_names());
      } else {
        std::set<std::string> vocabulary;
        int max_sample = -1;
        ScanCsv(ec_truth, 1, &vocabulary, &max_sample);
        ScanCsv(ec_recovered, 2, &vocabulary, &max_sample);
        const std::vector<std::string> names(vocabulary.begin(),
                                             vocabulary.end());
        const int n = max_sample + 1;
        truth.missing.resize(n);
        truth.observed.resize(n);
        for (const auto& [s, j] : hmlrf::LoadHeldOut(ec_truth, names)) {
          if (s < 0) throw Error("cli", "negative sample id in " + ec_truth);
          truth.missing[s].push_back(j);
        }
        recovered = hmlrf::LoadCompletion(ec_recovered, n, names);
      }
      nlohmann::ordered_json doc;
      for (int n : ParseRange(ec_n)) {
        const hmlrf::CompletionMetrics m =
            hmlrf::EvaluateCompletion(recovered, truth, n);
        const std::string suffix = "@" + std::to_string(n);
        doc["ap" + suffix] = m.average_precision;
        doc["ar" + suffix] = m.average_recall;
        doc["coverage" + suffix] = m.coverage;
      }
      WriteText(ec_out, doc.dump(2) + "\n");
    } else if (*run) {
      const hmlrf::Dataset dataset = LoadDatasetDir(run_flags.dataset);
      const hmlrf::RunConfig config = run_flags.Config();
      hmlrf::WritePipelineArtifacts(hmlrf::RunPipeline(dataset, config), config,
                                    run_out);
    } else if (*ablation) {
      const hmlrf::Dataset dataset = LoadDatasetDir(ablation_flags.dataset);
      hmlrf::SaveAblationReport(
          hmlrf::RunAblation(dataset, ablation_flags.Config(),
                             ParseGrid(ablation_grid), ablation_repeats,
                             ablation_jobs),
          ablation_out);
    }
  } catch (const Error& e) {
    std::cerr << "error: " << e.module() << ": " << e.cause() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
