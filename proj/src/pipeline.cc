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

#include "hmlrf/pipeline.h"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <fstream>
#include <set>
#include <sstream>
#include <thread>

#include "hmlrf/affinity_graph.h"
#include "hmlrf/error.h"
#include "hmlrf/hierarchy_builder.h"
#include "hmlrf/random.h"
#include "json.hpp"

namespace hmlrf {
namespace {

constexpr char kModule[] = "pipeline";

int TagIndexOrThrow(const std::vector<std::string>& names,
                    const std::string& name) {
  for (int j = 0; j < static_cast<int>(names.size()); ++j) {
    if (names[j] == name) return j;
  }
  throw Error(kModule, "unknown tag '" + name + "'");
}

std::vector<std::string> SplitCsvLine(const std::string& line) {
  std::vector<std::string> fields;
  std::stringstream stream(line);
  std::string field;
  while (std::getline(stream, field, ',')) {
    while (!field.empty() && (field.back() == '\r' || field.back() == ' ')) {
      field.pop_back();
    }
    fields.push_back(field);
  }
  return fields;
}

int ParseIntField(const std::string& field, const std::filesystem::path& path) {
  int value = 0;
  const auto [ptr, ec] =
      std::from_chars(field.data(), field.data() + field.size(), value);
  if (ec != std::errc() || ptr != field.data() + field.size() || field.empty()) {
    throw Error(kModule, "malformed integer '" + field + "' in " + path.string());
  }
  return value;
}

}  // namespace

PipelineResult RunPipeline(const Dataset& dataset, const RunConfig& config) {
  dataset.Validate();
  PipelineResult result;

  if (config.sparsity > 0.0) {
    SparsifiedTags sparse = SimulateSparsity(dataset.tags, config.sparsity,
                                             DeriveSeed(config.seed, 1));
    result.observed = std::move(sparse.tags);
    result.held_out = std::move(sparse.removed);
  } else {
    result.observed = dataset.tags;
    if (dataset.ground_truth_tags) {
      for (int s = 0; s < dataset.num_samples(); ++s) {
        for (int j = 0; j < dataset.num_tags(); ++j) {
          if ((*dataset.ground_truth_tags)(s, j) && !result.observed(s, j)) {
            result.held_out.emplace_back(s, j);
          }
        }
      }
    }
  }

  result.hierarchy =
      config.build_hierarchy
          ? BuildHierarchy(result.observed, config.topics, config.layers,
                           DeriveSeed(config.seed, 2))
          : dataset.hierarchy;

  int p = config.p;
  if (p <= 0) {
    if (!dataset.ground_truth_clusters) {
      throw Error(kModule, "cluster count p is required without ground truth");
    }
    p = static_cast<int>(std::set<int>(dataset.ground_truth_clusters->begin(),
                                       dataset.ground_truth_clusters->end())
                             .size());
  }

  Dataset training{dataset.features, result.observed, result.hierarchy,
                   std::nullopt, std::nullopt};
  result.forest = TrainForest(training, config.forest, config.seed, config.threads);
  result.affinity = ForestAffinity(result.forest, config.threads);
  result.clustering = ClusterAffinity(result.affinity, p, config.kappa,
                                      DeriveSeed(config.seed, 3));
  if (dataset.ground_truth_clusters) {
    result.clustering_metrics = EvaluateClustering(
        result.clustering.assignment, *dataset.ground_truth_clusters);
  }

  if (config.complete) {
    const LeafIndex leaves(result.forest);
    CompletionInputs inputs;
    inputs.leaves = &leaves;
    inputs.clustering = &result.clustering;
    inputs.affinity = &result.affinity;
    inputs.kappa = config.kappa;
    result.completion = ScoreCompletion(config.method, inputs, result.observed);
    for (int s = 0; s < dataset.num_samples(); ++s) {
      result.recovered.push_back(RecoverTopN(*result.completion, s, config.top_n));
    }
    if (!result.held_out.empty()) {
      result.completion_metrics =
          EvaluateCompletion(result.recovered,
                             MakeCompletionTruth(result.observed, result.held_out),
                             config.top_n);
    }
  }
  return result;
}

std::string CorrelationsJson(const TagMatrix& tags, const CorrelationTables& tables) {
  auto names = [&](const std::vector<int>& indices) {
    std::vector<std::string> out;
    for (int j : indices) out.push_back(tags.tag_names()[j]);
    return out;
  };
  auto rows = [](const Matrix& m) {
    std::vector<std::vector<double>> out;
    for (int r = 0; r < m.rows(); ++r) {
      out.emplace_back(m.row(r).begin(), m.row(r).end());
    }
    return out;
  };
  nlohmann::ordered_json doc;
  doc["target_layer"] = tables.target_layer;
  doc["target_tags"] = names(tables.target_tags);
  doc["subordinate_tags"] = names(tables.subordinate_tags);
  doc["cooccurrence"] = rows(tables.cooccurrence);
  doc["mutual_exclusion"] = rows(tables.mutual_exclusion);
  return doc.dump(2) + "\n";
}

std::string MetricsJson(const PipelineResult& result, int top_n) {
  nlohmann::ordered_json doc;
  const std::string suffix = "@" + std::to_string(top_n);
  if (result.clustering_metrics) {
    const ClusteringMetrics& m = *result.clustering_metrics;
    doc["purity"] = m.purity;
    doc["nmi"] = m.nmi;
    doc["ri"] = m.rand_index;
    doc["ari"] = m.adjusted_rand;
    doc["f1"] = m.f1;
  } else {
    for (const char* key : {"purity", "nmi", "ri", "ari", "f1"}) doc[key] = nullptr;
  }
  if (result.completion_metrics) {
    doc["ap" + suffix] = result.completion_metrics->average_precision;
    doc["ar" + suffix] = result.completion_metrics->average_recall;
    doc["coverage" + suffix] = result.completion_metrics->coverage;
  } else {
    doc["ap" + suffix] = nullptr;
    doc["ar" + suffix] = nullptr;
    doc["coverage" + suffix] = nullptr;
  }
  return doc.dump(2) + "\n";
}

void SaveCompletion(const CompletionScores& scores,
                    const std::vector<std::vector<int>>& recovered,
                    const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw Error(kModule, "cannot write " + path.string());
  out << "sample,rank,tag,score\n";
  for (std::size_t s = 0; s < recovered.size(); ++s) {
    for (std::size_t r = 0; r < recovered[s].size(); ++r) {
      const int tag = recovered[s][r];
      out << s << ',' << r + 1 << ',' << scores.observed.tag_names()[tag] << ','
          << FormatDouble(scores.scores(static_cast<int>(s), tag)) << '\n';
    }
  }
  out.close();
  if (!out) throw Error(kModule, "I/O failure writing " + path.string());
}

std::vector<std::vector<int>> LoadCompletion(
    const std::filesystem::path& path, int num_samples,
    const std::vector<std::string>& tag_names) {
  std::ifstream in(path);
  if (!in) throw Error(kModule, "cannot open " + path.string());
  std::vector<std::vector<std::pair<int, int>>> ranked(num_samples);
  std::string line;
  bool header = true;
  while (std::getline(in, line)) {
    if (line.empty() || line == "\r") continue;
    if (header) {
      header = false;
      continue;
    }
    const auto fields = SplitCsvLine(line);
    if (fields.size() != 4) {
      throw Error(kModule, "malformed completion row '" + line + "'");
    }
    const int sample = ParseIntField(fields[0], path);
    if (sample < 0 || sample >= num_samples) {
      throw Error(kModule, "completion row names sample " + fields[0] +
                               " outside the dataset");
    }
    ranked[sample].emplace_back(ParseIntField(fields[1], path),
                                TagIndexOrThrow(tag_names, fields[2]));
  }
  std::vector<std::vector<int>> recovered(num_samples);
  for (int s = 0; s < num_samples; ++s) {
    std::sort(ranked[s].begin(), ranked[s].end());
    for (const auto& [rank, tag] : ranked[s]) recovered[s].push_back(tag);
  }
  return recovered;
}

void SaveHeldOut(const std::vector<std::pair<int, int>>& held_out,
                 const std::vector<std::string>& tag_names,
                 const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw Error(kModule, "cannot write " + path.string());
  out << "sample,tag\n";
  for (const auto& [s, j] : held_out) out << s << ',' << tag_names[j] << '\n';
  out.close();
  if (!out) throw Error(kModule, "I/O failure writing " + path.string());
}

std::vector<std::pair<int, int>> LoadHeldOut(
    const std::filesystem::path& path,
    const std::vector<std::string>& tag_names) {
  std::ifstream in(path);
  if (!in) throw Error(kModule, "cannot open " + path.string());
  std::vector<std::pair<int, int>> held_out;
  std::string line;
  bool header = true;
  while (std::getline(in, line)) {
    if (line.empty() || line == "\r") continue;
    if (header) {
      header = false;
      continue;
    }
    const auto fields = SplitCsvLine(line);
    if (fields.size() != 2) {
      throw Error(kModule, "malformed held-out row '" + line + "'");
    }
    held_out.emplace_back(ParseIntField(fields[0], path),
                          TagIndexOrThrow(tag_names, fields[1]));
  }
  return held_out;
}

void WritePipelineArtifacts(const PipelineResult& result,
                            const RunConfig& config,
                            const std::filesystem::path& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw Error(kModule, "cannot create " + dir.string());
  const auto& names = result.observed.tag_names();
  SaveTags(result.observed, dir / "observed_tags.csv");
  SaveHeldOut(result.held_out, names, dir / "held_out.csv");
  SaveHierarchy(result.hierarchy, names, dir / "hierarchy.json");
  nlohmann::ordered_json tables = nlohmann::ordered_json::array();
  for (int k = 0; k + 1 < result.hierarchy.num_layers(); ++k) {
    tables.push_back(nlohmann::ordered_json::parse(CorrelationsJson(
        result.observed,
        ComputeCorrelations(result.observed, result.hierarchy, k))));
  }
  std::ofstream corr(dir / "corr.json", std::ios::trunc);
  if (!corr) throw Error(kModule, "cannot write corr.json");
  corr << tables.dump(2) << '\n';
  corr.close();
  SaveForest(result.forest, dir / "forest.json");
  SaveMatrix(result.affinity, dir / "affinity.csv");
  SaveLabels(result.clustering.assignment, dir / "clusters.csv");
  if (result.completion) {
    SaveCompletion(*result.completion, result.recovered, dir / "completed.csv");
  }
  std::ofstream out(dir / "metrics.json", std::ios::trunc);
  if (!out) throw Error(kModule, "cannot write metrics.json");
  out << MetricsJson(result, config.top_n);
}

std::vector<AblationRow> RunAblation(const Dataset& dataset,
                                     const RunConfig& config,
                                     const std::vector<double>& sparsity_grid,
                                     int repeats, int jobs) {
  if (repeats < 1) throw Error(kModule, "repeats must be positive");
  if (!dataset.ground_truth_clusters) {
    throw Error(kModule, "ablation needs ground-truth clusters");
  }
  for (double ratio : sparsity_grid) {
    if (!(ratio >= 0.0 && ratio < 1.0)) {
      throw Error(kModule, "sparsity grid values must lie in [0, 1)");
    }
  }
  std::vector<AblationRow> rows;
  for (ForestMode mode :
       {ForestMode::kFull, ForestMode::kFlatTags, ForestMode::kNoCorr}) {
    for (double ratio : sparsity_grid) {
      for (int r = 0; r < repeats; ++r) {
        rows.push_back({mode, ratio,
                        config.seed + 1000 * static_cast<std::uint64_t>(r), 0.0});
      }
    }
  }

  std::atomic<int> next{0};
  std::vector<std::exception_ptr> errors(rows.size());
  auto worker = [&] {
    for (int i = next++; i < static_cast<int>(rows.size()); i = next++) {
      try {
        RunConfig cell = config;
        cell.forest.mode = rows[i].mode;
        cell.sparsity = rows[i].sparsity;
        cell.seed = rows[i].seed;
        cell.complete = false;
        rows[i].nmi = RunPipeline(dataset, cell).clustering_metrics->nmi;
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  const int workers = std::clamp(jobs, 1, static_cast<int>(rows.size()));
  std::vector<std::thread> pool;
  for (int w = 1; w < workers; ++w) pool.emplace_back(worker);
  worker();
  for (auto& thread : pool) thread.join();
  for (const auto& error : errors) {
    if (error) std::rethrow_exception(error);
  }
  return rows;
}

void SaveAblationReport(const std::vector<AblationRow>& rows,
                        const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw Error(kModule, "cannot write " + path.string());
  out << "mode,sparsity,seed,nmi\n";
  for (const AblationRow& row : rows) {
    out << ModeName(row.mode) << ',' << FormatDouble(row.sparsity) << ','
        << row.seed << ',' << FormatDouble(row.nmi) << '\n';
  }
  out.close();
  if (!out) throw Error(kModule, "I/O failure writing " + path.string());
}

}  // namespace hmlrf
