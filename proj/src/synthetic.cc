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

#include "hmlrf/synthetic.h"

#include <cmath>
#include <string>

#include "hmlrf/error.h"
#include "hmlrf/random.h"

namespace hmlrf {
namespace {

constexpr char kModule[] = "synthetic";

// Inverse of the standard normal CDF (Acklam's rational approximation,
// relative error below 1.2e-9).
double NormalQuantile(double p) {
  static constexpr double a[] = {-3.969683028665376e+01, 2.209460984245205e+02,
                                 -2.759285104469687e+02, 1.383577518672690e+02,
                                 -3.066479806614716e+01, 2.506628277459239e+00};
  static constexpr double b[] = {-5.447609879822406e+01, 1.615858368580409e+02,
                                 -1.556989798598866e+02, 6.680131188771972e+01,
                                 -1.328068155288572e+01};
  static constexpr double c[] = {-7.784894002430293e-03, -3.223964580411365e-01,
                                 -2.400758277161838e+00, -2.549732539343734e+00,
                                 4.374664141464968e+00,  2.938163982698783e+00};
  static constexpr double d[] = {7.784695709041462e-03, 3.224671290700398e-01,
                                 2.445134137142996e+00, 3.754408661907416e+00};
  constexpr double low = 0.02425;
  if (p < low) {
    const double q = std::sqrt(-2.0 * std::log(p));
    return (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
           ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
  }
  if (p > 1.0 - low) return -NormalQuantile(1.0 - p);
  const double q = p - 0.5;
  const double r = q * q;
  return (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * q /
         (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
}

}  // namespace

Dataset GenerateSynthetic(const SyntheticConfig& config, std::uint64_t seed) {
  const int k = config.clusters;
  const int n = config.samples;
  const int per = config.specific_per_cluster;
  if (k < 1 || n < 2 || k > n) throw Error(kModule, "need 1 <= clusters <= samples");
  if (config.dims < k) throw Error(kModule, "need at least one dimension per cluster");
  if (config.visually_grounded_specific_tags && config.dims < k + per) {
    throw Error(kModule, "grounded specific tags need clusters + "
                         "specific_per_cluster feature dimensions");
  }
  if (!(config.specific_probability > 0.0 && config.specific_probability < 1.0)) {
    throw Error(kModule, "specific tag probability must lie in (0, 1)");
  }
  Rng rng(seed);

  std::vector<int> cluster(n);
  for (int i = 0; i < n; ++i) cluster[i] = i % k;
  for (int i = n - 1; i > 0; --i) {
    std::swap(cluster[i], cluster[rng.UniformIndex(i + 1)]);
  }

  const double offset = config.separation * config.sigma / std::sqrt(2.0);
  const double cut = NormalQuantile(1.0 - config.specific_probability);
  const int m = k + k * per;
  std::vector<std::string> names;
  for (int c = 0; c < k; ++c) names.push_back("abstract_" + std::to_string(c));
  for (int c = 0; c < k; ++c) {
    for (int t = 0; t < per; ++t) {
      names.push_back("specific_" + std::to_string(c) + "_" + std::to_string(t));
    }
  }

  Matrix features(n, config.dims);
  std::vector<std::uint8_t> tags(static_cast<std::size_t>(n) * m, 0);
  std::vector<double> noise(config.dims);
  for (int i = 0; i < n; ++i) {
    const int c = cluster[i];
    for (int f = 0; f < config.dims; ++f) noise[f] = rng.Normal();
    for (int f = 0; f < config.dims; ++f) {
      features(i, f) = config.sigma * noise[f] + (f == c ? offset : 0.0);
    }
    std::uint8_t* row = tags.data() + static_cast<std::size_t>(i) * m;
    row[c] = 1;
    for (int t = 0; t < per; ++t) {
      const bool on = config.visually_grounded_specific_tags
                          ? noise[k + t] > cut
                          : rng.UniformDouble() < config.specific_probability;
      row[k + c * per + t] = on;
    }
  }

  std::vector<int> abstract_layer(k);
  std::vector<int> specific_layer(k * per);
  for (int c = 0; c < k; ++c) abstract_layer[c] = c;
  for (int j = 0; j < k * per; ++j) specific_layer[j] = k + j;

  Dataset dataset;
  dataset.features = FeatureMatrix(std::move(features));
  dataset.tags = TagMatrix(n, std::move(names), std::move(tags));
  dataset.hierarchy = TagHierarchy({abstract_layer, specific_layer}, m);
  dataset.ground_truth_clusters = std::move(cluster);
  dataset.Validate();
  return dataset;
}

void SaveDataset(const Dataset& dataset, const std::filesystem::path& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw Error(kModule, "cannot create " + dir.string());
  SaveMatrix(dataset.features.matrix(), dir / "features.csv");
  SaveTags(dataset.tags, dir / "tags.csv");
  SaveHierarchy(dataset.hierarchy, dataset.tags.tag_names(),
                dir / "hierarchy.json");
  if (dataset.ground_truth_clusters) {
    SaveLabels(*dataset.ground_truth_clusters, dir / "clusters.csv");
  }
  if (dataset.ground_truth_tags) {
    SaveTags(*dataset.ground_truth_tags, dir / "truth_tags.csv");
  }
}

}  // namespace hmlrf
