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

#ifndef HMLRF_CORE_DATA_H_
#define HMLRF_CORE_DATA_H_

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace hmlrf {

// Dense row-major matrix of doubles.
class Matrix {
 public:
  Matrix() = default;
  Matrix(int rows, int cols, double fill = 0.0)
      : rows_(rows), cols_(cols),
        values_(static_cast<std::size_t>(rows) * cols, fill) {}

  int rows() const { return rows_; }
  int cols() const { return cols_; }

  double& operator()(int r, int c) {
    return values_[static_cast<std::size_t>(r) * cols_ + c];
  }
  double operator()(int r, int c) const {
    return values_[static_cast<std::size_t>(r) * cols_ + c];
  }

  std::span<double> row(int r) {
    return {values_.data() + static_cast<std::size_t>(r) * cols_,
            static_cast<std::size_t>(cols_)};
  }
  std::span<const double> row(int r) const {
    return {values_.data() + static_cast<std::size_t>(r) * cols_,
            static_cast<std::size_t>(cols_)};
  }

  std::vector<double>& values() { return values_; }
  const std::vector<double>& values() const { return values_; }

  bool operator==(const Matrix& other) const = default;

 private:
  int rows_ = 0;
  int cols_ = 0;
  std::vector<double> values_;
};

// n x d visual descriptors. Finite entries, n >= 2, d >= 1.
class FeatureMatrix {
 public:
  FeatureMatrix() = default;
  explicit FeatureMatrix(Matrix values);

  int num_samples() const { return values_.rows(); }
  int num_features() const { return values_.cols(); }
  double operator()(int sample, int feature) const {
    return values_(sample, feature);
  }
  const Matrix& matrix() const { return values_; }

 private:
  Matrix values_;
};

// n x m binary tag observations with tag names. A zero means "not labelled
// positive"; consumers decide whether that reads as negative or missing.
class TagMatrix {
 public:
  TagMatrix() = default;
  // `values` is row-major n x m; throws unless every entry is 0 or 1.
  TagMatrix(int num_samples, std::vector<std::string> tag_names,
            std::vector<std::uint8_t> values);

  int num_samples() const { return num_samples_; }
  int num_tags() const { return static_cast<int>(names_.size()); }
  bool operator()(int sample, int tag) const {
    return values_[static_cast<std::size_t>(sample) * num_tags() + tag] != 0;
  }
  void Set(int sample, int tag, bool value) {
    values_[static_cast<std::size_t>(sample) * num_tags() + tag] = value;
  }
  std::span<const std::uint8_t> row(int sample) const {
    return {values_.data() + static_cast<std::size_t>(sample) * num_tags(),
            static_cast<std::size_t>(num_tags())};
  }

  const std::vector<std::string>& tag_names() const { return names_; }
  const std::vector<std::uint8_t>& values() const { return values_; }
  // Index of `name`, or -1.
  int TagIndex(const std::string& name) const;
  // Number of samples labelled positive on `tag`.
  int Occurrences(int tag) const;
  int NumPositives() const;

  bool operator==(const TagMatrix& other) const = default;

 private:
  int num_samples_ = 0;
  std::vector<std::string> names_;
  std::vector<std::uint8_t> values_;
};

// Ordered partition of tag indices: layer 0 is the most abstract.
class TagHierarchy {
 public:
  TagHierarchy() = default;
  // Throws unless the layers are non-empty, disjoint and cover 0..m-1.
  TagHierarchy(std::vector<std::vector<int>> layers, int num_tags);

  // Single layer holding every tag.
  static TagHierarchy Flat(int num_tags);

  int num_layers() const { return static_cast<int>(layers_.size()); }
  int num_tags() const { return static_cast<int>(layer_of_.size()); }
  const std::vector<int>& layer(int k) const { return layers_[k]; }
  const std::vector<std::vector<int>>& layers() const { return layers_; }
  int LayerOf(int tag) const { return layer_of_[tag]; }

  bool operator==(const TagHierarchy& other) const = default;

 private:
  std::vector<std::vector<int>> layers_;
  std::vector<int> layer_of_;
};

struct Dataset {
  FeatureMatrix features;
  TagMatrix tags;
  TagHierarchy hierarchy;
  std::optional<std::vector<int>> ground_truth_clusters;
  std::optional<TagMatrix> ground_truth_tags;

  int num_samples() const { return features.num_samples(); }
  int num_tags() const { return tags.num_tags(); }
  // Throws if the components disagree on n or m.
  void Validate() const;
};

struct DatasetPaths {
  std::filesystem::path features;
  std::filesystem::path tags;
  std::filesystem::path hierarchy;
  std::optional<std::filesystem::path> truth_clusters;
  std::optional<std::filesystem::path> truth_tags;

  // Conventional file names inside a dataset directory: features.csv,
  // tags.csv, hierarchy.json and, when present, clusters.csv and
  // truth_tags.csv.
  static DatasetPaths FromDirectory(const std::filesystem::path& dir);
};

Dataset LoadDataset(const DatasetPaths& paths);

// Headerless CSV of reals, one row per line. Output uses the shortest
// decimal form that round-trips, so Load(Save(x)) == x bit for bit.
void SaveMatrix(const Matrix& matrix, const std::filesystem::path& path);
Matrix LoadMatrix(const std::filesystem::path& path);

FeatureMatrix LoadFeatures(const std::filesystem::path& path);

// Header row of tag names followed by n rows of 0/1.
void SaveTags(const TagMatrix& tags, const std::filesystem::path& path);
TagMatrix LoadTags(const std::filesystem::path& path);

// {"layers": [[name, ...], ...]}; names resolved against `tag_names`.
void SaveHierarchy(const TagHierarchy& hierarchy,
                   const std::vector<std::string>& tag_names,
                   const std::filesystem::path& path);
TagHierarchy LoadHierarchy(const std::filesystem::path& path,
                           const std::vector<std::string>& tag_names);

// One integer per line.
void SaveLabels(const std::vector<int>& labels,
                const std::filesystem::path& path);
std::vector<int> LoadLabels(const std::filesystem::path& path);

// Shortest round-trip decimal rendering of `value`.
std::string FormatDouble(double value);

}  // namespace hmlrf

#endif  // HMLRF_CORE_DATA_H_
