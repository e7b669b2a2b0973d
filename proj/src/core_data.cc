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

#include "hmlrf/core_data.h"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <string_view>
#include <system_error>

#include "hmlrf/error.h"
#include "json.hpp"

namespace hmlrf {
namespace {

constexpr char kModule[] = "core_data";

[[noreturn]] void Fail(const std::string& message) {
  throw Error(kModule, message);
}

std::string_view Trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) {
    s.remove_prefix(1);
  }
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' ||
                        s.back() == '\r')) {
    s.remove_suffix(1);
  }
  return s;
}

std::vector<std::string_view> SplitFields(std::string_view line) {
  std::vector<std::string_view> fields;
  std::size_t start = 0;
  while (true) {
    const std::size_t comma = line.find(',', start);
    if (comma == std::string_view::npos) {
      fields.push_back(Trim(line.substr(start)));
      return fields;
    }
    fields.push_back(Trim(line.substr(start, comma - start)));
    start = comma + 1;
  }
}

// Non-blank lines of a text file.
std::vector<std::string> ReadLines(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) Fail("cannot open " + path.string());
  std::vector<std::string> lines;
  std::string line;
  while (std::getline(in, line)) {
    if (Trim(line).empty()) continue;
    lines.push_back(line);
  }
  return lines;
}

std::ofstream OpenForWrite(const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) Fail("cannot write " + path.string());
  return out;
}

void CloseChecked(std::ofstream& out, const std::filesystem::path& path) {
  out.close();
  if (!out) Fail("I/O failure writing " + path.string());
}

double ParseDouble(std::string_view field, const std::filesystem::path& path,
                   int line) {
  double value = 0.0;
  const auto* end = field.data() + field.size();
  const auto [ptr, ec] = std::from_chars(field.data(), end, value);
  if (ec != std::errc() || ptr != end || field.empty()) {
    Fail("malformed number '" + std::string(field) + "' at " + path.string() +
         ":" + std::to_string(line));
  }
  return value;
}

int ParseInt(std::string_view field, const std::filesystem::path& path,
             int line) {
  int value = 0;
  const auto* end = field.data() + field.size();
  const auto [ptr, ec] = std::from_chars(field.data(), end, value);
  if (ec != std::errc() || ptr != end || field.empty()) {
    Fail("malformed integer '" + std::string(field) + "' at " +
         path.string() + ":" + std::to_string(line));
  }
  return value;
}

}  // namespace

std::string FormatDouble(double value) {
  char buffer[64];
  const auto [ptr, ec] = std::to_chars(buffer, buffer + sizeof(buffer), value);
  if (ec != std::errc()) Fail("cannot format number");
  return std::string(buffer, ptr);
}

FeatureMatrix::FeatureMatrix(Matrix values) : values_(std::move(values)) {
  if (values_.rows() < 2) Fail("feature matrix needs at least 2 samples");
  if (values_.cols() < 1) Fail("feature matrix needs at least 1 feature");
  for (double v : values_.values()) {
    if (!std::isfinite(v)) Fail("feature entries must be finite");
  }
}

TagMatrix::TagMatrix(int num_samples, std::vector<std::string> tag_names,
                     std::vector<std::uint8_t> values)
    : num_samples_(num_samples),
      names_(std::move(tag_names)),
      values_(std::move(values)) {
  if (values_.size() != static_cast<std::size_t>(num_samples_) * names_.size()) {
    Fail("tag matrix size does not match n x m");
  }
  for (std::uint8_t v : values_) {
    if (v > 1) Fail("tag entries are exactly 0 or 1");
  }
}

int TagMatrix::TagIndex(const std::string& name) const {
  for (int j = 0; j < num_tags(); ++j) {
    if (names_[j] == name) return j;
  }
  return -1;
}

int TagMatrix::Occurrences(int tag) const {
  int count = 0;
  for (int i = 0; i < num_samples_; ++i) count += (*this)(i, tag);
  return count;
}

int TagMatrix::NumPositives() const {
  int count = 0;
  for (std::uint8_t v : values_) count += v;
  return count;
}

TagHierarchy::TagHierarchy(std::vector<std::vector<int>> layers, int num_tags)
    : layers_(std::move(layers)), layer_of_(num_tags, -1) {
  if (layers_.empty()) Fail("hierarchy needs at least one layer");
  for (int k = 0; k < num_layers(); ++k) {
    if (layers_[k].empty()) Fail("hierarchy layers must be non-empty");
    for (int tag : layers_[k]) {
      if (tag < 0 || tag >= num_tags) {
        Fail("hierarchy references unknown tag index " + std::to_string(tag));
      }
      if (layer_of_[tag] != -1) {
        Fail("hierarchy layers pairwise disjoint: tag " + std::to_string(tag) +
             " listed twice");
      }
      layer_of_[tag] = k;
    }
  }
  for (int tag = 0; tag < num_tags; ++tag) {
    if (layer_of_[tag] == -1) {
      Fail("hierarchy layers must cover every tag; tag " +
           std::to_string(tag) + " missing");
    }
  }
}

TagHierarchy TagHierarchy::Flat(int num_tags) {
  std::vector<int> all(num_tags);
  for (int j = 0; j < num_tags; ++j) all[j] = j;
  return TagHierarchy({std::move(all)}, num_tags);
}

void Dataset::Validate() const {
  const int n = features.num_samples();
  if (tags.num_samples() != n) {
    Fail("dimension mismatch: features have " + std::to_string(n) +
         " rows, tags have " + std::to_string(tags.num_samples()));
  }
  if (hierarchy.num_tags() != tags.num_tags()) {
    Fail("dimension mismatch: hierarchy covers " +
         std::to_string(hierarchy.num_tags()) + " tags, tag matrix has " +
         std::to_string(tags.num_tags()));
  }
  if (ground_truth_clusters && static_cast<int>(ground_truth_clusters->size()) != n) {
    Fail("dimension mismatch: ground-truth clusters have " +
         std::to_string(ground_truth_clusters->size()) + " rows");
  }
  if (ground_truth_tags) {
    if (ground_truth_tags->num_samples() != n ||
        ground_truth_tags->num_tags() != tags.num_tags()) {
      Fail("dimension mismatch: ground-truth tags must be n x m");
    }
  }
}

DatasetPaths DatasetPaths::FromDirectory(const std::filesystem::path& dir) {
  DatasetPaths paths;
  paths.features = dir / "features.csv";
  paths.tags = dir / "tags.csv";
  paths.hierarchy = dir / "hierarchy.json";
  if (std::filesystem::exists(dir / "clusters.csv")) {
    paths.truth_clusters = dir / "clusters.csv";
  }
  if (std::filesystem::exists(dir / "truth_tags.csv")) {
    paths.truth_tags = dir / "truth_tags.csv";
  }
  return paths;
}

Dataset LoadDataset(const DatasetPaths& paths) {
  Dataset dataset;
  dataset.features = LoadFeatures(paths.features);
  dataset.tags = LoadTags(paths.tags);
  dataset.hierarchy = LoadHierarchy(paths.hierarchy, dataset.tags.tag_names());
  if (paths.truth_clusters) {
    dataset.ground_truth_clusters = LoadLabels(*paths.truth_clusters);
  }
  if (paths.truth_tags) {
    dataset.ground_truth_tags = LoadTags(*paths.truth_tags);
    if (dataset.ground_truth_tags->tag_names() != dataset.tags.tag_names()) {
      Fail("ground-truth tag header differs from " + paths.tags.string());
    }
  }
  dataset.Validate();
  return dataset;
}

void SaveMatrix(const Matrix& matrix, const std::filesystem::path& path) {
  std::ofstream out = OpenForWrite(path);
  std::string line;
  for (int r = 0; r < matrix.rows(); ++r) {
    line.clear();
    for (int c = 0; c < matrix.cols(); ++c) {
      if (c > 0) line += ',';
      line += FormatDouble(matrix(r, c));
    }
    line += '\n';
    out << line;
  }
  CloseChecked(out, path);
}

Matrix LoadMatrix(const std::filesystem::path& path) {
  const std::vector<std::string> lines = ReadLines(path);
  if (lines.empty()) Fail("empty matrix file " + path.string());
  const int cols = static_cast<int>(SplitFields(lines[0]).size());
  Matrix matrix(static_cast<int>(lines.size()), cols);
  for (int r = 0; r < matrix.rows(); ++r) {
    const auto fields = SplitFields(lines[r]);
    if (static_cast<int>(fields.size()) != cols) {
      Fail("dimension mismatch: row " + std::to_string(r + 1) + " of " +
           path.string() + " has " + std::to_string(fields.size()) +
           " values, expected " + std::to_string(cols));
    }
    for (int c = 0; c < cols; ++c) {
      matrix(r, c) = ParseDouble(fields[c], path, r + 1);
    }
  }
  return matrix;
}

FeatureMatrix LoadFeatures(const std::filesystem::path& path) {
  return FeatureMatrix(LoadMatrix(path));
}

void SaveTags(const TagMatrix& tags, const std::filesystem::path& path) {
  std::ofstream out = OpenForWrite(path);
  for (int j = 0; j < tags.num_tags(); ++j) {
    if (j > 0) out << ',';
    out << tags.tag_names()[j];
  }
  out << '\n';
  std::string line;
  for (int i = 0; i < tags.num_samples(); ++i) {
    line.clear();
    for (int j = 0; j < tags.num_tags(); ++j) {
      if (j > 0) line += ',';
      line += tags(i, j) ? '1' : '0';
    }
    line += '\n';
    out << line;
  }
  CloseChecked(out, path);
}

TagMatrix LoadTags(const std::filesystem::path& path) {
  const std::vector<std::string> lines = ReadLines(path);
  if (lines.empty()) Fail("missing header row in " + path.string());
  std::vector<std::string> names;
  for (std::string_view field : SplitFields(lines[0])) {
    if (field.empty()) Fail("empty tag name in header of " + path.string());
    names.emplace_back(field);
  }
  for (std::size_t a = 0; a < names.size(); ++a) {
    for (std::size_t b = a + 1; b < names.size(); ++b) {
      if (names[a] == names[b]) Fail("duplicate tag name '" + names[a] + "'");
    }
  }
  const int n = static_cast<int>(lines.size()) - 1;
  std::vector<std::uint8_t> values;
  values.reserve(static_cast<std::size_t>(n) * names.size());
  for (int i = 0; i < n; ++i) {
    const auto fields = SplitFields(lines[i + 1]);
    if (fields.size() != names.size()) {
      Fail("dimension mismatch: row " + std::to_string(i + 1) + " of " +
           path.string() + " has " + std::to_string(fields.size()) +
           " values, expected " + std::to_string(names.size()));
    }
    for (std::string_view field : fields) {
      const int v = ParseInt(field, path, i + 2);
      if (v != 0 && v != 1) {
        Fail("tag entries are exactly 0 or 1 (found " + std::to_string(v) +
             " at " + path.string() + ":" + std::to_string(i + 2) + ")");
      }
      values.push_back(static_cast<std::uint8_t>(v));
    }
  }
  return TagMatrix(n, std::move(names), std::move(values));
}

void SaveHierarchy(const TagHierarchy& hierarchy,
                   const std::vector<std::string>& tag_names,
                   const std::filesystem::path& path) {
  nlohmann::json layers = nlohmann::json::array();
  for (const auto& layer : hierarchy.layers()) {
    nlohmann::json names = nlohmann::json::array();
    for (int tag : layer) names.push_back(tag_names.at(tag));
    layers.push_back(std::move(names));
  }
  std::ofstream out = OpenForWrite(path);
  out << nlohmann::json{{"layers", layers}}.dump(2) << '\n';
  CloseChecked(out, path);
}

TagHierarchy LoadHierarchy(const std::filesystem::path& path,
                           const std::vector<std::string>& tag_names) {
  std::ifstream in(path);
  if (!in) Fail("cannot open " + path.string());
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    Fail("malformed hierarchy JSON " + path.string() + ": " + e.what());
  }
  if (!doc.is_object() || !doc.contains("layers") || !doc["layers"].is_array()) {
    Fail("hierarchy JSON must be an object with a 'layers' array");
  }
  std::vector<std::vector<int>> layers;
  for (const auto& layer : doc["layers"]) {
    if (!layer.is_array()) Fail("hierarchy layer must be an array of names");
    std::vector<int> indices;
    for (const auto& name : layer) {
      if (!name.is_string()) Fail("hierarchy entries must be tag names");
      int index = -1;
      for (int j = 0; j < static_cast<int>(tag_names.size()); ++j) {
        if (tag_names[j] == name.get<std::string>()) index = j;
      }
      if (index < 0) {
        Fail("hierarchy names unknown tag '" + name.get<std::string>() + "'");
      }
      indices.push_back(index);
    }
    layers.push_back(std::move(indices));
  }
  return TagHierarchy(std::move(layers), static_cast<int>(tag_names.size()));
}

void SaveLabels(const std::vector<int>& labels,
                const std::filesystem::path& path) {
  std::ofstream out = OpenForWrite(path);
  for (int label : labels) out << label << '\n';
  CloseChecked(out, path);
}

std::vector<int> LoadLabels(const std::filesystem::path& path) {
  const std::vector<std::string> lines = ReadLines(path);
  std::vector<int> labels;
  labels.reserve(lines.size());
  for (std::size_t i = 0; i < lines.size(); ++i) {
    labels.push_back(ParseInt(Trim(lines[i]), path, static_cast<int>(i) + 1));
  }
  return labels;
}

}  // namespace hmlrf
