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

#ifndef HMLRF_HIERARCHY_BUILDER_H_
#define HMLRF_HIERARCHY_BUILDER_H_

// Estimates an abstract-to-specific tag hierarchy for flat tag sets. Each
// layer is formed by clustering tf-idf weighted tag vectors into topics and
// promoting the most representative tags of every topic; the tags left over
// are processed the same way for the next layer.

#include <cstdint>
#include <vector>

#include "hmlrf/core_data.h"

namespace hmlrf {

// n x m tf-idf weights; zero wherever the tag is not labelled.
struct WeightedTagMatrix {
  Matrix weights;
};

struct TopicClustering {
  int num_topics = 0;
  std::vector<int> assignment;  // sample -> topic in [0, num_topics)
  Matrix centroids;             // num_topics x m
  std::vector<bool> empty;
};

inline constexpr int kDefaultTopicCount = 30;

// weight(i, j) = y(i, j) * ln(n / o_j), o_j the number of samples labelled
// with tag j. Tags that never occur are weighted 0.
WeightedTagMatrix TfidfWeight(const TagMatrix& tags);

// K-means (k-means++ seeding, at most 300 Lloyd rounds) over weighted tag
// rows. Throws if `num_topics` exceeds the sample count.
TopicClustering KMeansTopics(const WeightedTagMatrix& weighted, int num_topics,
                             std::uint64_t seed);

// Representativeness score of every tag within every topic: the sum of its
// weights over the topic's members. Result is num_topics x m.
Matrix TopicTagScores(const WeightedTagMatrix& weighted,
                      const TopicClustering& topics);

// Union over topics of the `eta` highest scoring tags with a positive
// score, ties broken by ascending tag index. Returned sorted ascending.
std::vector<int> SelectRepresentativeTags(const Matrix& scores, int eta);

// Builds a `num_layers` hierarchy. Layer i (0-based, all but the last) takes
// the top 3 * (i + 1) tags of each topic among the tags not yet placed; the
// last layer receives every remaining tag. Throws if some layer would be
// empty.
TagHierarchy BuildHierarchy(const TagMatrix& tags, int num_topics,
                            int num_layers, std::uint64_t seed);

}  // namespace hmlrf

#endif  // HMLRF_HIERARCHY_BUILDER_H_
