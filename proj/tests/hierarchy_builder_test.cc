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

#include "hmlrf/hierarchy_builder.h"

#include <gtest/gtest.h>

#include <cmath>
#include <set>

#include "hmlrf/error.h"
#include "oracles.h"

namespace hmlrf {
namespace {

TagMatrix FromRows(const std::vector<std::vector<int>>& rows) {
  const int m = static_cast<int>(rows[0].size());
  std::vector<std::string> names;
  for (int j = 0; j < m; ++j) names.push_back("t" + std::to_string(j));
  std::vector<std::uint8_t> values;
  for (const auto& row : rows) values.insert(values.end(), row.begin(), row.end());
  return TagMatrix(static_cast<int>(rows.size()), names, values);
}

void ExpectPartition(const TagHierarchy& hierarchy, int m) {
  std::set<int> seen;
  for (const auto& layer : hierarchy.layers()) {
    EXPECT_FALSE(layer.empty());
    for (int tag : layer) EXPECT_TRUE(seen.insert(tag).second);
  }
  EXPECT_EQ(static_cast<int>(seen.size()), m);
}

TEST(TfidfTest, LogInverseFrequency) {
  // 100 samples, tag 0 on the first 10, tag 1 everywhere, tag 2 nowhere.
  std::vector<std::vector<int>> rows(100, {0, 1, 0});
  for (int i = 0; i < 10; ++i) rows[i][0] = 1;
  const WeightedTagMatrix w = TfidfWeight(FromRows(rows));
  EXPECT_NEAR(w.weights(0, 0), 2.302585, 1e-6);
  EXPECT_DOUBLE_EQ(w.weights(50, 0), 0.0);
  for (int i = 0; i < 100; ++i) {
    EXPECT_DOUBLE_EQ(w.weights(i, 1), 0.0);
    EXPECT_DOUBLE_EQ(w.weights(i, 2), 0.0);
  }
}

TEST(KMeansTopicsTest, DuplicatedGroupsSeparate) {
  const TagMatrix tags = FromRows(
      {{1, 0, 0}, {1, 0, 0}, {1, 0, 0}, {0, 1, 1}, {0, 1, 1}, {0, 1, 1}});
  const TopicClustering topics = KMeansTopics(TfidfWeight(tags), 2, 3);
  EXPECT_EQ(topics.assignment[0], topics.assignment[2]);
  EXPECT_EQ(topics.assignment[3], topics.assignment[5]);
  EXPECT_NE(topics.assignment[0], topics.assignment[3]);
  EXPECT_THROW(KMeansTopics(TfidfWeight(tags), 7, 3), Error);
}

TEST(SelectRepresentativeTagsTest, TopEtaPerTopicByScore) {
  Matrix scores(1, 4);
  scores(0, 0) = 3;
  scores(0, 1) = 9;
  scores(0, 2) = 1;
  scores(0, 3) = 7;
  EXPECT_EQ(SelectRepresentativeTags(scores, 3), (std::vector<int>{0, 1, 3}));
}

TEST(SelectRepresentativeTagsTest, TiesByIndexAndUnionAcrossTopics) {
  Matrix scores(2, 4);
  scores(0, 2) = 1;
  scores(0, 3) = 1;
  scores(1, 0) = 5;
  EXPECT_EQ(SelectRepresentativeTags(scores, 1), (std::vector<int>{0, 2}));
}

TEST(BuildHierarchyTest, SingleLayerIsFlat) {
  Rng rng(1);
  const TagMatrix tags = oracle::RandomTags(rng, 10, 4, 0.5);
  const TagHierarchy h = BuildHierarchy(tags, 2, 1, 0);
  ASSERT_EQ(h.num_layers(), 1);
  EXPECT_EQ(h.layer(0), (std::vector<int>{0, 1, 2, 3}));
}

TEST(BuildHierarchyTest, OneTopicTakesTopThree) {
  // Occurrence counts 9, 7, 3, 1 of 20 samples: with one topic the scores
  // follow o_j ln(20 / o_j), ranking tag 1 > tag 0 > tag 2 > tag 3.
  std::vector<std::vector<int>> rows(20, {0, 0, 0, 0});
  const int counts[4] = {9, 7, 3, 1};
  for (int j = 0; j < 4; ++j) {
    for (int i = 0; i < counts[j]; ++i) rows[i][j] = 1;
  }
  const TagHierarchy h = BuildHierarchy(FromRows(rows), 1, 2, 5);
  ASSERT_EQ(h.num_layers(), 2);
  EXPECT_EQ(h.layer(0), (std::vector<int>{0, 1, 2}));
  EXPECT_EQ(h.layer(1), (std::vector<int>{3}));
}

TEST(BuildHierarchyTest, TooFewTagsForLayers) {
  Rng rng(2);
  const TagMatrix tags = oracle::RandomTags(rng, 12, 3, 0.5);
  try {
    BuildHierarchy(tags, 1, 3, 0);
    FAIL() << "expected an error";
  } catch (const Error& e) {
    EXPECT_NE(std::string(e.what()).find("cannot form"), std::string::npos);
  }
}

TEST(BuildHierarchyTest, AlwaysAPartitionAndDeterministic) {
  Rng rng(3);
  for (int trial = 0; trial < 30; ++trial) {
    const int m = 8 + static_cast<int>(rng.UniformIndex(20));
    const TagMatrix tags = oracle::RandomTags(rng, 40, m, 0.3);
    const int topics = 1 + static_cast<int>(rng.UniformIndex(3));
    try {
      const TagHierarchy h = BuildHierarchy(tags, topics, 2, trial);
      ExpectPartition(h, m);
      EXPECT_EQ(h, BuildHierarchy(tags, topics, 2, trial));
    } catch (const Error&) {
      // Every tag promoted: acceptable outcome of a degenerate draw.
    }
  }
}

TEST(TopicTagScoresTest, DoublingPositivesNeverLowersRank) {
  // Holding idf fixed, a tag whose in-topic mass grows keeps or improves
  // its position.
  Rng rng(4);
  for (int trial = 0; trial < 50; ++trial) {
    const TagMatrix tags = oracle::RandomTags(rng, 12, 5, 0.4);
    WeightedTagMatrix w = TfidfWeight(tags);
    TopicClustering topics;
    topics.num_topics = 1;
    topics.assignment.assign(12, 0);
    topics.centroids = Matrix(1, 5);
    topics.empty = {false};
    const Matrix before = TopicTagScores(w, topics);
    const int tag = static_cast<int>(rng.UniformIndex(5));
    for (int i = 0; i < 12; ++i) w.weights(i, tag) *= 2.0;
    const Matrix after = TopicTagScores(w, topics);
    for (int j = 0; j < 5; ++j) {
      if (j == tag) continue;
      if (before(0, tag) >= before(0, j)) EXPECT_GE(after(0, tag), after(0, j));
    }
  }
}

}  // namespace
}  // namespace hmlrf
