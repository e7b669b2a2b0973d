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

#include "hmlrf/tag_stats.h"

#include <gtest/gtest.h>

#include "hmlrf/error.h"
#include "oracles.h"

namespace hmlrf {
namespace {

// Columns: tags over samples.
TagMatrix FromColumns(const std::vector<std::vector<int>>& columns) {
  const int n = static_cast<int>(columns[0].size());
  const int m = static_cast<int>(columns.size());
  std::vector<std::string> names;
  for (int j = 0; j < m; ++j) names.push_back("t" + std::to_string(j));
  std::vector<std::uint8_t> values(static_cast<std::size_t>(n) * m);
  for (int j = 0; j < m; ++j) {
    for (int i = 0; i < n; ++i) values[i * m + j] = columns[j][i];
  }
  return TagMatrix(n, names, values);
}

TEST(CooccurrenceTest, Examples) {
  // j on samples 0..3, i on 0..1.
  const TagMatrix tags = FromColumns({{1, 1, 0, 0, 0}, {1, 1, 1, 1, 0}});
  EXPECT_DOUBLE_EQ(Cooccurrence(tags, 0, 1), 0.5);
  const TagMatrix disjoint = FromColumns({{1, 0, 0}, {0, 1, 1}});
  EXPECT_DOUBLE_EQ(Cooccurrence(disjoint, 0, 1), 0.0);
  const TagMatrix implied = FromColumns({{1, 1, 1}, {0, 1, 1}});
  EXPECT_DOUBLE_EQ(Cooccurrence(implied, 0, 1), 1.0);
  const TagMatrix never = FromColumns({{1, 1, 0}, {0, 0, 0}});
  EXPECT_DOUBLE_EQ(Cooccurrence(never, 0, 1), 0.0);
}

TEST(MutualExclusionTest, FullExclusion) {
  // 10 samples, i negative on 6 (r- = 0.6); all 5 j-positives lack i.
  const TagMatrix tags = FromColumns({{1, 1, 1, 1, 0, 0, 0, 0, 0, 0},
                                      {0, 0, 0, 0, 1, 1, 1, 1, 1, 0}});
  EXPECT_DOUBLE_EQ(MutualExclusion(tags, 0, 1), 1.0);
}

TEST(MutualExclusionTest, PartialExclusion) {
  // r- = 0.5 over 8 samples; 3 of the 4 j-positives lack i (r-+ = 0.75).
  const TagMatrix tags = FromColumns(
      {{1, 1, 1, 1, 0, 0, 0, 0}, {1, 0, 0, 0, 1, 1, 1, 0}});
  EXPECT_DOUBLE_EQ(MutualExclusion(tags, 0, 1), 0.5);
}

TEST(MutualExclusionTest, ClampedAndDegenerate) {
  // j-positives always carry i: no excess negative rate.
  const TagMatrix positive = FromColumns({{1, 1, 0, 0}, {1, 1, 0, 0}});
  EXPECT_DOUBLE_EQ(MutualExclusion(positive, 0, 1), 0.0);
  const TagMatrix never_i = FromColumns({{0, 0, 0}, {1, 0, 1}});
  EXPECT_DOUBLE_EQ(MutualExclusion(never_i, 0, 1), 0.0);
  const TagMatrix never_j = FromColumns({{1, 0, 0}, {0, 0, 0}});
  EXPECT_DOUBLE_EQ(MutualExclusion(never_j, 0, 1), 0.0);
}

TEST(ComputeCorrelationsTest, LastLayerHasNoSubordinates) {
  Rng rng(1);
  const TagMatrix tags = oracle::RandomTags(rng, 5, 3, 0.5);
  const TagHierarchy h({{0}, {1, 2}}, 3);
  try {
    ComputeCorrelations(tags, h, 1);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.module(), "tag_stats");
    EXPECT_NE(e.cause().find("no subordinate layers"), std::string::npos);
  }
}

TEST(ComputeCorrelationsTest, SpansAllLowerLayers) {
  Rng rng(2);
  const TagMatrix tags = oracle::RandomTags(rng, 9, 5, 0.5);
  const TagHierarchy h({{3}, {0, 4}, {1, 2}}, 5);
  const CorrelationTables t = ComputeCorrelations(tags, h, 0);
  EXPECT_EQ(t.target_tags, (std::vector<int>{3}));
  EXPECT_EQ(t.subordinate_tags, (std::vector<int>{0, 4, 1, 2}));
  EXPECT_EQ(t.cooccurrence.cols(), 4);
}

TEST(SoftScoresTest, RawSumExample) {
  // Target a (tag 0) on samples 0..3; subordinate b (tag 1), c (tag 2).
  // b on {0, 4}: rho(a,b) = 1/2. c on {0, 5, 6, 4}: rho(a,c) = 1/4.
  // Sample 4 carries b and c, sample 5 only c.
  const TagMatrix tags = FromColumns({{1, 1, 1, 1, 0, 0, 0},
                                      {1, 0, 0, 0, 1, 0, 0},
                                      {1, 0, 0, 0, 1, 1, 1}});
  const TagHierarchy h({{0}, {1, 2}}, 3);
  const CorrelationTables corr = ComputeCorrelations(tags, h, 0);
  EXPECT_DOUBLE_EQ(corr.cooccurrence(0, 0), 0.5);
  EXPECT_DOUBLE_EQ(corr.cooccurrence(0, 1), 0.25);
  const SoftTagScores soft = ComputeSoftScores(tags, h, corr);
  EXPECT_EQ(soft.missing_samples, (std::vector<int>{4, 5, 6}));
  EXPECT_FALSE(soft.IsMissing(0));
  // Raw 0.75 for sample 4 is the maximum, so it normalises to 1.
  EXPECT_DOUBLE_EQ(soft.positive(soft.row_of_sample[4], 0), 1.0);
  EXPECT_DOUBLE_EQ(soft.positive(soft.row_of_sample[5], 0), 0.25 / 0.75);
}

TEST(SoftScoresTest, SampleWithoutSubordinateLabelsScoresZero) {
  const TagMatrix tags = FromColumns({{1, 0, 0}, {1, 1, 0}});
  const TagHierarchy h({{0}, {1}}, 2);
  const SoftTagScores soft =
      ComputeSoftScores(tags, h, ComputeCorrelations(tags, h, 0));
  const int row = soft.row_of_sample[2];
  ASSERT_GE(row, 0);
  EXPECT_DOUBLE_EQ(soft.positive(row, 0), 0.0);
  EXPECT_DOUBLE_EQ(soft.negative(row, 0), 0.0);
}

// Direct counting oracle over random matrices, exact equality.
TEST(TagStatsPropertyTest, MatchesCountingOracle) {
  Rng rng(3);
  for (int trial = 0; trial < 300; ++trial) {
    const int n = 1 + static_cast<int>(rng.UniformIndex(20));
    const int m = 2 + static_cast<int>(rng.UniformIndex(7));
    const int layers = 2 + static_cast<int>(rng.UniformIndex(std::min(m, 4) - 1));
    const TagMatrix tags = oracle::RandomTags(rng, n, m, rng.UniformDouble());
    const TagHierarchy h = oracle::RandomHierarchy(rng, m, layers);
    for (int k = 0; k + 1 < layers; ++k) {
      const CorrelationTables corr = ComputeCorrelations(tags, h, k);
      for (std::size_t r = 0; r < corr.target_tags.size(); ++r) {
        for (std::size_t c = 0; c < corr.subordinate_tags.size(); ++c) {
          const int i = corr.target_tags[r];
          const int j = corr.subordinate_tags[c];
          const double rho = corr.cooccurrence(r, c);
          const double eps = corr.mutual_exclusion(r, c);
          ASSERT_EQ(rho, oracle::Cooccurrence(tags, i, j));
          ASSERT_EQ(eps, oracle::MutualExclusion(tags, i, j));
          ASSERT_GE(rho, 0.0);
          ASSERT_LE(rho, 1.0);
          ASSERT_GE(eps, 0.0);
          ASSERT_LE(eps, 1.0);
        }
      }
      const SoftTagScores soft = ComputeSoftScores(tags, h, corr);
      const oracle::Soft expected = oracle::SoftScores(tags, h, k);
      double max_positive = 0.0;
      for (int s = 0; s < n; ++s) {
        ASSERT_EQ(soft.IsMissing(s), !expected.positive[s].empty());
        if (!soft.IsMissing(s)) continue;
        for (std::size_t t = 0; t < soft.target_tags.size(); ++t) {
          const int row = soft.row_of_sample[s];
          ASSERT_EQ(soft.positive(row, t), expected.positive[s][t]);
          ASSERT_EQ(soft.negative(row, t), expected.negative[s][t]);
          max_positive = std::max(max_positive, soft.positive(row, t));
        }
      }
      if (max_positive > 0.0) EXPECT_EQ(max_positive, 1.0);
    }
  }
}

}  // namespace
}  // namespace hmlrf
