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

// Brute-force reference implementations and random instance generators
// shared by the unit and acceptance tests. Everything here is written from
// the definitions directly, without reusing library internals.

#ifndef HMLRF_TESTS_ORACLES_H_
#define HMLRF_TESTS_ORACLES_H_

#include <cstdint>
#include <vector>

#include "hmlrf/core_data.h"
#include "hmlrf/forest.h"
#include "hmlrf/random.h"
#include "hmlrf/spectral_clustering.h"

namespace hmlrf::oracle {

// ---- Random instances ------------------------------------------------------

// n x m tags, each entry 1 with probability `density`.
TagMatrix RandomTags(Rng& rng, int n, int m, double density);

// Random partition of m tags into `layers` non-empty layers.
TagHierarchy RandomHierarchy(Rng& rng, int m, int layers);

// Entries drawn from {0, .., levels - 1} so that ties are frequent.
FeatureMatrix RandomFeatures(Rng& rng, int n, int d, int levels);

// Labels in [0, k).
std::vector<int> RandomLabels(Rng& rng, int n, int k);

// ---- Tag statistics --------------------------------------------------------

double Cooccurrence(const TagMatrix& tags, int i, int j);
double MutualExclusion(const TagMatrix& tags, int i, int j);

// Normalised soft scores for target layer k: entry [sample][slot]; rows of
// samples labelled in layer k are left empty.
struct Soft {
  std::vector<std::vector<double>> positive;
  std::vector<std::vector<double>> negative;
};
Soft SoftScores(const TagMatrix& tags, const TagHierarchy& hierarchy, int k);

// ---- Split gain ------------------------------------------------------------

// Gain of the partition left | right under `mode`, written out from the Gini
// definition with per-sample masses.
double NodeGain(const TagMatrix& tags, const TagHierarchy& hierarchy,
                ForestMode mode, const std::vector<int>& left,
                const std::vector<int>& right);

// Maximum gain over every (feature, midpoint) candidate; 0 if none.
double BestGain(const FeatureMatrix& features, const TagMatrix& tags,
                const TagHierarchy& hierarchy, ForestMode mode,
                const std::vector<int>& samples);

// ---- Partition metrics -----------------------------------------------------

double Purity(const std::vector<int>& predicted, const std::vector<int>& truth);
double Nmi(const std::vector<int>& predicted, const std::vector<int>& truth);
double RandIndex(const std::vector<int>& predicted,
                 const std::vector<int>& truth);
double AdjustedRand(const std::vector<int>& predicted,
                    const std::vector<int>& truth);
double PairF1(const std::vector<int>& predicted, const std::vector<int>& truth);

// ---- Completion ------------------------------------------------------------

double CompleteLn(const HmlForest& forest, const TagMatrix& tags, int sample,
                  int tag);
double CompleteGc(const std::vector<int>& clusters, const TagMatrix& tags,
                  int sample, int tag);
double CompleteAm(const Matrix& affinity, const TagMatrix& tags, int sample,
                  int tag, int kappa);

}  // namespace hmlrf::oracle

#endif  // HMLRF_TESTS_ORACLES_H_
