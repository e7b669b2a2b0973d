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

#include "hmlrf/affinity_graph.h"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <string>
#include <thread>

#include "hmlrf/error.h"

namespace hmlrf {
namespace {

constexpr char kModule[] = "affinity_graph";

void AddCoLeafCounts(const Tree& tree, int n, std::vector<std::uint32_t>& counts) {
  for (const TreeNode& node : tree.nodes) {
    if (!node.is_leaf()) continue;
    for (int a : node.samples) {
      std::uint32_t* row = counts.data() + static_cast<std::size_t>(a) * n;
      for (int b : node.samples) ++row[b];
    }
  }
}

}  // namespace

Matrix TreeAffinity(const Tree& tree, int num_samples) {
  Matrix affinity(num_samples, num_samples);
  for (const TreeNode& node : tree.nodes) {
    if (!node.is_leaf()) continue;
    for (int a : node.samples) {
      for (int b : node.samples) affinity(a, b) = 1.0;
    }
  }
  return affinity;
}

Matrix ForestAffinity(const HmlForest& forest, int threads) {
  const int n = forest.num_samples;
  const int tau = static_cast<int>(forest.trees.size());
  if (tau < 1) throw Error(kModule, "forest has no trees");
  if (threads <= 0) {
    threads = std::max(1u, std::thread::hardware_concurrency());
  }
  const int workers = std::min(threads, tau);
  const std::size_t cells = static_cast<std::size_t>(n) * n;
  std::vector<std::vector<std::uint32_t>> partial(workers);
  std::atomic<int> next{0};
  auto work = [&](int w) {
    partial[w].assign(cells, 0);
    for (int t = next++; t < tau; t = next++) {
      AddCoLeafCounts(forest.trees[t], n, partial[w]);
    }
  };
  std::vector<std::thread> pool;
  for (int w = 1; w < workers; ++w) pool.emplace_back(work, w);
  work(0);
  for (auto& thread : pool) thread.join();

  std::vector<std::uint32_t>& counts = partial[0];
  for (int w = 1; w < workers; ++w) {
    for (std::size_t c = 0; c < cells; ++c) counts[c] += partial[w][c];
  }
  Matrix affinity(n, n);
  for (std::size_t c = 0; c < cells; ++c) {
    affinity.values()[c] = static_cast<double>(counts[c]) / tau;
  }
  return affinity;
}

Matrix KnnSparsify(const Matrix& affinity, int kappa) {
  const int n = affinity.rows();
  if (affinity.cols() != n) throw Error(kModule, "affinity must be square");
  if (kappa < 1 || kappa >= n) {
    throw Error(kModule, "kappa must satisfy 1 <= kappa < n (kappa=" +
                             std::to_string(kappa) + ", n=" +
                             std::to_string(n) + ")");
  }
  std::vector<std::uint8_t> keep(static_cast<std::size_t>(n) * n, 0);
  std::vector<int> others(n - 1);
  for (int i = 0; i < n; ++i) {
    int at = 0;
    for (int j = 0; j < n; ++j) {
      if (j != i) others[at++] = j;
    }
    std::partial_sort(others.begin(), others.begin() + kappa, others.end(),
                      [&](int a, int b) {
                        const double va = affinity(i, a);
                        const double vb = affinity(i, b);
                        return va > vb || (va == vb && a < b);
                      });
    for (int r = 0; r < kappa; ++r) {
      const int j = others[r];
      keep[static_cast<std::size_t>(i) * n + j] = 1;
      keep[static_cast<std::size_t>(j) * n + i] = 1;
    }
  }
  Matrix sparse(n, n);
  for (int i = 0; i < n; ++i) {
    sparse(i, i) = affinity(i, i);
    for (int j = 0; j < n; ++j) {
      if (keep[static_cast<std::size_t>(i) * n + j]) sparse(i, j) = affinity(i, j);
    }
  }
  return sparse;
}

Matrix NormalizeAffinity(const Matrix& affinity) {
  const int n = affinity.rows();
  if (affinity.cols() != n) throw Error(kModule, "affinity must be square");
  std::vector<double> inv_sqrt_degree(n, 0.0);
  for (int i = 0; i < n; ++i) {
    const auto row = affinity.row(i);
    const double degree = std::accumulate(row.begin(), row.end(), 0.0);
    if (degree > 0.0) inv_sqrt_degree[i] = 1.0 / std::sqrt(degree);
  }
  Matrix normalized(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = i; j < n; ++j) {
      const double value =
          inv_sqrt_degree[i] * affinity(i, j) * inv_sqrt_degree[j];
      normalized(i, j) = value;
      normalized(j, i) = value;
    }
  }
  return normalized;
}

}  // namespace hmlrf
