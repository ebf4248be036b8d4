// Copyright 2026 The visrec Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
#include "visrec/eval.hpp"

#include <chrono>
#include <cmath>

namespace visrec {

int rank_of_target(const Scorer& scorer, int u, int target_item,
                   const std::vector<int>& candidates) {
  bool target_present = false;
  for (int c : candidates)
    if (c == target_item) {
      target_present = true;
      break;
    }
  if (!target_present)
    throw ProtocolError("rank_of_target: target item is not a candidate");

  const double target_score = scorer(u, target_item);
  int rank = 1;
  for (int c : candidates) {
    if (c == target_item) continue;
    double s = scorer(u, c);
    if (s > target_score || (s == target_score && c < target_item)) ++rank;
  }
  return rank;
}

RankMetrics metrics_from_rank(int rank, int k) {
  if (rank < 1 || k < 1)
    throw ProtocolError("metrics_from_rank: rank and k must be >= 1");
  RankMetrics m;
  m.rr = 1.0 / rank;
  if (rank <= k) {
    m.hr = 1.0;
    m.ndcg = 1.0 / std::log2(static_cast<double>(rank) + 1.0);
  }
  return m;
}

EvalReport evaluate(const Scorer& scorer, const SplitDataset& split, int k,
                    bool exclude_train_positives) {
  const Dataset& train = split.train;
  auto t0 = std::chrono::steady_clock::now();

  double sum_rr = 0.0, sum_ndcg = 0.0, sum_hr = 0.0;
  int evaluated = 0;
  std::vector<int> candidates;
  candidates.reserve(static_cast<std::size_t>(train.n_items));

  for (int u = 0; u < train.n_users; ++u) {
    int target = split.test_items[u];
    if (target < 0) continue;
    candidates.clear();
    for (int i = 0; i < train.n_items; ++i) {
      if (exclude_train_positives && train.is_positive(u, i)) continue;
      candidates.push_back(i);
    }
    int rank = rank_of_target(scorer, u, target, candidates);
    RankMetrics m = metrics_from_rank(rank, k);
    sum_rr += m.rr;
    sum_ndcg += m.ndcg;
    sum_hr += m.hr;
    ++evaluated;
  }
  if (evaluated == 0) throw ProtocolError("evaluate: no test users");

  auto t1 = std::chrono::steady_clock::now();
  EvalReport report;
  report.mrr = sum_rr / evaluated;
  report.ndcg_at_k = sum_ndcg / evaluated;
  report.hr_at_k = sum_hr / evaluated;
  report.k = k;
  report.n_users_evaluated = evaluated;
  report.elapsed_seconds = std::chrono::duration<double>(t1 - t0).count();
  return report;
}

double expected_random_mrr(const SplitDataset& split,
                           bool exclude_train_positives) {
  const Dataset& train = split.train;
  // Harmonic numbers up to the largest candidate-set size.
  std::vector<double> harmonic(static_cast<std::size_t>(train.n_items) + 1, 0.0);
  for (std::size_t n = 1; n < harmonic.size(); ++n)
    harmonic[n] = harmonic[n - 1] + 1.0 / static_cast<double>(n);

  double sum = 0.0;
  int count = 0;
  for (int u = 0; u < train.n_users; ++u) {
    if (split.test_items[u] < 0) continue;
    int n = train.n_items;
    if (exclude_train_positives)
      n -= static_cast<int>(train.positive_sets[u].size());
    sum += harmonic[static_cast<std::size_t>(n)] / n;
    ++count;
  }
  if (count == 0) throw ProtocolError("expected_random_mrr: no test users");
  return sum / count;
}

}  // namespace visrec
