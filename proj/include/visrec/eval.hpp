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
#pragma once

#include <vector>

#include "visrec/data.hpp"
#include "visrec/models.hpp"

namespace visrec {

// One evaluation pass: MRR, NDCG@k and HR@k over the full item set.
struct EvalReport {
  double mrr = 0.0;
  double ndcg_at_k = 0.0;
  double hr_at_k = 0.0;
  int k = 0;
  int n_users_evaluated = 0;
  ModelKind model = ModelKind::kMF;
  double lambda2 = 0.0;
  std::int64_t seed = 0;
  double elapsed_seconds = 0.0;
};

struct RankMetrics {
  double rr = 0.0;
  double ndcg = 0.0;
  double hr = 0.0;
};

// 1-based rank of the target among candidates: one plus the number of
// higher-scoring candidates plus the equal-scoring candidates with a smaller
// item index (deterministic tie rule). The target must be a candidate.
int rank_of_target(const Scorer& scorer, int u, int target_item,
                   const std::vector<int>& candidates);

// rr = 1/rank; hr = [rank <= k]; ndcg = 1/log2(rank+1) inside the cutoff
// (single relevant item, so the ideal DCG is 1).
RankMetrics metrics_from_rank(int rank, int k);

// Ranks each user's held-out test item against all items, minus the user's
// train positives when exclude_train_positives. Metrics are averaged over
// users in index order.
EvalReport evaluate(const Scorer& scorer, const SplitDataset& split, int k,
                    bool exclude_train_positives);

// Expected MRR of a uniform-random scorer under the same candidate sets:
// mean over users of H(n_u)/n_u with H the harmonic number.
double expected_random_mrr(const SplitDataset& split,
                           bool exclude_train_positives);

}  // namespace visrec
