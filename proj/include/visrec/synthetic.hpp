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

#include <Eigen/Dense>
#include <string>

#include "visrec/data.hpp"
#include "visrec/types.hpp"

namespace visrec {

// Planted-visual-bias corpus: clicks are driven by the visual component of
// the preference alone, while test relevance is the full preference. The gap
// between the two is the bias a counterfactual scorer should remove.
struct SyntheticSpec {
  int n_users = 500;
  int n_items = 800;
  int true_dim = 16;          // latent dimension of the ground-truth preference
  double visual_share = 0.5;  // fraction of preference mass that is visual
  int clicks_per_user = 20;
  double feature_noise = 1.0;  // stddev of observation noise on features
  std::int64_t seed = 42;

  void validate() const;  // throws ConfigError
};

struct SyntheticCorpus {
  RawInteractions interactions;
  FeatureStore store;
  Eigen::MatrixXd ground_truth;  // n_users x n_items full-preference affinity
  Eigen::MatrixXd click_logits;  // n_users x n_items visual-only affinity
  std::vector<std::string> user_tokens;
  std::vector<std::string> item_tokens;
};

// Deterministic under spec.seed: identical specs give byte-identical
// serialized corpora. Users' true latents split into a visual block of
// round(visual_share * true_dim) dimensions and a non-visual remainder; the
// stored feature is the item's visual block plus Gaussian observation noise.
// Clicks are drawn per user without replacement, proportional to the softmax
// of the visual-block affinity, and timestamped in draw order.
SyntheticCorpus generate_synthetic(const SyntheticSpec& spec);

// interactions.tsv + features.vft + ground_truth.tsv under dir.
void write_synthetic_corpus(const std::string& dir,
                            const SyntheticCorpus& corpus);

// Ground-truth TSV (user_token, item_token, score) aligned to a filtered
// dataset's dense indices; pairs unknown to the dataset are skipped and
// absent entries read as -inf.
Eigen::MatrixXd load_ground_truth(const std::string& path,
                                  const Dataset& dataset);

}  // namespace visrec
