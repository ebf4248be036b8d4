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
#include <cstdint>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "visrec/types.hpp"

namespace visrec {

// Timestamp sentinel for "absent".
constexpr std::int64_t kNoTimestamp = INT64_MIN;

struct RawRecord {
  std::string user;
  std::string item;
  std::int64_t timestamp = kNoTimestamp;
};

// Interactions as read from disk: tokens, duplicates allowed.
struct RawInteractions {
  std::vector<RawRecord> records;
};

// Item token -> fixed-dimension visual feature. Vectors are stored as
// float32 (as on disk); computation up-converts to double. Immutable after
// load, shareable across threads.
class FeatureStore {
 public:
  FeatureStore() = default;
  FeatureStore(int dim) : dim_(dim) {}

  int dim() const { return dim_; }
  std::size_t size() const { return tokens_.size(); }
  bool has(const std::string& token) const { return index_.count(token) > 0; }
  const std::vector<std::string>& tokens() const { return tokens_; }

  // Row for a token; throws DataError when absent.
  Eigen::VectorXf row(const std::string& token) const;

  void add(const std::string& token, const Eigen::VectorXf& feature);

 private:
  int dim_ = 0;
  std::vector<std::string> tokens_;
  std::unordered_map<std::string, int> index_;
  Eigen::MatrixXf rows_;  // size x dim
};

struct Interaction {
  int item = 0;
  std::int64_t timestamp = kNoTimestamp;
};

// Filtered, densely reindexed implicit-feedback corpus. Every user and item
// has >= min_count interactions, every item has a feature, and positives
// hold no duplicate (user,item) pairs.
struct Dataset {
  int n_users = 0;
  int n_items = 0;
  std::vector<std::string> user_tokens;
  std::vector<std::string> item_tokens;
  std::unordered_map<std::string, int> user_index;
  std::unordered_map<std::string, int> item_index;
  std::vector<std::vector<Interaction>> positives;      // per user
  std::vector<std::unordered_set<int>> positive_sets;   // per user
  std::vector<int> categories;  // per item; empty when absent
  int n_categories = 0;

  std::int64_t n_interactions() const;
  bool is_positive(int user, int item) const {
    return positive_sets[user].count(item) > 0;
  }
  void rebuild_sets();
};

// Train view plus one held-out test item per user (and optionally one
// validation item). Indices stay aligned with the parent dataset.
struct SplitDataset {
  Dataset train;
  std::vector<int> test_items;        // per user; -1 = none
  std::vector<int> validation_items;  // per user; -1 = none
};

struct DatasetStats {
  int n_users = 0;
  int n_items = 0;
  std::int64_t n_interactions = 0;
  double sparsity = 0.0;  // 1 - interactions / (users * items)
};

// --- ingestion ------------------------------------------------------------

// UTF-8 text, one record per line, tab-separated: user_token, item_token,
// optional integer timestamp (seconds; -1 = absent). Lines beginning '#'
// are ignored.
RawInteractions load_interactions(const std::string& path);
void write_interactions(const std::string& path, const RawInteractions& raw);

// Binary feature file, little-endian: magic "VFT1", u32 dim D, u64 count N,
// then N records of (u16 token byte-length, token bytes, D float32 values).
FeatureStore load_visual_features_binary(const std::string& path);
void write_visual_features_binary(const std::string& path,
                                  const FeatureStore& store);

// TSV fallback: token followed by D decimal reals per line, D declared by
// the caller.
FeatureStore load_visual_features_tsv(const std::string& path, int dim);

// Dispatch: feature_dim == 0 selects the binary layout, > 0 the TSV fallback.
FeatureStore load_visual_features(const std::string& path, int feature_dim = 0);

// --- filtering and splitting ----------------------------------------------

// Drops items without features, collapses duplicate (user,item) pairs to the
// earliest timestamp, then removes users/items with fewer than min_count
// interactions. With single_pass=false (default) the removal iterates to a
// fixpoint (k-core); with single_pass=true one simultaneous sweep is applied.
Dataset kcore_filter(const RawInteractions& raw, const FeatureStore& store,
                     int min_count = 5, bool single_pass = false);

// Per user, holds out the latest-timestamp interaction as test; ties and
// absent timestamps are resolved uniformly at random from the seed. With
// with_validation, a second item is held out the same way.
SplitDataset split_leave_one_out(const Dataset& dataset, std::int64_t seed,
                                 bool with_validation = false);

// All interactions stay in train; the test target per user is the
// highest-ground-truth-score item outside the user's positives. Used by the
// synthetic planted-bias experiments where test relevance is real preference
// rather than a held-out click.
SplitDataset split_from_ground_truth(const Dataset& dataset,
                                     const Eigen::MatrixXd& ground_truth);

DatasetStats dataset_stats(const Dataset& dataset);

// Features aligned to dense item indices, up-converted to double
// (n_items x D).
Eigen::MatrixXd feature_matrix(const FeatureStore& store,
                               const Dataset& dataset);

}  // namespace visrec
