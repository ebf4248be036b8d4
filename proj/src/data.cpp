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
#include "visrec/data.hpp"

#include <algorithm>
#include <charconv>
#include <cstring>
#include <fstream>
#include <map>
#include <random>
#include <sstream>

namespace visrec {

namespace {

constexpr char kFeatureMagic[4] = {'V', 'F', 'T', '1'};

std::vector<std::string> split_tabs(const std::string& line) {
  std::vector<std::string> fields;
  std::size_t start = 0;
  while (true) {
    std::size_t pos = line.find('\t', start);
    if (pos == std::string::npos) {
      fields.push_back(line.substr(start));
      break;
    }
    fields.push_back(line.substr(start, pos - start));
    start = pos + 1;
  }
  return fields;
}

bool parse_int64(const std::string& s, std::int64_t& out) {
  const char* begin = s.data();
  const char* end = begin + s.size();
  auto res = std::from_chars(begin, end, out);
  return res.ec == std::errc() && res.ptr == end;
}

bool blank(const std::string& line) {
  return line.find_first_not_of(" \t\r") == std::string::npos;
}

template <typename T>
void write_raw(std::ostream& os, const T& v) {
  os.write(reinterpret_cast<const char*>(&v), sizeof(T));
}

template <typename T>
bool read_raw(std::istream& is, T& v) {
  is.read(reinterpret_cast<char*>(&v), sizeof(T));
  return static_cast<bool>(is);
}

}  // namespace

Eigen::VectorXf FeatureStore::row(const std::string& token) const {
  auto it = index_.find(token);
  if (it == index_.end())
    throw DataError("no visual feature for item '" + token + "'");
  return rows_.row(it->second);
}

void FeatureStore::add(const std::string& token, const Eigen::VectorXf& feature) {
  if (dim_ == 0) dim_ = static_cast<int>(feature.size());
  if (feature.size() != dim_)
    throw ParseError("feature dimension mismatch for item '" + token + "'");
  if (index_.count(token))
    throw ParseError("duplicate feature record for item '" + token + "'");
  if (!feature.allFinite())
    throw ParseError("non-finite feature entry for item '" + token + "'");
  int idx = static_cast<int>(tokens_.size());
  index_.emplace(token, idx);
  tokens_.push_back(token);
  rows_.conservativeResize(idx + 1, dim_);
  rows_.row(idx) = feature;
}

std::int64_t Dataset::n_interactions() const {
  std::int64_t total = 0;
  for (const auto& p : positives) total += static_cast<std::int64_t>(p.size());
  return total;
}

void Dataset::rebuild_sets() {
  positive_sets.assign(positives.size(), {});
  for (std::size_t u = 0; u < positives.size(); ++u)
    for (const auto& inter : positives[u]) positive_sets[u].insert(inter.item);
}

RawInteractions load_interactions(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open interactions file: " + path);

  RawInteractions raw;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (blank(line) || line[0] == '#') continue;
    auto fields = split_tabs(line);
    if (fields.size() < 2 || fields.size() > 3)
      throw ParseError(path + ":" + std::to_string(lineno) +
                       ": expected 2-3 tab-separated fields, got " +
                       std::to_string(fields.size()));
    if (fields[0].empty() || fields[1].empty())
      throw ParseError(path + ":" + std::to_string(lineno) + ": empty token");
    RawRecord rec;
    rec.user = fields[0];
    rec.item = fields[1];
    if (fields.size() == 3) {
      std::int64_t ts;
      if (!parse_int64(fields[2], ts))
        throw ParseError(path + ":" + std::to_string(lineno) +
                         ": non-integer timestamp '" + fields[2] + "'");
      rec.timestamp = ts == -1 ? kNoTimestamp : ts;
    }
    raw.records.push_back(std::move(rec));
  }
  return raw;
}

void write_interactions(const std::string& path, const RawInteractions& raw) {
  std::ofstream out(path);
  if (!out) throw DataError("cannot write interactions file: " + path);
  for (const auto& rec : raw.records) {
    out << rec.user << '\t' << rec.item;
    if (rec.timestamp != kNoTimestamp) out << '\t' << rec.timestamp;
    out << '\n';
  }
}

FeatureStore load_visual_features_binary(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open feature file: " + path);

  char magic[4];
  in.read(magic, 4);
  if (!in || std::memcmp(magic, kFeatureMagic, 4) != 0)
    throw ParseError(path + ": bad magic (expected VFT1)");
  std::uint32_t dim;
  std::uint64_t count;
  if (!read_raw(in, dim) || !read_raw(in, count))
    throw ParseError(path + ": truncated header");
  if (dim == 0) throw ParseError(path + ": feature dimension must be positive");

  FeatureStore store(static_cast<int>(dim));
  std::string token;
  Eigen::VectorXf feature(dim);
  for (std::uint64_t r = 0; r < count; ++r) {
    std::uint16_t len;
    if (!read_raw(in, len))
      throw ParseError(path + ": truncated record " + std::to_string(r));
    token.resize(len);
    in.read(token.data(), len);
    in.read(reinterpret_cast<char*>(feature.data()),
            static_cast<std::streamsize>(dim * sizeof(float)));
    if (!in) throw ParseError(path + ": truncated record " + std::to_string(r));
    store.add(token, feature);
  }
  return store;
}

void write_visual_features_binary(const std::string& path,
                                  const FeatureStore& store) {
  if (store.dim() <= 0)
    throw DataError("refusing to write feature store with dimension 0");
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write feature file: " + path);
  out.write(kFeatureMagic, 4);
  write_raw(out, static_cast<std::uint32_t>(store.dim()));
  write_raw(out, static_cast<std::uint64_t>(store.size()));
  for (const auto& token : store.tokens()) {
    write_raw(out, static_cast<std::uint16_t>(token.size()));
    out.write(token.data(), static_cast<std::streamsize>(token.size()));
    Eigen::VectorXf row = store.row(token);
    out.write(reinterpret_cast<const char*>(row.data()),
              static_cast<std::streamsize>(row.size() * sizeof(float)));
  }
}

FeatureStore load_visual_features_tsv(const std::string& path, int dim) {
  if (dim <= 0) throw ConfigError("TSV feature loading requires a declared dimension");
  std::ifstream in(path);
  if (!in) throw DataError("cannot open feature file: " + path);

  FeatureStore store(dim);
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (blank(line) || line[0] == '#') continue;
    auto fields = split_tabs(line);
    if (static_cast<int>(fields.size()) != dim + 1)
      throw ParseError(path + ":" + std::to_string(lineno) + ": expected " +
                       std::to_string(dim + 1) + " fields, got " +
                       std::to_string(fields.size()));
    Eigen::VectorXf feature(dim);
    for (int d = 0; d < dim; ++d) {
      try {
        std::size_t used = 0;
        feature[d] = std::stof(fields[d + 1], &used);
        if (used != fields[d + 1].size()) throw std::invalid_argument("trailing");
      } catch (const std::exception&) {
        throw ParseError(path + ":" + std::to_string(lineno) +
                         ": bad real value '" + fields[d + 1] + "'");
      }
    }
    store.add(fields[0], feature);
  }
  return store;
}

FeatureStore load_visual_features(const std::string& path, int feature_dim) {
  if (feature_dim > 0) return load_visual_features_tsv(path, feature_dim);
  return load_visual_features_binary(path);
}

Dataset kcore_filter(const RawInteractions& raw, const FeatureStore& store,
                     int min_count, bool single_pass) {
  // Collapse duplicates to one positive (earliest timestamp) and drop items
  // without features up front; degree counting happens on distinct pairs.
  std::map<std::pair<std::string, std::string>, std::int64_t> edges;
  for (const auto& rec : raw.records) {
    if (!store.has(rec.item)) continue;
    auto key = std::make_pair(rec.user, rec.item);
    auto it = edges.find(key);
    if (it == edges.end()) {
      edges.emplace(key, rec.timestamp);
    } else if (rec.timestamp != kNoTimestamp &&
               (it->second == kNoTimestamp || rec.timestamp < it->second)) {
      it->second = rec.timestamp;
    }
  }

  std::unordered_map<std::string, int> user_deg, item_deg;
  for (const auto& [key, ts] : edges) {
    (void)ts;
    ++user_deg[key.first];
    ++item_deg[key.second];
  }

  std::unordered_set<std::string> dead_users, dead_items;
  bool changed = true;
  while (changed) {
    changed = false;
    for (const auto& [tok, deg] : user_deg)
      if (deg < min_count && !dead_users.count(tok)) {
        dead_users.insert(tok);
        changed = true;
      }
    for (const auto& [tok, deg] : item_deg)
      if (deg < min_count && !dead_items.count(tok)) {
        dead_items.insert(tok);
        changed = true;
      }
    if (!changed) break;
    // Recount over surviving edges.
    user_deg.clear();
    item_deg.clear();
    for (const auto& [key, ts] : edges) {
      (void)ts;
      if (dead_users.count(key.first) || dead_items.count(key.second)) continue;
      ++user_deg[key.first];
      ++item_deg[key.second];
    }
    if (single_pass) break;
  }

  Dataset ds;
  // Dense reindex in first-appearance order of the raw stream.
  for (const auto& rec : raw.records) {
    auto key = std::make_pair(rec.user, rec.item);
    auto it = edges.find(key);
    if (it == edges.end()) continue;
    if (dead_users.count(rec.user) || dead_items.count(rec.item)) continue;
    if (!ds.user_index.count(rec.user)) {
      ds.user_index.emplace(rec.user, ds.n_users++);
      ds.user_tokens.push_back(rec.user);
      ds.positives.emplace_back();
    }
    if (!ds.item_index.count(rec.item)) {
      ds.item_index.emplace(rec.item, ds.n_items++);
      ds.item_tokens.push_back(rec.item);
    }
    int u = ds.user_index[rec.user];
    int i = ds.item_index[rec.item];
    ds.positives[u].push_back({i, it->second});
    edges.erase(it);  // each distinct pair emitted once
  }

  if (ds.n_users == 0 || ds.n_items == 0)
    throw DataError("dataset too sparse: no users/items survive filtering");
  ds.rebuild_sets();
  return ds;
}

SplitDataset split_leave_one_out(const Dataset& dataset, std::int64_t seed,
                                 bool with_validation) {
  SplitDataset split;
  split.train = dataset;
  split.test_items.assign(dataset.n_users, -1);
  split.validation_items.assign(dataset.n_users, -1);

  auto hold_out_latest = [&](std::vector<Interaction>& positives, int user,
                             std::uint64_t stream) -> int {
    std::int64_t latest = kNoTimestamp;
    for (const auto& p : positives) latest = std::max(latest, p.timestamp);
    std::vector<std::size_t> candidates;
    for (std::size_t idx = 0; idx < positives.size(); ++idx)
      if (positives[idx].timestamp == latest) candidates.push_back(idx);
    std::size_t pick = 0;
    if (candidates.size() > 1) {
      std::mt19937_64 rng(
          mix_seed(static_cast<std::uint64_t>(seed),
                   splitmix64(static_cast<std::uint64_t>(user)) ^ stream));
      std::uniform_int_distribution<std::size_t> dist(0, candidates.size() - 1);
      pick = dist(rng);
    }
    std::size_t chosen = candidates[pick];
    int item = positives[chosen].item;
    positives.erase(positives.begin() + static_cast<std::ptrdiff_t>(chosen));
    return item;
  };

  for (int u = 0; u < dataset.n_users; ++u) {
    auto& positives = split.train.positives[u];
    if (positives.empty()) continue;
    split.test_items[u] = hold_out_latest(positives, u, 0x7e57u);
    if (with_validation && !positives.empty())
      split.validation_items[u] = hold_out_latest(positives, u, 0x7a11u);
  }

  split.train.rebuild_sets();
  return split;
}

SplitDataset split_from_ground_truth(const Dataset& dataset,
                                     const Eigen::MatrixXd& ground_truth) {
  if (ground_truth.rows() != dataset.n_users ||
      ground_truth.cols() != dataset.n_items)
    throw DataError("ground-truth matrix shape does not match the dataset");

  SplitDataset split;
  split.train = dataset;
  split.test_items.assign(dataset.n_users, -1);
  split.validation_items.assign(dataset.n_users, -1);

  for (int u = 0; u < dataset.n_users; ++u) {
    int best = -1;
    double best_score = 0;
    for (int i = 0; i < dataset.n_items; ++i) {
      if (dataset.is_positive(u, i)) continue;
      double s = ground_truth(u, i);
      if (best < 0 || s > best_score) {
        best = i;
        best_score = s;
      }
    }
    if (best < 0)
      throw DataError("user '" + dataset.user_tokens[u] +
                      "' has no candidate item outside positives");
    split.test_items[u] = best;
  }
  return split;
}

DatasetStats dataset_stats(const Dataset& dataset) {
  if (dataset.n_users == 0 || dataset.n_items == 0)
    throw DataError("dataset_stats: empty dataset");
  DatasetStats s;
  s.n_users = dataset.n_users;
  s.n_items = dataset.n_items;
  s.n_interactions = dataset.n_interactions();
  s.sparsity = 1.0 - static_cast<double>(s.n_interactions) /
                         (static_cast<double>(s.n_users) *
                          static_cast<double>(s.n_items));
  return s;
}

Eigen::MatrixXd feature_matrix(const FeatureStore& store,
                               const Dataset& dataset) {
  Eigen::MatrixXd features(dataset.n_items, store.dim());
  for (int i = 0; i < dataset.n_items; ++i)
    features.row(i) = store.row(dataset.item_tokens[i]).cast<double>();
  return features;
}

}  // namespace visrec
