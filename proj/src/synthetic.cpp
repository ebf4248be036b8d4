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
#include "visrec/synthetic.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <random>

namespace visrec {

namespace {

std::string padded_token(char prefix, int idx, int count) {
  int width = 1;
  for (int v = count - 1; v >= 10; v /= 10) ++width;
  std::string digits = std::to_string(idx);
  std::string out(1, prefix);
  out.append(static_cast<std::size_t>(width) - digits.size(), '0');
  out += digits;
  return out;
}

void fill_gaussian(Eigen::MatrixXd& m, std::mt19937_64& rng, double stddev) {
  std::normal_distribution<double> dist(0.0, stddev);
  for (Eigen::Index r = 0; r < m.rows(); ++r)
    for (Eigen::Index c = 0; c < m.cols(); ++c) m(r, c) = dist(rng);
}

}  // namespace

void SyntheticSpec::validate() const {
  if (n_users <= 0 || n_items <= 0)
    throw ConfigError("synthetic spec: counts must be positive");
  if (true_dim <= 0) throw ConfigError("synthetic spec: true_dim must be >= 1");
  if (visual_share < 0 || visual_share > 1)
    throw ConfigError("synthetic spec: visual_share must be in [0,1]");
  if (clicks_per_user <= 0)
    throw ConfigError("synthetic spec: clicks_per_user must be >= 1");
  if (clicks_per_user > n_items)
    throw ConfigError("synthetic spec: clicks_per_user exceeds n_items");
  if (feature_noise < 0)
    throw ConfigError("synthetic spec: feature_noise must be >= 0");
}

SyntheticCorpus generate_synthetic(const SyntheticSpec& spec) {
  spec.validate();
  std::mt19937_64 rng(static_cast<std::uint64_t>(spec.seed));

  const int d_vis = std::clamp(
      static_cast<int>(std::lround(spec.visual_share * spec.true_dim)), 0,
      spec.true_dim);

  SyntheticCorpus corpus;
  corpus.user_tokens.reserve(spec.n_users);
  for (int u = 0; u < spec.n_users; ++u)
    corpus.user_tokens.push_back(padded_token('u', u, spec.n_users));
  corpus.item_tokens.reserve(spec.n_items);
  for (int i = 0; i < spec.n_items; ++i)
    corpus.item_tokens.push_back(padded_token('i', i, spec.n_items));

  Eigen::MatrixXd user_latent(spec.n_users, spec.true_dim);
  Eigen::MatrixXd item_latent(spec.n_items, spec.true_dim);
  fill_gaussian(user_latent, rng, 1.0);
  fill_gaussian(item_latent, rng, 1.0);

  corpus.ground_truth = user_latent * item_latent.transpose();
  if (d_vis > 0) {
    corpus.click_logits = user_latent.leftCols(d_vis) *
                          item_latent.leftCols(d_vis).transpose();
  } else {
    corpus.click_logits = Eigen::MatrixXd::Zero(spec.n_users, spec.n_items);
  }

  // Observed feature = visual block + noise. A zero-width visual block
  // degenerates to one pure-noise dimension so the store stays well formed.
  const int feature_dim = std::max(d_vis, 1);
  corpus.store = FeatureStore(feature_dim);
  {
    Eigen::MatrixXd noise(spec.n_items, feature_dim);
    fill_gaussian(noise, rng, spec.feature_noise);
    for (int i = 0; i < spec.n_items; ++i) {
      Eigen::VectorXd f = noise.row(i);
      if (d_vis > 0) f += item_latent.row(i).leftCols(d_vis).transpose();
      corpus.store.add(corpus.item_tokens[i], f.cast<float>());
    }
  }

  // Plackett-Luce sampling without replacement via Gumbel perturbation:
  // the k largest (logit + Gumbel) entries are the user's clicks, in draw
  // order, timestamped 1..k.
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  std::vector<std::pair<double, int>> keyed(spec.n_items);
  for (int u = 0; u < spec.n_users; ++u) {
    for (int i = 0; i < spec.n_items; ++i) {
      double g = -std::log(-std::log(
          std::max(unif(rng), std::numeric_limits<double>::min())));
      keyed[i] = {corpus.click_logits(u, i) + g, i};
    }
    std::partial_sort(keyed.begin(), keyed.begin() + spec.clicks_per_user,
                      keyed.end(), std::greater<>());
    for (int t = 0; t < spec.clicks_per_user; ++t)
      corpus.interactions.records.push_back(
          {corpus.user_tokens[u], corpus.item_tokens[keyed[t].second],
           static_cast<std::int64_t>(t + 1)});
  }

  return corpus;
}

void write_synthetic_corpus(const std::string& dir,
                            const SyntheticCorpus& corpus) {
  write_interactions(dir + "/interactions.tsv", corpus.interactions);
  write_visual_features_binary(dir + "/features.vft", corpus.store);

  std::ofstream gt(dir + "/ground_truth.tsv");
  if (!gt) throw DataError("cannot write ground-truth file under " + dir);
  gt << std::setprecision(17);
  for (int u = 0; u < corpus.ground_truth.rows(); ++u)
    for (int i = 0; i < corpus.ground_truth.cols(); ++i)
      gt << corpus.user_tokens[u] << '\t' << corpus.item_tokens[i] << '\t'
         << corpus.ground_truth(u, i) << '\n';
}

Eigen::MatrixXd load_ground_truth(const std::string& path,
                                  const Dataset& dataset) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open ground-truth file: " + path);

  Eigen::MatrixXd gt = Eigen::MatrixXd::Constant(
      dataset.n_users, dataset.n_items,
      -std::numeric_limits<double>::infinity());

  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    std::size_t t1 = line.find('\t');
    std::size_t t2 = t1 == std::string::npos ? t1 : line.find('\t', t1 + 1);
    if (t2 == std::string::npos)
      throw ParseError(path + ":" + std::to_string(lineno) +
                       ": expected 3 tab-separated fields");
    std::string user = line.substr(0, t1);
    std::string item = line.substr(t1 + 1, t2 - t1 - 1);
    double score;
    const char* begin = line.data() + t2 + 1;
    const char* end = line.data() + line.size();
    auto res = std::from_chars(begin, end, score);
    if (res.ec != std::errc() || res.ptr != end)
      throw ParseError(path + ":" + std::to_string(lineno) +
                       ": bad score value");
    auto uit = dataset.user_index.find(user);
    auto iit = dataset.item_index.find(item);
    if (uit == dataset.user_index.end() || iit == dataset.item_index.end())
      continue;  // filtered out
    gt(uit->second, iit->second) = score;
  }
  return gt;
}

}  // namespace visrec
