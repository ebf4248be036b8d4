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
#include "visrec/params.hpp"

#include <random>

namespace visrec {

namespace {

constexpr double kInitStddev = 0.01;

void fill_gaussian(Eigen::MatrixXd& m, std::mt19937_64& rng,
                   std::normal_distribution<double>& dist) {
  // Row-major fill order keeps the draw sequence independent of Eigen's
  // storage layout.
  for (Eigen::Index r = 0; r < m.rows(); ++r)
    for (Eigen::Index c = 0; c < m.cols(); ++c) m(r, c) = dist(rng);
}

}  // namespace

bool ParamSet::all_finite() const {
  auto ok = [](const Eigen::MatrixXd& m) { return m.size() == 0 || m.allFinite(); };
  return std::isfinite(alpha) && beta_u.allFinite() && beta_i.allFinite() &&
         ok(gamma_u) && ok(gamma_i) && ok(theta_u) && ok(E) && ok(c) &&
         ok(delta);
}

ParamSet init_params(ModelKind kind, const TrainConfig& config, int n_users,
                     int n_items, int n_categories) {
  if (n_users <= 0 || n_items <= 0)
    throw ConfigError("init_params: user and item counts must be positive");
  if (n_categories < 0) throw ConfigError("init_params: negative category count");
  config.validate();

  const int K = config.embedding_dim;
  const int D = config.visual_dim;

  ParamSet p;
  p.kind = kind;
  p.n_users = n_users;
  p.n_items = n_items;
  p.n_categories = n_categories;
  p.embedding_dim = K;
  p.visual_dim = D;

  std::mt19937_64 rng(static_cast<std::uint64_t>(config.seed));
  std::normal_distribution<double> dist(0.0, kInitStddev);

  p.alpha = 0.0;
  if (uses_offset(kind)) p.beta_u = Eigen::VectorXd::Zero(n_users);
  if (uses_item_bias(kind)) p.beta_i = Eigen::VectorXd::Zero(n_items);

  if (uses_latent(kind)) {
    p.gamma_u.resize(n_users, K);
    fill_gaussian(p.gamma_u, rng, dist);
    p.gamma_i.resize(n_items, K);
    fill_gaussian(p.gamma_i, rng, dist);
  }
  if (uses_theta(kind)) {
    p.theta_u.resize(n_users, K);
    fill_gaussian(p.theta_u, rng, dist);
  }
  if (uses_visual(kind)) {
    p.E.resize(K, D);
    fill_gaussian(p.E, rng, dist);
  }
  if (uses_categories(kind)) {
    p.c = Eigen::MatrixXd::Zero(std::max(1, n_categories), K);
    p.c_trainable = n_categories > 0;
    if (p.c_trainable) fill_gaussian(p.c, rng, dist);
  }
  if (uses_delta(kind)) p.delta = Eigen::MatrixXd::Zero(n_items, D);

  return p;
}

double param_l2(const ParamSet& params) {
  double total = params.alpha * params.alpha;
  total += params.beta_u.squaredNorm();
  total += params.beta_i.squaredNorm();
  total += params.gamma_u.squaredNorm();
  total += params.gamma_i.squaredNorm();
  total += params.theta_u.squaredNorm();
  total += params.E.squaredNorm();
  if (params.c_trainable) total += params.c.squaredNorm();
  return total;
}

}  // namespace visrec
