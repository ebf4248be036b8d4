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
#include "visrec/training.hpp"

#include <chrono>
#include <cmath>
#include <iostream>
#include <limits>

namespace visrec {

namespace {

double softplus(double x) {
  if (x > 0) return x + std::log1p(std::exp(-x));
  return std::log1p(std::exp(x));
}

// Stream tag decorrelating the sampler from parameter initialization.
constexpr std::uint64_t kSamplerStream = 0x53414d50ULL;

// Loss of one triple plus, when g is non-null, its exact gradient. The
// objective is the pairwise ranking loss (all tasks for CausalRec multitask)
// plus lambda1 times the squared norm of the parameters the triple touches;
// everything else has derivative zero.
double triple_objective(const ParamSet& p, const TrainTriple& t,
                        const Eigen::MatrixXd& F,
                        const std::vector<int>* cats, const TrainConfig& cfg,
                        GradSet* g) {
  const int u = t.user;
  const int i = t.pos;
  const int j = t.neg;

  double reg_scale = 1.0;
  if (p.kind == ModelKind::kCausalRec && cfg.multitask &&
      cfg.multitask_reg_triple)
    reg_scale = 3.0;

  double loss = 0.0;
  const Eigen::RowVectorXd gu =
      uses_latent(p.kind) ? Eigen::RowVectorXd(p.gamma_u.row(u))
                          : Eigen::RowVectorXd();

  switch (p.kind) {
    case ModelKind::kMF: {
      Eigen::RowVectorXd gdiff = p.gamma_i.row(i) - p.gamma_i.row(j);
      double d = p.beta_i(i) - p.beta_i(j) + gu.dot(gdiff);
      double s = sigmoid(-d);
      loss = softplus(-d);
      if (g) {
        g->beta_i(i) -= s;
        g->beta_i(j) += s;
        g->gamma_u.row(u) -= s * gdiff;
        g->gamma_i.row(i) -= s * gu;
        g->gamma_i.row(j) += s * gu;
      }
      break;
    }
    case ModelKind::kVBPR: {
      Eigen::RowVectorXd th = p.theta_u.row(u);
      Eigen::RowVectorXd fdiff = F.row(i) - F.row(j);
      Eigen::RowVectorXd pdiff = (p.E * fdiff.transpose()).transpose();
      Eigen::RowVectorXd gdiff = p.gamma_i.row(i) - p.gamma_i.row(j);
      double d = p.beta_i(i) - p.beta_i(j) + gu.dot(gdiff) + th.dot(pdiff);
      double s = sigmoid(-d);
      loss = softplus(-d);
      if (g) {
        g->beta_i(i) -= s;
        g->beta_i(j) += s;
        g->gamma_u.row(u) -= s * gdiff;
        g->gamma_i.row(i) -= s * gu;
        g->gamma_i.row(j) += s * gu;
        g->theta_u.row(u) -= s * pdiff;
        g->E.noalias() -= s * th.transpose() * fdiff;
      }
      break;
    }
    case ModelKind::kDeepStyle: {
      int ci = cats && !cats->empty() ? (*cats)[i] : 0;
      int cj = cats && !cats->empty() ? (*cats)[j] : 0;
      Eigen::RowVectorXd fdiff = F.row(i) - F.row(j);
      Eigen::RowVectorXd inner =
          (p.E * fdiff.transpose()).transpose() + p.gamma_i.row(i) -
          p.gamma_i.row(j) - p.c.row(ci) + p.c.row(cj);
      double d = gu.dot(inner);
      double s = sigmoid(-d);
      loss = softplus(-d);
      if (g) {
        g->gamma_u.row(u) -= s * inner;
        g->gamma_i.row(i) -= s * gu;
        g->gamma_i.row(j) += s * gu;
        if (p.c_trainable) {
          g->c.row(ci) += s * gu;
          g->c.row(cj) -= s * gu;
        }
        g->E.noalias() -= s * gu.transpose() * fdiff;
      }
      break;
    }
    case ModelKind::kAMR: {
      Eigen::RowVectorXd fi = F.row(i) + p.delta.row(i);
      Eigen::RowVectorXd fj = F.row(j) + p.delta.row(j);
      Eigen::RowVectorXd fdiff = fi - fj;
      Eigen::RowVectorXd inner = (p.E * fdiff.transpose()).transpose() +
                                 p.gamma_i.row(i) - p.gamma_i.row(j);
      double d = gu.dot(inner);
      double s = sigmoid(-d);
      loss = softplus(-d);
      if (g) {
        g->gamma_u.row(u) -= s * inner;
        g->gamma_i.row(i) -= s * gu;
        g->gamma_i.row(j) += s * gu;
        g->E.noalias() -= s * gu.transpose() * fdiff;
      }
      break;
    }
    case ModelKind::kDVBPR: {
      Eigen::RowVectorXd th = p.theta_u.row(u);
      Eigen::RowVectorXd fdiff = F.row(i) - F.row(j);
      Eigen::RowVectorXd pdiff = (p.E * fdiff.transpose()).transpose();
      double d = th.dot(pdiff);
      double s = sigmoid(-d);
      loss = softplus(-d);
      if (g) {
        g->theta_u.row(u) -= s * pdiff;
        g->E.noalias() -= s * th.transpose() * fdiff;
      }
      break;
    }
    case ModelKind::kCausalRec: {
      Eigen::RowVectorXd th = p.theta_u.row(u);
      struct Branch {
        Eigen::RowVectorXd gi, P;
        double m1, m2, n, Y, M;
      };
      auto forward = [&](int item) {
        Branch b;
        b.gi = p.gamma_i.row(item);
        b.P = (p.E * F.row(item).transpose()).transpose();
        b.m1 = sigmoid(gu.dot(b.gi));
        b.m2 = sigmoid(gu.dot(b.gi.cwiseProduct(b.P)));
        b.n = sigmoid(th.dot(b.P));
        b.Y = cfg.fusion == Fusion::kProduct ? b.m1 * b.m2 * b.n
                                             : b.m1 + b.m2 + b.n;
        b.M = b.m1 * b.m2;
        return b;
      };
      Branch bi = forward(i);
      Branch bj = forward(j);
      double dY = bi.Y - bj.Y;
      double sY = sigmoid(-dY);
      loss = softplus(-dY);
      double sN = 0.0, sM = 0.0;
      if (cfg.multitask) {
        double dN = bi.n - bj.n;
        double dM = bi.M - bj.M;
        loss += softplus(-dN) + softplus(-dM);
        sN = sigmoid(-dN);
        sM = sigmoid(-dM);
      }
      if (g) {
        auto backward = [&](const Branch& b, int item, double sign) {
          double sig1 = b.m1 * (1.0 - b.m1);
          double sig2 = b.m2 * (1.0 - b.m2);
          double sig3 = b.n * (1.0 - b.n);
          double c1, c2, c3;
          if (cfg.fusion == Fusion::kProduct) {
            c1 = -sY * sign * sig1 * b.m2 * b.n;
            c2 = -sY * sign * b.m1 * sig2 * b.n;
            c3 = -sY * sign * b.m1 * b.m2 * sig3;
          } else {
            c1 = -sY * sign * sig1;
            c2 = -sY * sign * sig2;
            c3 = -sY * sign * sig3;
          }
          if (cfg.multitask) {
            c1 += -sM * sign * sig1 * b.m2;
            c2 += -sM * sign * b.m1 * sig2;
            c3 += -sN * sign * sig3;
          }
          g->gamma_u.row(u) += c1 * b.gi + c2 * b.gi.cwiseProduct(b.P);
          g->gamma_i.row(item) += c1 * gu + c2 * gu.cwiseProduct(b.P);
          g->theta_u.row(u) += c3 * b.P;
          Eigen::RowVectorXd dP = c2 * gu.cwiseProduct(b.gi) + c3 * th;
          g->E.noalias() += dP.transpose() * F.row(item);
        };
        backward(bi, i, 1.0);
        backward(bj, j, -1.0);
      }
      break;
    }
  }

  // l2 over the parameters this triple touches.
  const double l1 = cfg.lambda1;
  const double coef = 2.0 * reg_scale * l1;
  double reg = 0.0;
  if (uses_offset(p.kind)) {
    reg += p.alpha * p.alpha + p.beta_u(u) * p.beta_u(u);
    if (g) {
      g->alpha += coef * p.alpha;
      g->beta_u(u) += coef * p.beta_u(u);
    }
  }
  if (uses_item_bias(p.kind)) {
    reg += p.beta_i(i) * p.beta_i(i) + p.beta_i(j) * p.beta_i(j);
    if (g) {
      g->beta_i(i) += coef * p.beta_i(i);
      g->beta_i(j) += coef * p.beta_i(j);
    }
  }
  if (uses_latent(p.kind)) {
    reg += p.gamma_u.row(u).squaredNorm() + p.gamma_i.row(i).squaredNorm() +
           p.gamma_i.row(j).squaredNorm();
    if (g) {
      g->gamma_u.row(u) += coef * p.gamma_u.row(u);
      g->gamma_i.row(i) += coef * p.gamma_i.row(i);
      g->gamma_i.row(j) += coef * p.gamma_i.row(j);
    }
  }
  if (uses_theta(p.kind)) {
    reg += p.theta_u.row(u).squaredNorm();
    if (g) g->theta_u.row(u) += coef * p.theta_u.row(u);
  }
  if (uses_visual(p.kind)) {
    reg += p.E.squaredNorm();
    if (g) g->E += coef * p.E;
  }
  if (uses_categories(p.kind) && p.c_trainable) {
    int ci = cats && !cats->empty() ? (*cats)[i] : 0;
    int cj = cats && !cats->empty() ? (*cats)[j] : 0;
    reg += p.c.row(ci).squaredNorm();
    if (g) g->c.row(ci) += coef * p.c.row(ci);
    if (cj != ci) {
      reg += p.c.row(cj).squaredNorm();
      if (g) g->c.row(cj) += coef * p.c.row(cj);
    }
  }
  return loss + reg_scale * l1 * reg;
}

}  // namespace

GradSet GradSet::zeros_like(const ParamSet& params) {
  GradSet g;
  g.beta_u = Eigen::VectorXd::Zero(params.beta_u.size());
  g.beta_i = Eigen::VectorXd::Zero(params.beta_i.size());
  g.gamma_u = Eigen::MatrixXd::Zero(params.gamma_u.rows(), params.gamma_u.cols());
  g.gamma_i = Eigen::MatrixXd::Zero(params.gamma_i.rows(), params.gamma_i.cols());
  g.theta_u = Eigen::MatrixXd::Zero(params.theta_u.rows(), params.theta_u.cols());
  g.E = Eigen::MatrixXd::Zero(params.E.rows(), params.E.cols());
  g.c = Eigen::MatrixXd::Zero(params.c.rows(), params.c.cols());
  return g;
}

void GradSet::set_zero() {
  alpha = 0.0;
  beta_u.setZero();
  beta_i.setZero();
  gamma_u.setZero();
  gamma_i.setZero();
  theta_u.setZero();
  E.setZero();
  c.setZero();
}

void GradSet::scale(double factor) {
  alpha *= factor;
  beta_u *= factor;
  beta_i *= factor;
  gamma_u *= factor;
  gamma_i *= factor;
  theta_u *= factor;
  E *= factor;
  c *= factor;
}

bool GradSet::all_finite() const {
  auto ok = [](const Eigen::MatrixXd& m) { return m.size() == 0 || m.allFinite(); };
  return std::isfinite(alpha) && beta_u.allFinite() && beta_i.allFinite() &&
         ok(gamma_u) && ok(gamma_i) && ok(theta_u) && ok(E) && ok(c);
}

AdamState AdamState::like(const ParamSet& params) {
  AdamState s;
  s.m = GradSet::zeros_like(params);
  s.v = GradSet::zeros_like(params);
  return s;
}

std::vector<TrainTriple> sample_triples(const Dataset& train, int batch_size,
                                        std::mt19937_64& rng) {
  std::vector<TrainTriple> triples;
  triples.reserve(static_cast<std::size_t>(batch_size));
  std::uniform_int_distribution<int> user_dist(0, train.n_users - 1);
  std::uniform_int_distribution<int> item_dist(0, train.n_items - 1);
  bool warned = false;

  while (static_cast<int>(triples.size()) < batch_size) {
    int u = user_dist(rng);
    const auto& positives = train.positives[u];
    if (positives.empty()) continue;
    if (static_cast<int>(train.positive_sets[u].size()) >= train.n_items) {
      if (!warned) {
        std::cerr << "warning: user " << train.user_tokens[u]
                  << " interacted with every item; skipped in sampling\n";
        warned = true;
      }
      continue;
    }
    std::uniform_int_distribution<std::size_t> pos_dist(0, positives.size() - 1);
    int i = positives[pos_dist(rng)].item;
    int j = item_dist(rng);
    while (train.is_positive(u, j)) j = item_dist(rng);
    triples.push_back({u, i, j});
  }
  return triples;
}

double bpr_loss(double score_pos, double score_neg, double l2, double lambda1) {
  return softplus(score_neg - score_pos) + lambda1 * l2;
}

double multitask_loss(const CausalFactors& factors_pos,
                      const CausalFactors& factors_neg, double l2,
                      double lambda1, Fusion fusion, bool reg_triple) {
  double d_full = score_causalrec(factors_pos, fusion) -
                  score_causalrec(factors_neg, fusion);
  double d_notice = factors_pos.n_vu - factors_neg.n_vu;
  double d_match = factors_pos.m_iu * factors_pos.m_ivu -
                   factors_neg.m_iu * factors_neg.m_ivu;
  double reg = (reg_triple ? 3.0 : 1.0) * lambda1 * l2;
  return softplus(-d_full) + softplus(-d_notice) + softplus(-d_match) + reg;
}

double triple_loss(const ParamSet& params, const TrainTriple& triple,
                   const Eigen::MatrixXd& features,
                   const std::vector<int>* categories,
                   const TrainConfig& config) {
  return triple_objective(params, triple, features, categories, config,
                          nullptr);
}

double accumulate_gradients(const ParamSet& params, const TrainTriple& triple,
                            const Eigen::MatrixXd& features,
                            const std::vector<int>* categories,
                            const TrainConfig& config, GradSet& out) {
  return triple_objective(params, triple, features, categories, config, &out);
}

GradSet gradients(const ParamSet& params, const TrainTriple& triple,
                  const Eigen::MatrixXd& features,
                  const std::vector<int>* categories,
                  const TrainConfig& config) {
  GradSet g = GradSet::zeros_like(params);
  accumulate_gradients(params, triple, features, categories, config, g);
  return g;
}

void adam_step(ParamSet& params, const GradSet& grads, AdamState& state,
               const TrainConfig& config) {
  if (!grads.all_finite())
    throw DataError("adam_step: non-finite gradient at step " +
                    std::to_string(state.t + 1));

  state.t += 1;
  const double b1 = config.adam_beta1;
  const double b2 = config.adam_beta2;
  const double bc1 = 1.0 - std::pow(b1, static_cast<double>(state.t));
  const double bc2 = 1.0 - std::pow(b2, static_cast<double>(state.t));
  const double lr = config.learning_rate;
  const double eps = config.adam_eps;

  auto update = [&](auto& p, const auto& g, auto& m, auto& v) {
    if (p.size() == 0) return;
    m = b1 * m + (1.0 - b1) * g;
    v = (b2 * v.array() + (1.0 - b2) * g.array().square()).matrix();
    p.array() -= lr * (m.array() / bc1) / ((v.array() / bc2).sqrt() + eps);
  };

  // alpha is a scalar and gets the same rule.
  {
    double& m = state.m.alpha;
    double& v = state.v.alpha;
    m = b1 * m + (1.0 - b1) * grads.alpha;
    v = b2 * v + (1.0 - b2) * grads.alpha * grads.alpha;
    params.alpha -= lr * (m / bc1) / (std::sqrt(v / bc2) + eps);
  }
  update(params.beta_u, grads.beta_u, state.m.beta_u, state.v.beta_u);
  update(params.beta_i, grads.beta_i, state.m.beta_i, state.v.beta_i);
  update(params.gamma_u, grads.gamma_u, state.m.gamma_u, state.v.gamma_u);
  update(params.gamma_i, grads.gamma_i, state.m.gamma_i, state.v.gamma_i);
  update(params.theta_u, grads.theta_u, state.m.theta_u, state.v.theta_u);
  update(params.E, grads.E, state.m.E, state.v.E);
  if (params.c_trainable) update(params.c, grads.c, state.m.c, state.v.c);
}

Eigen::VectorXd adversarial_delta(const ParamSet& params,
                                  const TrainTriple& triple,
                                  const Eigen::MatrixXd& features,
                                  double epsilon) {
  if (params.kind != ModelKind::kAMR)
    throw ProtocolError("adversarial_delta requires an AMR model");

  const int u = triple.user;
  const int i = triple.pos;
  const int j = triple.neg;
  Eigen::RowVectorXd gu = params.gamma_u.row(u);
  Eigen::RowVectorXd fi = features.row(i) + params.delta.row(i);
  Eigen::RowVectorXd fj = features.row(j) + params.delta.row(j);
  Eigen::RowVectorXd inner = (params.E * (fi - fj).transpose()).transpose() +
                             params.gamma_i.row(i) - params.gamma_i.row(j);
  double d = gu.dot(inner);
  double s = sigmoid(-d);

  // d(bpr)/d(feature_i): the positive item's raw feature enters through
  // E (phi + delta).
  Eigen::VectorXd grad_f = -s * (params.E.transpose() * gu.transpose());
  double norm = grad_f.norm();
  if (norm == 0.0 || epsilon == 0.0)
    return Eigen::VectorXd::Zero(features.cols());
  return (epsilon / norm) * grad_f;
}

namespace {

// MRR of the held-out validation items under the current (biased) scorer;
// candidates exclude train positives and the test target.
double validation_mrr(const ParamSet& params, const SplitDataset& split,
                      const Eigen::MatrixXd& features,
                      const TrainConfig& config) {
  const Dataset& tr = split.train;
  const std::vector<int>* cats = tr.categories.empty() ? nullptr : &tr.categories;
  Scorer scorer = make_biased_scorer(params, features, cats, config.fusion);
  double sum = 0.0;
  int count = 0;
  for (int u = 0; u < tr.n_users; ++u) {
    int target = split.validation_items[u];
    if (target < 0) continue;
    double target_score = scorer(u, target);
    int rank = 1;
    for (int i = 0; i < tr.n_items; ++i) {
      if (i == target || tr.is_positive(u, i) || i == split.test_items[u])
        continue;
      double s = scorer(u, i);
      if (s > target_score || (s == target_score && i < target)) ++rank;
    }
    sum += 1.0 / rank;
    ++count;
  }
  return count > 0 ? sum / count : 0.0;
}

}  // namespace

std::pair<ParamSet, TrainHistory> train(ModelKind kind,
                                        const SplitDataset& split,
                                        const FeatureStore& store,
                                        const TrainConfig& base_config) {
  const Dataset& tr = split.train;
  TrainConfig config = base_config;
  config.visual_dim = store.dim();
  config.validate();

  ParamSet params = init_params(kind, config, tr.n_users, tr.n_items,
                                tr.n_categories);
  Eigen::MatrixXd F = feature_matrix(store, tr);
  const std::vector<int>* cats = tr.categories.empty() ? nullptr : &tr.categories;

  AdamState state = AdamState::like(params);
  GradSet grads = GradSet::zeros_like(params);
  std::mt19937_64 rng(
      mix_seed(static_cast<std::uint64_t>(config.seed), kSamplerStream));

  const std::int64_t n_inter = tr.n_interactions();
  if (n_inter == 0) throw DataError("train: no interactions in the train split");
  const int n_batches = static_cast<int>(
      std::max<std::int64_t>(1, (n_inter + config.batch_size - 1) /
                                    config.batch_size));

  bool use_validation = config.early_stop_patience > 0;
  if (use_validation) {
    bool any = false;
    for (int v : split.validation_items) any |= v >= 0;
    use_validation = any;
  }

  TrainHistory history;
  ParamSet best_params;
  double best_mrr = -1.0;
  int best_epoch = 0;

  for (int epoch = 1; epoch <= config.epochs; ++epoch) {
    auto t0 = std::chrono::steady_clock::now();
    double loss_sum = 0.0;
    long loss_count = 0;

    for (int b = 0; b < n_batches; ++b) {
      std::vector<TrainTriple> triples =
          sample_triples(tr, config.batch_size, rng);
      if (kind == ModelKind::kAMR && config.amr_epsilon > 0) {
        for (const auto& t : triples)
          params.delta.row(t.pos) =
              adversarial_delta(params, t, F, config.amr_epsilon).transpose();
      }
      grads.set_zero();
      for (const auto& t : triples) {
        loss_sum += accumulate_gradients(params, t, F, cats, config, grads);
        ++loss_count;
      }
      grads.scale(1.0 / static_cast<double>(triples.size()));
      adam_step(params, grads, state, config);
    }

    auto t1 = std::chrono::steady_clock::now();
    history.epoch_loss.push_back(loss_sum / static_cast<double>(loss_count));
    history.epoch_seconds.push_back(
        std::chrono::duration<double>(t1 - t0).count());
    history.stopped_epoch = epoch;

    if (use_validation) {
      double mrr = validation_mrr(params, split, F, config);
      if (mrr > best_mrr) {
        best_mrr = mrr;
        best_epoch = epoch;
        best_params = params;
      } else if (epoch - best_epoch >= config.early_stop_patience) {
        break;
      }
    }
  }

  if (use_validation && best_epoch > 0) params = std::move(best_params);
  return {std::move(params), std::move(history)};
}

}  // namespace visrec
