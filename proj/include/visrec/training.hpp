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
#include <random>
#include <vector>

#include "visrec/data.hpp"
#include "visrec/models.hpp"
#include "visrec/params.hpp"

namespace visrec {

// One pairwise sample: i is a train positive of u, j is not.
struct TrainTriple {
  int user = 0;
  int pos = 0;
  int neg = 0;
};

// Dense gradient accumulator shaped like a ParamSet (delta is not trained
// and has no slot).
struct GradSet {
  double alpha = 0.0;
  Eigen::VectorXd beta_u, beta_i;
  Eigen::MatrixXd gamma_u, gamma_i, theta_u, E, c;

  static GradSet zeros_like(const ParamSet& params);
  void set_zero();
  void scale(double factor);
  bool all_finite() const;
};

// Two-moment accumulators plus the step counter; t increments once per batch.
struct AdamState {
  GradSet m;
  GradSet v;
  long t = 0;

  static AdamState like(const ParamSet& params);
};

struct TrainHistory {
  std::vector<double> epoch_loss;     // mean triple loss per epoch
  std::vector<double> epoch_seconds;  // wall time per epoch
  int stopped_epoch = 0;              // last epoch actually run
};

// u uniform over users, i uniform over the user's train positives, j uniform
// with rejection until it is not a positive. Users whose positives cover the
// whole item set are skipped with a warning.
std::vector<TrainTriple> sample_triples(const Dataset& train, int batch_size,
                                        std::mt19937_64& rng);

// -ln sigma(score_pos - score_neg) + lambda1 * l2, via the softplus identity.
double bpr_loss(double score_pos, double score_neg, double l2, double lambda1);

// Sum of three pairwise BPR terms: the fused score, the notice factor alone,
// and the match product m_iu * m_ivu. The l2 penalty is added once unless
// reg_triple counts it per task.
double multitask_loss(const CausalFactors& factors_pos,
                      const CausalFactors& factors_neg, double l2,
                      double lambda1, Fusion fusion = Fusion::kProduct,
                      bool reg_triple = false);

// The objective one sampled triple contributes: the pairwise ranking loss
// (single- or multi-task per config) plus lambda1 times the squared norm of
// the parameters the triple touches. gradients() is its exact derivative.
double triple_loss(const ParamSet& params, const TrainTriple& triple,
                   const Eigen::MatrixXd& features,
                   const std::vector<int>* categories,
                   const TrainConfig& config);

// Accumulates the analytic gradient of triple_loss into `out` and returns the
// loss value. Untouched parameters receive exactly zero.
double accumulate_gradients(const ParamSet& params, const TrainTriple& triple,
                            const Eigen::MatrixXd& features,
                            const std::vector<int>* categories,
                            const TrainConfig& config, GradSet& out);

GradSet gradients(const ParamSet& params, const TrainTriple& triple,
                  const Eigen::MatrixXd& features,
                  const std::vector<int>* categories,
                  const TrainConfig& config);

// Standard bias-corrected two-moment update; aborts on non-finite gradients.
void adam_step(ParamSet& params, const GradSet& grads, AdamState& state,
               const TrainConfig& config);

// Normalized-gradient adversary: epsilon * g / ||g||2 where g is the gradient
// of the triple's BPR loss with respect to the positive item's raw feature.
// Zero when the gradient vanishes.
Eigen::VectorXd adversarial_delta(const ParamSet& params,
                                  const TrainTriple& triple,
                                  const Eigen::MatrixXd& features,
                                  double epsilon);

// Full loop: epochs x ceil(interactions / batch_size) batches of
// sample -> (adversarial delta for AMR) -> gradients -> adam_step.
// Deterministic under config.seed. With early_stop_patience > 0 and a
// validation holdout present, training keeps the parameters of the best
// validation-MRR epoch and stops after `patience` epochs without improvement.
std::pair<ParamSet, TrainHistory> train(ModelKind kind,
                                        const SplitDataset& split,
                                        const FeatureStore& store,
                                        const TrainConfig& config);

}  // namespace visrec
