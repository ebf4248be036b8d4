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

#include "visrec/types.hpp"

namespace visrec {

// All trainable tables of one model. Rows index the entity (user, item or
// category); only the tables used by `kind` are allocated, the rest stay
// empty. Concurrency contract: many concurrent readers OR one exclusive
// writer; training writes, evaluation reads.
struct ParamSet {
  ModelKind kind = ModelKind::kMF;
  int n_users = 0;
  int n_items = 0;
  int n_categories = 0;  // 0 when no category data exists
  int embedding_dim = 0;  // K
  int visual_dim = 0;     // D

  double alpha = 0.0;          // global offset
  Eigen::VectorXd beta_u;      // n_users
  Eigen::VectorXd beta_i;      // n_items
  Eigen::MatrixXd gamma_u;     // n_users x K
  Eigen::MatrixXd gamma_i;     // n_items x K
  Eigen::MatrixXd theta_u;     // n_users x K, visual taste
  Eigen::MatrixXd E;           // K x D visual projection
  Eigen::MatrixXd c;           // max(1, n_categories) x K
  Eigen::MatrixXd delta;       // n_items x D, adversarial noise (not trained)

  // Without category data c stays a single frozen zero row, so the style
  // subtraction cancels nothing.
  bool c_trainable = false;

  bool all_finite() const;
};

// Biases and the offset start at zero; every vector/matrix entry is drawn
// i.i.d. Gaussian(0, 0.01^2) from a generator seeded by config.seed, in a
// fixed table order, so identical inputs give bitwise-identical parameters.
// Pass n_categories = 0 when the dataset carries no category column.
ParamSet init_params(ModelKind kind, const TrainConfig& config, int n_users,
                     int n_items, int n_categories);

// Sum of squares over all trainable entries (the BPR penalty's ||Theta||^2).
// Excludes delta and a frozen c.
double param_l2(const ParamSet& params);

}  // namespace visrec
