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
#include <functional>

#include "visrec/data.hpp"
#include "visrec/params.hpp"

namespace visrec {

// The three sigmoid factors of the CausalRec score: match, visual match and
// visual notice. Each lies strictly inside (0,1).
struct CausalFactors {
  double m_iu = 0.5;   // sigma(gamma_u . gamma_i)
  double m_ivu = 0.5;  // sigma(gamma_u . (gamma_i o E phi))
  double n_vu = 0.5;   // sigma(theta_u . E phi)
};

// Numerically stable logistic function.
double sigmoid(double x);

// E . phi(V_i): projects a raw D-dim feature into the K-dim latent space.
Eigen::VectorXd project_visual(const ParamSet& params,
                               const Eigen::Ref<const Eigen::VectorXd>& feature);

// y = alpha + beta_u + beta_i + gamma_u . gamma_i
double score_mf(const ParamSet& params, int u, int i);

// y = score_mf + theta_u . (E phi)
double score_vbpr(const ParamSet& params, int u, int i,
                  const Eigen::Ref<const Eigen::VectorXd>& feature);

// y = gamma_u . (E phi - c_cat + gamma_i)
double score_deepstyle(const ParamSet& params, int u, int i,
                       const Eigen::Ref<const Eigen::VectorXd>& feature,
                       int category);

// y = gamma_u . (E (phi + delta_i) + gamma_i); the perturbation rides the
// raw feature before projection.
double score_amr(const ParamSet& params, int u, int i,
                 const Eigen::Ref<const Eigen::VectorXd>& feature);

// y = alpha + beta_u + theta_u . (E phi); no latent item vector.
double score_dvbpr(const ParamSet& params, int u,
                   const Eigen::Ref<const Eigen::VectorXd>& feature);

CausalFactors causalrec_factors(const ParamSet& params, int u, int i,
                                const Eigen::Ref<const Eigen::VectorXd>& feature);

// product: m_iu * m_ivu * n_vu; sum: m_iu + m_ivu + n_vu (ablation variant).
double score_causalrec(const CausalFactors& factors, Fusion fusion);

// Dispatch on params.kind. `category` is only read by DeepStyle.
double biased_score(const ParamSet& params, int u, int i,
                    const Eigen::Ref<const Eigen::VectorXd>& feature,
                    int category, Fusion fusion);

// A scorer closed over trained parameters and item data; evaluation ranks
// whatever it is handed, biased or debiased.
using Scorer = std::function<double(int u, int i)>;

// Precomputes the projected features once; categories may be null.
Scorer make_biased_scorer(const ParamSet& params,
                          const Eigen::MatrixXd& features,
                          const std::vector<int>* categories, Fusion fusion);

}  // namespace visrec
