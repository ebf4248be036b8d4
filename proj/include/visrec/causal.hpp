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
//
// Counterfactual inference over the item treatment: a no-treatment reference
// (i*, v*) replaces the item-side parameters and/or the visual feature, and
// effect decompositions (TE / NDE / TIE) are differences of the resulting
// score evaluations. The TIE is the debiased score used at inference.
#pragma once

#include <Eigen/Dense>

#include "visrec/models.hpp"

namespace visrec {

// No-treatment values: item-population means (mode=mean) or zeros
// (mode=zero). Recomputed from the trained parameters once per evaluation
// pass.
struct ReferenceSet {
  double beta_ref = 0.0;         // beta_{i*}
  Eigen::VectorXd gamma_ref;     // gamma_{i*}, K
  Eigen::VectorXd feature_ref;   // phi(V_{i*}) = v*, D
  Eigen::VectorXd c_ref;         // K
  ReferenceMode mode = ReferenceMode::kMean;
};

ReferenceSet reference_values(const ParamSet& params, const Dataset& dataset,
                              const FeatureStore& store, ReferenceMode mode);

// Reference construction from an index-aligned feature matrix; used where a
// store keyed by token is not at hand.
ReferenceSet reference_values(const ParamSet& params,
                              const Eigen::MatrixXd& features,
                              ReferenceMode mode);

// Score of the counterfactual world: item_treated selects the real item's
// parameters vs. the reference; visual_treated selects the real feature vs.
// the reference on the notice path. For CausalRec the match branch's feature
// follows the item state (the intervention sets both I and V to no-treatment
// inside the match), while the notice branch follows the visual state. For
// DeepStyle the category term rides the visual feature. For AMR the
// perturbation delta_i rides the treated feature.
double counterfactual_score(const ParamSet& params, int u, int i,
                            const Eigen::Ref<const Eigen::VectorXd>& feature,
                            int category, const ReferenceSet& refs,
                            bool item_treated, bool visual_treated,
                            Fusion fusion = Fusion::kProduct);

// TE = Y(i, v, u) - Y(i*, v*, u)
double total_effect(const ParamSet& params, int u, int i,
                    const Eigen::Ref<const Eigen::VectorXd>& feature,
                    int category, const ReferenceSet& refs,
                    Fusion fusion = Fusion::kProduct);

// NDE = Y(i*, v, u) - Y(i*, v*, u)
double natural_direct_effect(const ParamSet& params, int u, int i,
                             const Eigen::Ref<const Eigen::VectorXd>& feature,
                             int category, const ReferenceSet& refs,
                             Fusion fusion = Fusion::kProduct);

// TIE = Y(i, v, u) - Y(i*, v, u), computed directly rather than as TE - NDE.
double total_indirect_effect(const ParamSet& params, int u, int i,
                             const Eigen::Ref<const Eigen::VectorXd>& feature,
                             int category, const ReferenceSet& refs,
                             Fusion fusion = Fusion::kProduct);

// Closed form of VBPR's TIE: beta_i - beta_{i*} + gamma_u . (gamma_i -
// gamma_{i*}). Needs no feature access.
double debiased_score_vbpr(const ParamSet& params, int u, int i,
                           const ReferenceSet& refs);

// Closed form shared by DeepStyle and AMR: gamma_u . (gamma_i - gamma_{i*});
// the visual and perturbation terms cancel because v stays at treatment.
double debiased_score_amr(const ParamSet& params, int u, int i,
                          const ReferenceSet& refs);

// CausalRec inference with a debias scale: the full fused score minus
// lambda2 times the no-treatment match fused with the item's own notice.
// lambda2 = 0 reproduces the biased score exactly; lambda2 = 1 is the TIE.
double debiased_score_causalrec(const ParamSet& params, int u, int i,
                                const Eigen::Ref<const Eigen::VectorXd>& feature,
                                const ReferenceSet& refs, double lambda2,
                                Fusion fusion = Fusion::kProduct);

// Counterfactual scorer for ranking; throws ConfigError for kinds without a
// debiased variant (MF, DVBPR).
Scorer make_debiased_scorer(const ParamSet& params,
                            const Eigen::MatrixXd& features,
                            const ReferenceSet& refs, double lambda2,
                            Fusion fusion);

}  // namespace visrec
