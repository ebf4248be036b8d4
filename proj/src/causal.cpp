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
#include "visrec/causal.hpp"

namespace visrec {

ReferenceSet reference_values(const ParamSet& params,
                              const Eigen::MatrixXd& features,
                              ReferenceMode mode) {
  if (params.n_items <= 0 || features.rows() == 0)
    throw DataError("reference_values: empty item set");

  ReferenceSet refs;
  refs.mode = mode;
  refs.gamma_ref = Eigen::VectorXd::Zero(params.embedding_dim);
  refs.feature_ref = Eigen::VectorXd::Zero(features.cols());
  refs.c_ref = Eigen::VectorXd::Zero(params.embedding_dim);
  if (mode == ReferenceMode::kZero) return refs;

  if (params.beta_i.size() > 0) refs.beta_ref = params.beta_i.mean();
  if (params.gamma_i.size() > 0)
    refs.gamma_ref = params.gamma_i.colwise().mean();
  refs.feature_ref = features.colwise().mean();
  if (params.c.size() > 0) refs.c_ref = params.c.colwise().mean();
  return refs;
}

ReferenceSet reference_values(const ParamSet& params, const Dataset& dataset,
                              const FeatureStore& store, ReferenceMode mode) {
  return reference_values(params, feature_matrix(store, dataset), mode);
}

double counterfactual_score(const ParamSet& params, int u, int i,
                            const Eigen::Ref<const Eigen::VectorXd>& feature,
                            int category, const ReferenceSet& refs,
                            bool item_treated, bool visual_treated,
                            Fusion fusion) {
  auto gamma_item = [&]() -> Eigen::VectorXd {
    if (item_treated) return params.gamma_i.row(i);
    return refs.gamma_ref;
  };

  switch (params.kind) {
    case ModelKind::kMF: {
      double beta_item = item_treated ? params.beta_i(i) : refs.beta_ref;
      return params.alpha + params.beta_u(u) + beta_item +
             params.gamma_u.row(u).dot(gamma_item().transpose());
    }
    case ModelKind::kVBPR: {
      double beta_item = item_treated ? params.beta_i(i) : refs.beta_ref;
      const Eigen::VectorXd& v = visual_treated ? feature : refs.feature_ref;
      return params.alpha + params.beta_u(u) + beta_item +
             params.gamma_u.row(u).dot(gamma_item().transpose()) +
             params.theta_u.row(u).dot((params.E * v).transpose());
    }
    case ModelKind::kDeepStyle: {
      // The category is visual information of the image, so it follows v.
      const Eigen::VectorXd& v = visual_treated ? feature : refs.feature_ref;
      Eigen::VectorXd c_term = visual_treated
                                   ? Eigen::VectorXd(params.c.row(category))
                                   : refs.c_ref;
      Eigen::VectorXd inner = params.E * v - c_term + gamma_item();
      return params.gamma_u.row(u).dot(inner.transpose());
    }
    case ModelKind::kAMR: {
      // delta_i rides the treated feature; the reference carries none.
      Eigen::VectorXd v = visual_treated
                              ? Eigen::VectorXd(feature +
                                                params.delta.row(i).transpose())
                              : refs.feature_ref;
      Eigen::VectorXd inner = params.E * v + gamma_item();
      return params.gamma_u.row(u).dot(inner.transpose());
    }
    case ModelKind::kDVBPR: {
      // The item enters only through its feature; there is no item-side
      // parameter to substitute, so the indirect path is empty.
      const Eigen::VectorXd& v = visual_treated ? feature : refs.feature_ref;
      return params.alpha + params.beta_u(u) +
             params.theta_u.row(u).dot((params.E * v).transpose());
    }
    case ModelKind::kCausalRec: {
      const Eigen::VectorXd& match_v = item_treated ? feature : refs.feature_ref;
      const Eigen::VectorXd& notice_v =
          visual_treated ? feature : refs.feature_ref;
      Eigen::VectorXd g = gamma_item();
      Eigen::VectorXd match_p = params.E * match_v;
      Eigen::VectorXd notice_p = params.E * notice_v;
      CausalFactors f;
      f.m_iu = sigmoid(params.gamma_u.row(u).dot(g.transpose()));
      f.m_ivu = sigmoid(
          params.gamma_u.row(u).dot(g.cwiseProduct(match_p).transpose()));
      f.n_vu = sigmoid(params.theta_u.row(u).dot(notice_p.transpose()));
      return score_causalrec(f, fusion);
    }
  }
  throw ProtocolError("counterfactual_score: unknown model kind");
}

double total_effect(const ParamSet& params, int u, int i,
                    const Eigen::Ref<const Eigen::VectorXd>& feature,
                    int category, const ReferenceSet& refs, Fusion fusion) {
  return counterfactual_score(params, u, i, feature, category, refs, true, true,
                              fusion) -
         counterfactual_score(params, u, i, feature, category, refs, false,
                              false, fusion);
}

double natural_direct_effect(const ParamSet& params, int u, int i,
                             const Eigen::Ref<const Eigen::VectorXd>& feature,
                             int category, const ReferenceSet& refs,
                             Fusion fusion) {
  return counterfactual_score(params, u, i, feature, category, refs, false,
                              true, fusion) -
         counterfactual_score(params, u, i, feature, category, refs, false,
                              false, fusion);
}

double total_indirect_effect(const ParamSet& params, int u, int i,
                             const Eigen::Ref<const Eigen::VectorXd>& feature,
                             int category, const ReferenceSet& refs,
                             Fusion fusion) {
  return counterfactual_score(params, u, i, feature, category, refs, true, true,
                              fusion) -
         counterfactual_score(params, u, i, feature, category, refs, false,
                              true, fusion);
}

double debiased_score_vbpr(const ParamSet& params, int u, int i,
                           const ReferenceSet& refs) {
  return params.beta_i(i) - refs.beta_ref +
         params.gamma_u.row(u).dot(
             (params.gamma_i.row(i).transpose() - refs.gamma_ref).transpose());
}

double debiased_score_amr(const ParamSet& params, int u, int i,
                          const ReferenceSet& refs) {
  return params.gamma_u.row(u).dot(
      (params.gamma_i.row(i).transpose() - refs.gamma_ref).transpose());
}

double debiased_score_causalrec(const ParamSet& params, int u, int i,
                                const Eigen::Ref<const Eigen::VectorXd>& feature,
                                const ReferenceSet& refs, double lambda2,
                                Fusion fusion) {
  CausalFactors f = causalrec_factors(params, u, i, feature);
  Eigen::VectorXd ref_p = params.E * refs.feature_ref;
  double m_ref = sigmoid(params.gamma_u.row(u).dot(refs.gamma_ref.transpose()));
  double mv_ref = sigmoid(params.gamma_u.row(u).dot(
      refs.gamma_ref.cwiseProduct(ref_p).transpose()));
  if (fusion == Fusion::kProduct)
    return f.m_iu * f.m_ivu * f.n_vu - lambda2 * m_ref * mv_ref * f.n_vu;
  return (f.m_iu + f.m_ivu + f.n_vu) - lambda2 * (m_ref + mv_ref + f.n_vu);
}

Scorer make_debiased_scorer(const ParamSet& params,
                            const Eigen::MatrixXd& features,
                            const ReferenceSet& refs, double lambda2,
                            Fusion fusion) {
  const ParamSet& p = params;
  switch (p.kind) {
    case ModelKind::kVBPR: {
      auto r = std::make_shared<ReferenceSet>(refs);
      return [&p, r](int u, int i) { return debiased_score_vbpr(p, u, i, *r); };
    }
    case ModelKind::kDeepStyle:
    case ModelKind::kAMR: {
      auto r = std::make_shared<ReferenceSet>(refs);
      return [&p, r](int u, int i) { return debiased_score_amr(p, u, i, *r); };
    }
    case ModelKind::kCausalRec: {
      auto projected =
          std::make_shared<Eigen::MatrixXd>(features * p.E.transpose());
      auto ref_p = std::make_shared<Eigen::VectorXd>(p.E * refs.feature_ref);
      auto gamma_ref = std::make_shared<Eigen::VectorXd>(refs.gamma_ref);
      return [&p, projected, ref_p, gamma_ref, lambda2, fusion](int u, int i) {
        CausalFactors f;
        f.m_iu = sigmoid(p.gamma_u.row(u).dot(p.gamma_i.row(i)));
        f.m_ivu = sigmoid(p.gamma_u.row(u).dot(
            p.gamma_i.row(i).cwiseProduct(projected->row(i))));
        f.n_vu = sigmoid(p.theta_u.row(u).dot(projected->row(i)));
        double m_ref = sigmoid(p.gamma_u.row(u).dot(gamma_ref->transpose()));
        double mv_ref = sigmoid(p.gamma_u.row(u).dot(
            gamma_ref->cwiseProduct(*ref_p).transpose()));
        if (fusion == Fusion::kProduct)
          return f.m_iu * f.m_ivu * f.n_vu - lambda2 * m_ref * mv_ref * f.n_vu;
        return (f.m_iu + f.m_ivu + f.n_vu) - lambda2 * (m_ref + mv_ref + f.n_vu);
      };
    }
    case ModelKind::kMF:
    case ModelKind::kDVBPR:
      throw ConfigError(std::string("model ") + name(p.kind) +
                        " has no counterfactual scorer");
  }
  throw ProtocolError("make_debiased_scorer: unknown model kind");
}

}  // namespace visrec
