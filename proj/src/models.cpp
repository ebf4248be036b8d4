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
#include "visrec/models.hpp"

#include <cmath>

namespace visrec {

double sigmoid(double x) {
  if (x >= 0) return 1.0 / (1.0 + std::exp(-x));
  double e = std::exp(x);
  return e / (1.0 + e);
}

Eigen::VectorXd project_visual(const ParamSet& params,
                               const Eigen::Ref<const Eigen::VectorXd>& feature) {
  if (feature.size() != params.E.cols())
    throw DataError("project_visual: feature dimension " +
                    std::to_string(feature.size()) + " does not match E (" +
                    std::to_string(params.E.cols()) + ")");
  return params.E * feature;
}

double score_mf(const ParamSet& params, int u, int i) {
  return params.alpha + params.beta_u(u) + params.beta_i(i) +
         params.gamma_u.row(u).dot(params.gamma_i.row(i));
}

double score_vbpr(const ParamSet& params, int u, int i,
                  const Eigen::Ref<const Eigen::VectorXd>& feature) {
  return score_mf(params, u, i) +
         params.theta_u.row(u).dot((params.E * feature).transpose());
}

double score_deepstyle(const ParamSet& params, int u, int i,
                       const Eigen::Ref<const Eigen::VectorXd>& feature,
                       int category) {
  Eigen::VectorXd style = params.E * feature - params.c.row(category).transpose() +
                          params.gamma_i.row(i).transpose();
  return params.gamma_u.row(u).dot(style.transpose());
}

double score_amr(const ParamSet& params, int u, int i,
                 const Eigen::Ref<const Eigen::VectorXd>& feature) {
  Eigen::VectorXd perturbed = feature + params.delta.row(i).transpose();
  Eigen::VectorXd inner = params.E * perturbed + params.gamma_i.row(i).transpose();
  return params.gamma_u.row(u).dot(inner.transpose());
}

double score_dvbpr(const ParamSet& params, int u,
                   const Eigen::Ref<const Eigen::VectorXd>& feature) {
  return params.alpha + params.beta_u(u) +
         params.theta_u.row(u).dot((params.E * feature).transpose());
}

CausalFactors causalrec_factors(const ParamSet& params, int u, int i,
                                const Eigen::Ref<const Eigen::VectorXd>& feature) {
  Eigen::VectorXd projected = params.E * feature;
  CausalFactors f;
  f.m_iu = sigmoid(params.gamma_u.row(u).dot(params.gamma_i.row(i)));
  f.m_ivu = sigmoid(params.gamma_u.row(u).dot(
      params.gamma_i.row(i).cwiseProduct(projected.transpose())));
  f.n_vu = sigmoid(params.theta_u.row(u).dot(projected.transpose()));
  return f;
}

double score_causalrec(const CausalFactors& factors, Fusion fusion) {
  if (fusion == Fusion::kProduct)
    return factors.m_iu * factors.m_ivu * factors.n_vu;
  return factors.m_iu + factors.m_ivu + factors.n_vu;
}

double biased_score(const ParamSet& params, int u, int i,
                    const Eigen::Ref<const Eigen::VectorXd>& feature,
                    int category, Fusion fusion) {
  switch (params.kind) {
    case ModelKind::kMF:
      return score_mf(params, u, i);
    case ModelKind::kVBPR:
      return score_vbpr(params, u, i, feature);
    case ModelKind::kDeepStyle:
      return score_deepstyle(params, u, i, feature, category);
    case ModelKind::kAMR:
      return score_amr(params, u, i, feature);
    case ModelKind::kDVBPR:
      return score_dvbpr(params, u, feature);
    case ModelKind::kCausalRec:
      return score_causalrec(causalrec_factors(params, u, i, feature), fusion);
  }
  throw ProtocolError("biased_score: unknown model kind");
}

Scorer make_biased_scorer(const ParamSet& params,
                          const Eigen::MatrixXd& features,
                          const std::vector<int>* categories, Fusion fusion) {
  const ParamSet& p = params;

  switch (p.kind) {
    case ModelKind::kMF:
      return [&p](int u, int i) { return score_mf(p, u, i); };
    case ModelKind::kVBPR: {
      // projected(i) = E phi_i, computed once for the whole item set.
      auto projected =
          std::make_shared<Eigen::MatrixXd>(features * p.E.transpose());
      return [&p, projected](int u, int i) {
        return score_mf(p, u, i) + p.theta_u.row(u).dot(projected->row(i));
      };
    }
    case ModelKind::kDeepStyle: {
      auto projected =
          std::make_shared<Eigen::MatrixXd>(features * p.E.transpose());
      return [&p, projected, categories](int u, int i) {
        int cat = categories && !categories->empty() ? (*categories)[i] : 0;
        return p.gamma_u.row(u).dot(projected->row(i) - p.c.row(cat) +
                                    p.gamma_i.row(i));
      };
    }
    case ModelKind::kAMR: {
      auto projected = std::make_shared<Eigen::MatrixXd>(
          (features + p.delta) * p.E.transpose());
      return [&p, projected](int u, int i) {
        return p.gamma_u.row(u).dot(projected->row(i) + p.gamma_i.row(i));
      };
    }
    case ModelKind::kDVBPR: {
      auto projected =
          std::make_shared<Eigen::MatrixXd>(features * p.E.transpose());
      return [&p, projected](int u, int i) {
        return p.alpha + p.beta_u(u) + p.theta_u.row(u).dot(projected->row(i));
      };
    }
    case ModelKind::kCausalRec: {
      auto projected =
          std::make_shared<Eigen::MatrixXd>(features * p.E.transpose());
      return [&p, projected, fusion](int u, int i) {
        CausalFactors f;
        f.m_iu = sigmoid(p.gamma_u.row(u).dot(p.gamma_i.row(i)));
        f.m_ivu = sigmoid(p.gamma_u.row(u).dot(
            p.gamma_i.row(i).cwiseProduct(projected->row(i))));
        f.n_vu = sigmoid(p.theta_u.row(u).dot(projected->row(i)));
        return score_causalrec(f, fusion);
      };
    }
  }
  throw ProtocolError("make_biased_scorer: unknown model kind");
}

}  // namespace visrec
