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
#include "visrec/types.hpp"

namespace visrec {

const char* Error::category_name() const {
  switch (category_) {
    case Category::kConfig:
      return "config";
    case Category::kParse:
      return "parse";
    case Category::kData:
      return "data";
    case Category::kProtocol:
      return "protocol";
  }
  return "unknown";
}

const char* name(ModelKind kind) {
  switch (kind) {
    case ModelKind::kMF:
      return "MF";
    case ModelKind::kVBPR:
      return "VBPR";
    case ModelKind::kDeepStyle:
      return "DeepStyle";
    case ModelKind::kAMR:
      return "AMR";
    case ModelKind::kDVBPR:
      return "DVBPR";
    case ModelKind::kCausalRec:
      return "CausalRec";
  }
  return "?";
}

const char* name(ReferenceMode mode) {
  return mode == ReferenceMode::kMean ? "mean" : "zero";
}

const char* name(Fusion fusion) {
  return fusion == Fusion::kProduct ? "product" : "sum";
}

ModelKind parse_model_kind(const std::string& s) {
  if (s == "MF" || s == "mf" || s == "BPR-MF" || s == "bpr-mf") return ModelKind::kMF;
  if (s == "VBPR" || s == "vbpr") return ModelKind::kVBPR;
  if (s == "DeepStyle" || s == "deepstyle") return ModelKind::kDeepStyle;
  if (s == "AMR" || s == "amr") return ModelKind::kAMR;
  if (s == "DVBPR" || s == "dvbpr") return ModelKind::kDVBPR;
  if (s == "CausalRec" || s == "causalrec") return ModelKind::kCausalRec;
  throw ConfigError("unknown model kind: '" + s + "'");
}

ReferenceMode parse_reference_mode(const std::string& s) {
  if (s == "mean") return ReferenceMode::kMean;
  if (s == "zero") return ReferenceMode::kZero;
  throw ConfigError("unknown reference mode: '" + s + "' (expected mean|zero)");
}

Fusion parse_fusion(const std::string& s) {
  if (s == "product") return Fusion::kProduct;
  if (s == "sum") return Fusion::kSum;
  throw ConfigError("unknown fusion: '" + s + "' (expected product|sum)");
}

bool uses_offset(ModelKind kind) {
  return kind == ModelKind::kMF || kind == ModelKind::kVBPR ||
         kind == ModelKind::kDVBPR;
}

bool uses_item_bias(ModelKind kind) {
  return kind == ModelKind::kMF || kind == ModelKind::kVBPR;
}

bool uses_latent(ModelKind kind) { return kind != ModelKind::kDVBPR; }

bool uses_theta(ModelKind kind) {
  return kind == ModelKind::kVBPR || kind == ModelKind::kDVBPR ||
         kind == ModelKind::kCausalRec;
}

bool uses_visual(ModelKind kind) { return kind != ModelKind::kMF; }

bool uses_categories(ModelKind kind) { return kind == ModelKind::kDeepStyle; }

bool uses_delta(ModelKind kind) { return kind == ModelKind::kAMR; }

bool has_debiased_scorer(ModelKind kind) {
  return kind == ModelKind::kVBPR || kind == ModelKind::kDeepStyle ||
         kind == ModelKind::kAMR || kind == ModelKind::kCausalRec;
}

void TrainConfig::validate() const {
  if (embedding_dim < 1) throw ConfigError("embedding_dim must be >= 1");
  if (visual_dim < 1) throw ConfigError("visual_dim must be >= 1");
  if (!(learning_rate > 0)) throw ConfigError("learning_rate must be positive");
  if (batch_size < 1) throw ConfigError("batch_size must be >= 1");
  if (epochs < 0) throw ConfigError("epochs must be >= 0");
  if (lambda1 < 0) throw ConfigError("lambda1 must be >= 0");
  if (lambda2 < 0) throw ConfigError("lambda2 must be >= 0");
  if (!(adam_beta1 > 0 && adam_beta1 < 1))
    throw ConfigError("adam_beta1 must be in (0,1)");
  if (!(adam_beta2 > 0 && adam_beta2 < 1))
    throw ConfigError("adam_beta2 must be in (0,1)");
  if (!(adam_eps > 0)) throw ConfigError("adam_eps must be positive");
  if (amr_epsilon < 0) throw ConfigError("amr_epsilon must be >= 0");
  if (early_stop_patience < 0)
    throw ConfigError("early_stop_patience must be >= 0");
}

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t stream) {
  return splitmix64(seed ^ splitmix64(stream));
}

}  // namespace visrec
