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

#include <cstdint>
#include <stdexcept>
#include <string>

namespace visrec {

// Errors carry a category that the CLI maps to a distinct exit code
// (config=2, parse=3, data=4, protocol=5).
class Error : public std::runtime_error {
 public:
  enum class Category { kConfig = 0, kParse, kData, kProtocol };

  Error(Category category, const std::string& message)
      : std::runtime_error(message), category_(category) {}

  Category category() const { return category_; }
  int exit_code() const { return 2 + static_cast<int>(category_); }
  const char* category_name() const;

 private:
  Category category_;
};

class ConfigError : public Error {
 public:
  explicit ConfigError(const std::string& m) : Error(Category::kConfig, m) {}
};
class ParseError : public Error {
 public:
  explicit ParseError(const std::string& m) : Error(Category::kParse, m) {}
};
class DataError : public Error {
 public:
  explicit DataError(const std::string& m) : Error(Category::kData, m) {}
};
class ProtocolError : public Error {
 public:
  explicit ProtocolError(const std::string& m) : Error(Category::kProtocol, m) {}
};

enum class ModelKind { kMF, kVBPR, kDeepStyle, kAMR, kDVBPR, kCausalRec };
enum class ReferenceMode { kMean, kZero };
enum class Fusion { kProduct, kSum };

const char* name(ModelKind kind);
const char* name(ReferenceMode mode);
const char* name(Fusion fusion);
ModelKind parse_model_kind(const std::string& s);
ReferenceMode parse_reference_mode(const std::string& s);
Fusion parse_fusion(const std::string& s);

// Which parameter tables a model kind reads. A ParamSet only allocates the
// tables its kind uses.
bool uses_offset(ModelKind kind);      // alpha, beta_u
bool uses_item_bias(ModelKind kind);   // beta_i
bool uses_latent(ModelKind kind);      // gamma_u, gamma_i
bool uses_theta(ModelKind kind);       // theta_u
bool uses_visual(ModelKind kind);      // E and a feature input
bool uses_categories(ModelKind kind);  // c (DeepStyle)
bool uses_delta(ModelKind kind);       // adversarial perturbation (AMR)

// MF and DVBPR have no counterfactual scorer; they participate as biased
// baselines only.
bool has_debiased_scorer(ModelKind kind);

struct TrainConfig {
  int embedding_dim = 32;  // K
  int visual_dim = 0;      // D, taken from the feature store
  double learning_rate = 0.01;
  int batch_size = 100;
  int epochs = 100;
  double lambda1 = 0.01;  // l2 weight
  double lambda2 = 1.0;   // debias scale at inference
  double adam_beta1 = 0.9;
  double adam_beta2 = 0.999;
  double adam_eps = 1e-8;
  std::int64_t seed = 42;
  ReferenceMode reference_mode = ReferenceMode::kMean;
  Fusion fusion = Fusion::kProduct;
  bool multitask = true;
  // Count the l2 penalty once per triple (default) or once per task term.
  bool multitask_reg_triple = false;
  double amr_epsilon = 0.05;
  bool exclude_train_positives = true;
  // Early stop on validation MRR after this many epochs without improvement;
  // 0 disables.
  int early_stop_patience = 0;

  void validate() const;  // throws ConfigError
};

// SplitMix64; used to derive decorrelated seeds for named RNG streams.
std::uint64_t splitmix64(std::uint64_t x);
std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t stream);

}  // namespace visrec
