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

#include <string>

#include "visrec/params.hpp"

namespace visrec {

// Versioned little-endian binary checkpoint: magic "VRCP", u32 version,
// model kind, a TrainConfig echo, table dimensions, then every ParamSet
// table as raw float64 (row-major). Round-trips bitwise.
struct Checkpoint {
  ParamSet params;
  TrainConfig config;
};

void save_checkpoint(const std::string& path, const ParamSet& params,
                     const TrainConfig& config);

Checkpoint load_checkpoint(const std::string& path);

}  // namespace visrec
