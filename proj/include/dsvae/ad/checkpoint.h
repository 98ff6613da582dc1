// include/dsvae/ad/checkpoint.h
//
// Copyright 2026 The dsvae Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// THIS CODE IS PROVIDED *AS IS* BASIS, WITHOUT WARRANTIES OR CONDITIONS OF ANY
// KIND, EITHER EXPRESS OR IMPLIED, INCLUDING WITHOUT LIMITATION ANY IMPLIED
// WARRANTIES OR CONDITIONS OF TITLE, FITNESS FOR A PARTICULAR PURPOSE,
// MERCHANTABLITY OR NON-INFRINGEMENT.
// See the Apache 2 License for the specific language governing permissions and
// limitations under the License.

#ifndef DSVAE_AD_CHECKPOINT_H_
#define DSVAE_AD_CHECKPOINT_H_

#include <cstdint>
#include <string>
#include <vector>

#include "dsvae/ad/tensor.h"

namespace dsvae::ad {

// Binary layout, all integers and floats little-endian:
//   "DSVAE1"  u32 version
//   u32 len, config text (UTF-8 key=value lines)
//   repeated until EOF:
//     u32 len, name   u32 rank   rank × u32 extent   numel × f64
inline constexpr std::uint32_t kCheckpointVersion = 1;

struct Checkpoint {
  std::string config_text;
  ParamList params;
};

void save_checkpoint(const std::string& path, const std::string& config_text,
                     const ParamList& params);
Checkpoint load_checkpoint(const std::string& path);

// Copies values from `src` into same-named, same-shaped tensors in `dst`.
// Every destination parameter must be present.
void assign_params(const ParamList& src, const ParamList& dst);

}  // namespace dsvae::ad

#endif  // DSVAE_AD_CHECKPOINT_H_
