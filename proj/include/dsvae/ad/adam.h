// include/dsvae/ad/adam.h
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

#ifndef DSVAE_AD_ADAM_H_
#define DSVAE_AD_ADAM_H_

#include <cstdint>
#include <vector>

#include "dsvae/ad/tensor.h"

namespace dsvae::ad {

struct AdamOptions {
  double learning_rate = 5e-4;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
  double weight_decay = 1e-4;
};

// Moments are allocated lazily on the first step, shaped like the params.
struct AdamState {
  AdamOptions options;
  std::uint64_t step = 0;
  std::vector<std::vector<double>> first_moment;
  std::vector<std::vector<double>> second_moment;
};

// One bias-corrected Adam update with decoupled weight decay
// (p ← p − lr·wd·p before the moment step). Parameters without a gradient
// buffer are treated as having zero gradient. Throws Diverged on a
// non-finite gradient, before touching any parameter.
void adam_step(const ParamList& params, AdamState& state);

// lr · factor^⌊epoch / every⌋ for a zero-based epoch index.
double scheduled_learning_rate(double initial, int epoch, int every = 5,
                               double factor = 0.95);

void zero_grads(const ParamList& params);

}  // namespace dsvae::ad

#endif  // DSVAE_AD_ADAM_H_
