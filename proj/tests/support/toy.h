// tests/support/toy.h
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

#ifndef DSVAE_TESTS_SUPPORT_TOY_H_
#define DSVAE_TESTS_SUPPORT_TOY_H_

#include <random>

#include "dsvae/model/dsvae.h"

namespace dsvae::testing {

// T=2, d=4, every hidden width 8.
inline model::ModelConfig toy_model_config() {
  model::ModelConfig c;
  c.feature_dim = 4;
  c.seg_len = 2;
  c.shared_dim = 8;
  c.speaker_dim = 3;
  c.content_dim = 2;
  c.encoder_hidden = 8;
  c.head_hidden = 8;
  c.prior_hidden = 8;
  c.decoder_hidden = 8;
  return c;
}

inline ad::Tensor random_batch(const model::ModelConfig& c, std::size_t batch,
                               std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> g(0.0, 1.0);
  ad::Tensor t({c.seg_len, batch, c.feature_dim});
  for (double& v : t.data()) v = g(rng);
  return t;
}

// Finds a parameter by name; throws if absent.
inline ad::Tensor param(const model::Dsvae& m, const std::string& name) {
  for (const auto& p : m.params())
    if (p.name == name) return p.tensor;
  throw std::runtime_error("no parameter " + name);
}

}  // namespace dsvae::testing

#endif  // DSVAE_TESTS_SUPPORT_TOY_H_
