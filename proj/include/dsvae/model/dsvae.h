// include/dsvae/model/dsvae.h
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

#ifndef DSVAE_MODEL_DSVAE_H_
#define DSVAE_MODEL_DSVAE_H_

#include <cstdint>
#include <memory>
#include <random>
#include <vector>

#include "dsvae/ad/layers.h"
#include "dsvae/dsp/features.h"
#include "dsvae/model/config.h"

namespace dsvae::model {

using ad::Tape;
using ad::Tensor;

// Posterior log-variances are clamped to this range.
inline constexpr double kLogVarMin = -10.0;
inline constexpr double kLogVarMax = 10.0;

// Diagonal Gaussian. Speaker posteriors are [1, B, d_S]; content posteriors
// and the content prior are [T, B, d_C].
struct Gaussian {
  Tensor mean;
  Tensor log_var;
};

// Standard normal draws used by sample(). Kept so that a forward pass can
// be replayed exactly.
struct LatentNoise {
  Tensor speaker;  // [1, B, d_S]
  Tensor content;  // [T, B, d_C]
};

// Scalar tape outputs plus their values. total = recon_nll + α·kl_speaker
// + β·kl_content. All terms are batch means; recon_nll and the KL terms are
// summed over time and dimensions within a segment.
struct LossBreakdown {
  Tensor total_tensor;
  double recon_nll = 0.0;  // 0.5·‖x − x̂‖² (unit-variance Gaussian, no const)
  double mse = 0.0;        // mean over elements of (x − x̂)²
  double kl_speaker = 0.0;
  double kl_content = 0.0;
  double total = 0.0;
};

struct InfoFlowReport {
  double kl_speaker = 0.0;
  double kl_content = 0.0;
  double sum = 0.0;
  double recon_nll = 0.0;
};

// Packs equally shaped T × d segments into a [T, B, d] tensor.
Tensor stack_segments(const std::vector<const dsp::Matrix*>& segments);
Tensor stack_segments(const std::vector<dsp::Matrix>& segments);
// Row block b of a [T, B, d] tensor as a T × d matrix.
dsp::Matrix unstack_segment(const Tensor& batch, std::size_t b);

// z = mean + exp(log_var / 2)·noise.
Tensor sample(Tape& tp, const Gaussian& g, const Tensor& noise);
LatentNoise draw_noise(const ModelConfig& cfg, std::size_t batch,
                       std::mt19937_64& rng);

// Closed-form KL summed over all but the batch axis, averaged over batch.
// The direction follows `dir`: q_to_p is KL(q ‖ p).
Tensor kl_divergence(Tape& tp, const Gaussian& q, const Gaussian& p,
                     KlDirection dir);
// KL against N(0, I).
Tensor kl_speaker(Tape& tp, const Gaussian& q, KlDirection dir);

class Dsvae {
 public:
  // Parameters are initialized from `seed`.
  Dsvae(const ModelConfig& cfg, std::uint64_t seed);
  ~Dsvae();
  Dsvae(Dsvae&&) noexcept;
  Dsvae& operator=(Dsvae&&) noexcept;

  const ModelConfig& config() const { return cfg_; }
  // Named trainable parameters in a fixed order.
  const ad::ParamList& params() const { return params_; }

  // x: [T, B, d] → W: [T, B, d_W].
  Tensor encode_shared(Tape& tp, const Tensor& x) const;
  // W → [1, B, d_S] posterior.
  Gaussian encode_speaker(Tape& tp, const Tensor& w) const;
  // W → [T, B, d_C] posterior.
  Gaussian encode_content(Tape& tp, const Tensor& w) const;
  // Per-step prior p(z_t | z_<t) given a [T, B, d_C] latent sequence. Step t
  // reads only z_0..z_{t-1}.
  Gaussian content_prior(Tape& tp, const Tensor& z_c) const;
  // z_s: [1, B, d_S], z_c: [T, B, d_C] → x̂: [T, B, d].
  Tensor decode(Tape& tp, const Tensor& z_s, const Tensor& z_c) const;

  struct Forward {
    Gaussian speaker;
    Gaussian content;
    Gaussian prior;
    Tensor z_s;
    Tensor z_c;
    Tensor recon;
  };
  // Full pass with the given reparameterization noise.
  Forward forward(Tape& tp, const Tensor& input,
                  const LatentNoise& noise) const;

  // Encodes `input`, reconstructs and scores against `target` (the clean
  // reference under noise-invariant training). Throws Diverged when any term
  // is not finite. `kl_scale` multiplies both KL weights (warm-up); the
  // reported total is always the unscaled objective.
  LossBreakdown loss(Tape& tp, const Tensor& input, const Tensor& target,
                     const LatentNoise& noise, double kl_scale = 1.0) const;
  LossBreakdown loss(Tape& tp, const Tensor& input, const Tensor& target,
                     std::mt19937_64& rng, double kl_scale = 1.0) const;

 private:
  struct Net;
  ModelConfig cfg_;
  std::unique_ptr<Net> net_;
  ad::ParamList params_;
};

// Batch-mean KL terms, their sum and the reconstruction NLL for one batch.
// Latents are sampled from `rng`; nothing is recorded for backward.
InfoFlowReport info_flow_report(const Dsvae& model, const Tensor& input,
                                const Tensor& target, std::mt19937_64& rng);

}  // namespace dsvae::model

#endif  // DSVAE_MODEL_DSVAE_H_
