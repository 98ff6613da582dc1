// include/dsvae/train/trainer.h
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

#ifndef DSVAE_TRAIN_TRAINER_H_
#define DSVAE_TRAIN_TRAINER_H_

#include <cstdint>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "dsvae/ad/adam.h"
#include "dsvae/model/dsvae.h"
#include "dsvae/train/config_file.h"
#include "dsvae/train/dataset.h"

namespace dsvae::train {

// Batch-size-weighted means over one epoch.
struct EpochLog {
  std::size_t epoch = 0;  // 1-based
  double total = 0.0;
  double recon = 0.0;
  double kl_speaker = 0.0;
  double kl_content = 0.0;
  double mse = 0.0;
  double lr = 0.0;
  double wall_seconds = 0.0;
};

// Training log columns: epoch, total, recon, kl_speaker, kl_content, lr,
// wall_seconds.
std::string log_header();
std::string format_log_line(const EpochLog& e);
EpochLog parse_log_line(const std::string& line);

// Independent generator streams derived from one seed.
enum class Stream : std::uint64_t { kInit = 1, kOrder = 2, kNoise = 3, kLatent = 4 };
std::mt19937_64 make_stream(std::uint64_t seed, Stream s);

// Learning rate at a 1-based epoch.
double learning_rate(const TrainConfig& cfg, std::size_t epoch);

// KL weight multiplier for a 0-based optimizer step.
double kl_scale(const TrainConfig& cfg, std::size_t step, std::size_t steps_per_epoch);

// One optimizer step: encode batch.augmented, reconstruct batch.clean.
model::LossBreakdown train_step(const model::Dsvae& model, const Batch& batch,
                                ad::AdamState& adam, double lr,
                                std::mt19937_64& latent_rng, double kl_scale = 1.0);

struct TrainOptions {
  // Checkpoints (last.ckpt every epoch, best.ckpt on improvement) and
  // train_log.tsv go here when non-empty.
  std::string out_dir;
  const NoiseBank* noise = nullptr;  // required when augment is on
  // Called after each epoch's checkpoints are written.
  std::function<void(const EpochLog&, const model::Dsvae&)> on_epoch;
};

struct TrainResult {
  model::Dsvae model;
  ad::AdamState optimizer;
  std::vector<EpochLog> log;
  std::size_t best_epoch = 0;
};

// Runs train_cfg.epochs epochs. On divergence the Diverged error propagates
// and the checkpoints of the last completed epoch are left in place.
TrainResult train(const Dataset& data, const model::ModelConfig& model_cfg,
                  const TrainConfig& train_cfg, const TrainOptions& options = {});

}  // namespace dsvae::train

#endif  // DSVAE_TRAIN_TRAINER_H_
