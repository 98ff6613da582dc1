// src/train/trainer.cc
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

#include "dsvae/train/trainer.h"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>

#include "dsvae/common/error.h"
#include "dsvae/common/io_util.h"
#include "dsvae/model/model_io.h"

namespace dsvae::train {

std::string log_header() {
  return "epoch\ttotal\trecon\tkl_speaker\tkl_content\tlr\twall_seconds";
}

std::string format_log_line(const EpochLog& e) {
  using io::format_double;
  return std::to_string(e.epoch) + "\t" + format_double(e.total) + "\t" +
         format_double(e.recon) + "\t" + format_double(e.kl_speaker) + "\t" +
         format_double(e.kl_content) + "\t" + format_double(e.lr) + "\t" +
         format_double(e.wall_seconds);
}

EpochLog parse_log_line(const std::string& line) {
  const auto f = io::split(line, '\t');
  if (f.size() != 7) throw InvalidArgument("training log line needs 7 fields: " + line);
  EpochLog e;
  e.epoch = model::parse_count("epoch", f[0]);
  e.total = io::parse_double(f[1]);
  e.recon = io::parse_double(f[2]);
  e.kl_speaker = io::parse_double(f[3]);
  e.kl_content = io::parse_double(f[4]);
  e.lr = io::parse_double(f[5]);
  e.wall_seconds = io::parse_double(f[6]);
  return e;
}

std::mt19937_64 make_stream(std::uint64_t seed, Stream s) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed),
                    static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(s)};
  return std::mt19937_64(seq);
}

double learning_rate(const TrainConfig& cfg, std::size_t epoch) {
  if (epoch < 1) throw InvalidArgument("epochs are numbered from 1");
  return ad::scheduled_learning_rate(cfg.lr_initial, static_cast<int>(epoch - 1),
                                     static_cast<int>(cfg.lr_decay_every),
                                     cfg.lr_decay);
}

double kl_scale(const TrainConfig& cfg, std::size_t step, std::size_t steps_per_epoch) {
  if (cfg.kl_warmup_epochs == 0) return 1.0;
  const double ramp = static_cast<double>(cfg.kl_warmup_epochs * steps_per_epoch);
  return std::min(1.0, static_cast<double>(step + 1) / ramp);
}

model::LossBreakdown train_step(const model::Dsvae& model, const Batch& batch,
                                ad::AdamState& adam, double lr,
                                std::mt19937_64& latent_rng, double kl_scale) {
  ad::Tape tape;
  model::LossBreakdown l =
      model.loss(tape, batch.augmented, batch.clean, latent_rng, kl_scale);
  tape.backward(l.total_tensor);
  tape.clear();
  adam.options.learning_rate = lr;
  adam_step(model.params(), adam);
  for (const auto& p : model.params()) p.tensor.zero_grad();
  return l;
}

TrainResult train(const Dataset& data, const model::ModelConfig& model_cfg,
                  const TrainConfig& cfg, const TrainOptions& options) {
  model_cfg.validate();
  cfg.validate();
  if (data.seg_len() != model_cfg.seg_len)
    throw InvalidArgument("dataset segments are " + std::to_string(data.seg_len()) +
                          " frames but the model expects " +
                          std::to_string(model_cfg.seg_len));
  if (static_cast<std::size_t>(data.features().feature_dim) != model_cfg.feature_dim)
    throw InvalidArgument("dataset feature_dim differs from the model's");
  if (cfg.augment && options.noise == nullptr)
    throw InvalidArgument("augmentation is on but no noise bank was given");

  auto init_rng = make_stream(cfg.seed, Stream::kInit);
  TrainResult r{model::Dsvae(model_cfg, init_rng()), {}, {}, 0};
  r.optimizer.options.weight_decay = cfg.weight_decay;
  auto order_rng = make_stream(cfg.seed, Stream::kOrder);
  auto noise_rng = make_stream(cfg.seed, Stream::kNoise);
  auto latent_rng = make_stream(cfg.seed, Stream::kLatent);
  const NoiseBank* bank = cfg.augment ? options.noise : nullptr;

  std::ofstream log_file;
  namespace fs = std::filesystem;
  if (!options.out_dir.empty()) {
    fs::create_directories(options.out_dir);
    log_file.open(fs::path(options.out_dir) / "train_log.tsv");
    if (!log_file) throw IoError("cannot write " + options.out_dir + "/train_log.tsv");
    log_file << log_header() << "\n";
  }

  double best = std::numeric_limits<double>::infinity();
  std::size_t step = 0;
  const auto start = std::chrono::steady_clock::now();
  for (std::size_t epoch = 1; epoch <= cfg.epochs; ++epoch) {
    EpochLog e;
    e.epoch = epoch;
    e.lr = learning_rate(cfg, epoch);
    double count = 0.0;
    const auto batches =
        epoch_batches(data, cfg.batch_size, cfg.segments_per_epoch, order_rng);
    for (const auto& refs : batches) {
      const Batch batch = make_batch(data, refs, bank, cfg.noise, noise_rng);
      const double w = kl_scale(cfg, step++, batches.size());
      const auto l = train_step(r.model, batch, r.optimizer, e.lr, latent_rng, w);
      const double n = static_cast<double>(refs.size());
      e.total += n * l.total;
      e.recon += n * l.recon_nll;
      e.kl_speaker += n * l.kl_speaker;
      e.kl_content += n * l.kl_content;
      e.mse += n * l.mse;
      count += n;
    }
    for (double* v : {&e.total, &e.recon, &e.kl_speaker, &e.kl_content, &e.mse})
      *v /= count;
    e.wall_seconds = std::chrono::duration<double>(
                         std::chrono::steady_clock::now() - start)
                         .count();
    r.log.push_back(e);

    if (!options.out_dir.empty()) {
      const auto dir = fs::path(options.out_dir);
      const std::map<std::string, std::string> meta{
          {"epoch", std::to_string(epoch)}, {"seed", std::to_string(cfg.seed)}};
      model::save_model((dir / "last.ckpt").string(), r.model, data.features(),
                        &r.optimizer, meta);
      if (e.total < best)
        model::save_model((dir / "best.ckpt").string(), r.model, data.features(),
                          &r.optimizer, meta);
      log_file << format_log_line(e) << "\n";
      log_file.flush();
    }
    if (e.total < best) {
      best = e.total;
      r.best_epoch = epoch;
    }
    if (options.on_epoch) options.on_epoch(e, r.model);
  }
  return r;
}

}  // namespace dsvae::train
