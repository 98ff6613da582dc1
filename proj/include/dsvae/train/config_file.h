// include/dsvae/train/config_file.h
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

#ifndef DSVAE_TRAIN_CONFIG_FILE_H_
#define DSVAE_TRAIN_CONFIG_FILE_H_

#include <cstdint>
#include <map>
#include <string>

#include "dsvae/dsp/features.h"
#include "dsvae/dsp/noise.h"
#include "dsvae/model/config.h"

namespace dsvae::train {

struct TrainConfig {
  std::size_t batch_size = 32;
  std::size_t epochs = 30;
  double lr_initial = 5e-4;
  double lr_decay = 0.95;
  std::size_t lr_decay_every = 5;  // epochs
  double weight_decay = 1e-4;
  // Noise-invariant training: encode a noisy copy, reconstruct the clean one.
  bool augment = false;
  dsp::NoiseMixSpec noise;
  std::uint64_t seed = 1;
  // Caps the segments visited per epoch; 0 means one full pass.
  std::size_t segments_per_epoch = 0;
  // Both KL weights ramp linearly from 0 over this many epochs; 0 disables.
  std::size_t kl_warmup_epochs = 0;

  void validate() const;
  bool set(const std::string& key, const std::string& value);
  std::map<std::string, std::string> to_map() const;
};

// Everything a config file can hold. Keys share one flat namespace.
struct RunConfig {
  model::ModelConfig model;
  dsp::FeatureConfig features;
  TrainConfig train;

  // Throws InvalidArgument naming the key when no section accepts it.
  void set(const std::string& key, const std::string& value);
  void validate() const;
  // Resolved key=value text, keys sorted; parses back to the same config.
  std::string to_text() const;
  // The feature config with feature_dim taken from the model.
  dsp::FeatureConfig resolved_features() const;
};

// Reads a key=value file. Unknown keys are rejected.
RunConfig load_run_config(const std::string& path);
RunConfig parse_run_config(const std::string& text, const std::string& origin);

}  // namespace dsvae::train

#endif  // DSVAE_TRAIN_CONFIG_FILE_H_
