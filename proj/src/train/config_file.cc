// src/train/config_file.cc
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

#include "dsvae/train/config_file.h"

#include "dsvae/common/error.h"
#include "dsvae/common/io_util.h"

namespace dsvae::train {

using model::parse_count;
using model::parse_flag;
using model::parse_real;

void TrainConfig::validate() const {
  if (batch_size < 1) throw InvalidArgument("batch_size must be >= 1");
  if (epochs < 1) throw InvalidArgument("epochs must be >= 1");
  if (!(lr_initial > 0.0)) throw InvalidArgument("lr must be positive");
  if (!(lr_decay > 0.0 && lr_decay <= 1.0))
    throw InvalidArgument("lr_decay must lie in (0, 1]");
  if (lr_decay_every < 1) throw InvalidArgument("lr_decay_every must be >= 1");
  if (!(weight_decay >= 0.0)) throw InvalidArgument("weight_decay must be >= 0");
  if (augment) noise.validate();
}

bool TrainConfig::set(const std::string& key, const std::string& value) {
  if (key == "batch_size") batch_size = parse_count(key, value);
  else if (key == "epochs") epochs = parse_count(key, value);
  else if (key == "lr") lr_initial = parse_real(key, value);
  else if (key == "lr_decay") lr_decay = parse_real(key, value);
  else if (key == "lr_decay_every") lr_decay_every = parse_count(key, value);
  else if (key == "weight_decay") weight_decay = parse_real(key, value);
  else if (key == "augment") augment = parse_flag(key, value);
  else if (key == "snr_min") noise.snr_db_min = parse_real(key, value);
  else if (key == "snr_max") noise.snr_db_max = parse_real(key, value);
  else if (key == "noise_categories") {
    noise.categories.clear();
    for (const auto& c : io::split(value, ','))
      if (!io::trim(c).empty()) noise.categories.push_back(io::trim(c));
  } else if (key == "seed") seed = parse_count(key, value);
  else if (key == "segments_per_epoch") segments_per_epoch = parse_count(key, value);
  else if (key == "kl_warmup_epochs") kl_warmup_epochs = parse_count(key, value);
  else return false;
  return true;
}

std::map<std::string, std::string> TrainConfig::to_map() const {
  std::string cats;
  for (std::size_t i = 0; i < noise.categories.size(); ++i)
    cats += (i ? "," : "") + noise.categories[i];
  return {
      {"batch_size", std::to_string(batch_size)},
      {"epochs", std::to_string(epochs)},
      {"lr", io::format_double(lr_initial)},
      {"lr_decay", io::format_double(lr_decay)},
      {"lr_decay_every", std::to_string(lr_decay_every)},
      {"weight_decay", io::format_double(weight_decay)},
      {"augment", augment ? "on" : "off"},
      {"snr_min", io::format_double(noise.snr_db_min)},
      {"snr_max", io::format_double(noise.snr_db_max)},
      {"noise_categories", cats},
      {"seed", std::to_string(seed)},
      {"segments_per_epoch", std::to_string(segments_per_epoch)},
      {"kl_warmup_epochs", std::to_string(kl_warmup_epochs)},
  };
}

void RunConfig::set(const std::string& key, const std::string& value) {
  if (model.set(key, value) || model::set_feature_key(features, key, value) ||
      train.set(key, value))
    return;
  throw InvalidArgument("unknown config key '" + key + "'");
}

dsp::FeatureConfig RunConfig::resolved_features() const {
  dsp::FeatureConfig f = features;
  f.feature_dim = static_cast<int>(model.feature_dim);
  return f;
}

void RunConfig::validate() const {
  model.validate();
  resolved_features().validate();
  train.validate();
}

std::string RunConfig::to_text() const {
  auto kv = model.to_map();
  for (auto& [k, v] : model::feature_config_to_map(features)) kv[k] = v;
  for (auto& [k, v] : train.to_map()) kv[k] = v;
  return model::to_config_text(kv);
}

RunConfig parse_run_config(const std::string& text, const std::string& origin) {
  RunConfig cfg;
  for (const auto& [k, v] : io::parse_key_values(text, origin)) {
    try {
      cfg.set(k, v);
    } catch (const InvalidArgument& e) {
      throw InvalidArgument(origin + ": " + e.what());
    }
  }
  return cfg;
}

RunConfig load_run_config(const std::string& path) {
  return parse_run_config(io::read_text_file(path), path);
}

}  // namespace dsvae::train
