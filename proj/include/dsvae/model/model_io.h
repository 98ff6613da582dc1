// include/dsvae/model/model_io.h
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

#ifndef DSVAE_MODEL_MODEL_IO_H_
#define DSVAE_MODEL_MODEL_IO_H_

#include <map>
#include <optional>
#include <string>

#include "dsvae/ad/adam.h"
#include "dsvae/dsp/features.h"
#include "dsvae/model/dsvae.h"

namespace dsvae::model {

// Everything inference needs, recovered from one checkpoint file: the
// model and feature configs are echoed in the header, normalization
// statistics and optimizer moments are stored as extra tensor records
// ("feature.norm_mean", "adam.m.<param>", ...).
struct ModelBundle {
  ModelConfig model_config;
  dsp::FeatureConfig feature_config;
  Dsvae model;
  std::optional<ad::AdamState> optimizer;
  // Header keys that belong to neither config (epoch, tags, ...).
  std::map<std::string, std::string> metadata;
};

void save_model(const std::string& path, const Dsvae& model,
                const dsp::FeatureConfig& features,
                const ad::AdamState* optimizer = nullptr,
                const std::map<std::string, std::string>& metadata = {});

ModelBundle load_model(const std::string& path);

// The config echo written into a checkpoint header.
std::string model_header_text(const ModelConfig& model,
                              const dsp::FeatureConfig& features,
                              const std::map<std::string, std::string>& metadata);

}  // namespace dsvae::model

#endif  // DSVAE_MODEL_MODEL_IO_H_
