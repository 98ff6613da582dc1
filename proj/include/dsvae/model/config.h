// include/dsvae/model/config.h
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

#ifndef DSVAE_MODEL_CONFIG_H_
#define DSVAE_MODEL_CONFIG_H_

#include <cstdint>
#include <map>
#include <string>

#include "dsvae/dsp/features.h"

namespace dsvae::model {

enum class Variant { kTimitMlp, kVctkConv };
enum class KlDirection { kQToP, kPToQ };
// The recurrent layer that follows each encoder's BiLSTM stack.
enum class RnnLayer { kTanh, kLstm };

std::string to_string(Variant v);
std::string to_string(KlDirection d);
std::string to_string(RnnLayer r);

struct ModelConfig {
  std::size_t feature_dim = 200;   // d
  std::size_t seg_len = 20;        // T
  std::size_t shared_dim = 256;    // d_W
  std::size_t speaker_dim = 64;    // d_S
  std::size_t content_dim = 64;    // d_C
  Variant variant = Variant::kTimitMlp;
  double alpha = 1.0;
  double beta = 20.0;
  KlDirection kl_direction = KlDirection::kQToP;

  std::size_t encoder_hidden = 512;  // BiLSTM and RNN layer width
  std::size_t head_hidden = 512;     // first layer of the posterior heads
  std::size_t prior_hidden = 512;
  std::size_t decoder_hidden = 256;
  RnnLayer rnn_layer = RnnLayer::kTanh;
  std::size_t conv_kernel = 5;

  void validate() const;

  // Consumes `key` if it names a field of this struct. Returns false for
  // unknown keys; throws InvalidArgument for a bad value.
  bool set(const std::string& key, const std::string& value);
  std::map<std::string, std::string> to_map() const;

  static ModelConfig timit();
  static ModelConfig vctk();
};

// Feature-extraction keys share the same key=value namespace. The feature
// dimension is taken from the model config, not set here.
bool set_feature_key(dsp::FeatureConfig& cfg, const std::string& key,
                     const std::string& value);
std::map<std::string, std::string> feature_config_to_map(
    const dsp::FeatureConfig& cfg);

// Parsing helpers shared by every key=value config struct.
std::size_t parse_count(const std::string& key, const std::string& value);
double parse_real(const std::string& key, const std::string& value);
bool parse_flag(const std::string& key, const std::string& value);

// "key=value\n" lines, keys sorted.
std::string to_config_text(const std::map<std::string, std::string>& kv);

}  // namespace dsvae::model

#endif  // DSVAE_MODEL_CONFIG_H_
