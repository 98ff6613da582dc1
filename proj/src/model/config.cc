// src/model/config.cc
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

#include "dsvae/model/config.h"

#include <charconv>
#include <cmath>

#include "dsvae/common/error.h"
#include "dsvae/common/io_util.h"

namespace dsvae::model {

std::string to_string(Variant v) {
  return v == Variant::kVctkConv ? "vctk_conv" : "timit_mlp";
}

std::string to_string(KlDirection d) {
  return d == KlDirection::kPToQ ? "p_to_q" : "q_to_p";
}

std::string to_string(RnnLayer r) {
  return r == RnnLayer::kLstm ? "lstm" : "tanh";
}

std::size_t parse_count(const std::string& key, const std::string& value) {
  std::size_t out = 0;
  const auto* end = value.data() + value.size();
  const auto res = std::from_chars(value.data(), end, out);
  if (res.ec != std::errc() || res.ptr != end)
    throw InvalidArgument(key + ": expected a non-negative integer, got '" +
                          value + "'");
  return out;
}

double parse_real(const std::string& key, const std::string& value) {
  try {
    return io::parse_double(value);
  } catch (const InvalidArgument&) {
    throw InvalidArgument(key + ": expected a number, got '" + value + "'");
  }
}

bool parse_flag(const std::string& key, const std::string& value) {
  if (value == "1" || value == "true" || value == "on" || value == "yes")
    return true;
  if (value == "0" || value == "false" || value == "off" || value == "no")
    return false;
  throw InvalidArgument(key + ": expected on/off, got '" + value + "'");
}

void ModelConfig::validate() const {
  if (feature_dim == 0 || seg_len == 0 || shared_dim == 0)
    throw InvalidArgument("feature_dim, seg_len and shared_dim must be positive");
  if (speaker_dim == 0 || content_dim == 0)
    throw InvalidArgument("speaker_dim and content_dim must be positive");
  if (encoder_hidden == 0 || head_hidden == 0 || prior_hidden == 0 ||
      decoder_hidden == 0)
    throw InvalidArgument("hidden sizes must be positive");
  if (!(alpha >= 0.0) || !(beta >= 0.0) || !std::isfinite(alpha) ||
      !std::isfinite(beta))
    throw InvalidArgument("alpha and beta must be finite and non-negative");
  if (alpha == 0.0 && beta == 0.0)
    throw InvalidArgument("alpha and beta cannot both be zero");
  if (conv_kernel == 0 || conv_kernel % 2 == 0)
    throw InvalidArgument("conv_kernel must be odd");
}

bool ModelConfig::set(const std::string& key, const std::string& value) {
  if (key == "feature_dim") feature_dim = parse_count(key, value);
  else if (key == "seg_len") seg_len = parse_count(key, value);
  else if (key == "shared_dim") shared_dim = parse_count(key, value);
  else if (key == "speaker_dim") speaker_dim = parse_count(key, value);
  else if (key == "content_dim") content_dim = parse_count(key, value);
  else if (key == "encoder_hidden") encoder_hidden = parse_count(key, value);
  else if (key == "head_hidden") head_hidden = parse_count(key, value);
  else if (key == "prior_hidden") prior_hidden = parse_count(key, value);
  else if (key == "decoder_hidden") decoder_hidden = parse_count(key, value);
  else if (key == "conv_kernel") conv_kernel = parse_count(key, value);
  else if (key == "alpha") alpha = parse_real(key, value);
  else if (key == "beta") beta = parse_real(key, value);
  else if (key == "variant") {
    if (value == "timit_mlp") variant = Variant::kTimitMlp;
    else if (value == "vctk_conv") variant = Variant::kVctkConv;
    else throw InvalidArgument("variant: unknown value '" + value + "'");
  } else if (key == "kl_direction") {
    if (value == "q_to_p") kl_direction = KlDirection::kQToP;
    else if (value == "p_to_q") kl_direction = KlDirection::kPToQ;
    else throw InvalidArgument("kl_direction: unknown value '" + value + "'");
  } else if (key == "rnn_layer") {
    if (value == "tanh" || value == "rnn") rnn_layer = RnnLayer::kTanh;
    else if (value == "lstm") rnn_layer = RnnLayer::kLstm;
    else throw InvalidArgument("rnn_layer: unknown value '" + value + "'");
  } else {
    return false;
  }
  return true;
}

std::map<std::string, std::string> ModelConfig::to_map() const {
  return {
      {"feature_dim", std::to_string(feature_dim)},
      {"seg_len", std::to_string(seg_len)},
      {"shared_dim", std::to_string(shared_dim)},
      {"speaker_dim", std::to_string(speaker_dim)},
      {"content_dim", std::to_string(content_dim)},
      {"variant", to_string(variant)},
      {"alpha", io::format_double(alpha)},
      {"beta", io::format_double(beta)},
      {"kl_direction", to_string(kl_direction)},
      {"encoder_hidden", std::to_string(encoder_hidden)},
      {"head_hidden", std::to_string(head_hidden)},
      {"prior_hidden", std::to_string(prior_hidden)},
      {"decoder_hidden", std::to_string(decoder_hidden)},
      {"rnn_layer", to_string(rnn_layer)},
      {"conv_kernel", std::to_string(conv_kernel)},
  };
}

ModelConfig ModelConfig::timit() { return ModelConfig{}; }

ModelConfig ModelConfig::vctk() {
  ModelConfig c;
  c.feature_dim = 80;
  c.seg_len = 100;
  c.shared_dim = 512;
  c.variant = Variant::kVctkConv;
  c.alpha = 0.01;
  c.beta = 10.0;
  c.decoder_hidden = 512;
  return c;
}

bool set_feature_key(dsp::FeatureConfig& cfg, const std::string& key,
                     const std::string& value) {
  if (key == "sample_rate") cfg.sample_rate = static_cast<int>(parse_count(key, value));
  else if (key == "win_ms") cfg.win_ms = parse_real(key, value);
  else if (key == "hop_ms") cfg.hop_ms = parse_real(key, value);
  else if (key == "fft_size") cfg.fft_size = static_cast<int>(parse_count(key, value));
  else if (key == "feature_kind") cfg.kind = dsp::feature_kind_from_string(value);
  else return false;
  return true;
}

std::map<std::string, std::string> feature_config_to_map(
    const dsp::FeatureConfig& cfg) {
  return {
      {"sample_rate", std::to_string(cfg.sample_rate)},
      {"win_ms", io::format_double(cfg.win_ms)},
      {"hop_ms", io::format_double(cfg.hop_ms)},
      {"fft_size", std::to_string(cfg.fft_size)},
      {"feature_kind", dsp::to_string(cfg.kind)},
  };
}

std::string to_config_text(const std::map<std::string, std::string>& kv) {
  std::string out;
  for (const auto& [k, v] : kv) out += k + "=" + v + "\n";
  return out;
}

}  // namespace dsvae::model
