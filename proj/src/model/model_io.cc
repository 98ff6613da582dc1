// src/model/model_io.cc
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

#include "dsvae/model/model_io.h"

#include "dsvae/ad/checkpoint.h"
#include "dsvae/common/error.h"
#include "dsvae/common/io_util.h"

namespace dsvae::model {

namespace {

constexpr const char* kNormMean = "feature.norm_mean";
constexpr const char* kNormStd = "feature.norm_std";
constexpr const char* kAdamStep = "adam_step";
constexpr const char* kAdamLr = "adam_lr";

ad::Tensor vector_tensor(const std::vector<double>& v) {
  return ad::Tensor({v.size()}, v);
}

}  // namespace

std::string model_header_text(
    const ModelConfig& model, const dsp::FeatureConfig& features,
    const std::map<std::string, std::string>& metadata) {
  auto kv = model.to_map();
  for (auto& [k, v] : feature_config_to_map(features)) kv[k] = v;
  for (auto& [k, v] : metadata) {
    if (kv.count(k)) throw InvalidArgument("metadata key '" + k + "' is reserved");
    kv[k] = v;
  }
  return to_config_text(kv);
}

void save_model(const std::string& path, const Dsvae& model,
                const dsp::FeatureConfig& features,
                const ad::AdamState* optimizer,
                const std::map<std::string, std::string>& metadata) {
  if (static_cast<std::size_t>(features.feature_dim) != model.config().feature_dim)
    throw InvalidArgument("feature_dim differs between model and features");
  auto meta = metadata;
  ad::ParamList records = model.params();
  if (!features.normalization.empty()) {
    records.push_back({kNormMean, vector_tensor(features.normalization.mean)});
    records.push_back({kNormStd, vector_tensor(features.normalization.stddev)});
  }
  if (optimizer != nullptr && optimizer->step > 0) {
    meta[kAdamStep] = std::to_string(optimizer->step);
    meta[kAdamLr] = io::format_double(optimizer->options.learning_rate);
    const auto& params = model.params();
    for (std::size_t i = 0; i < params.size(); ++i) {
      const ad::Shape& shape = params[i].tensor.shape();
      records.push_back({"adam.m." + params[i].name,
                         ad::Tensor(shape, optimizer->first_moment.at(i))});
      records.push_back({"adam.v." + params[i].name,
                         ad::Tensor(shape, optimizer->second_moment.at(i))});
    }
  }
  ad::save_checkpoint(path, model_header_text(model.config(), features, meta),
                      records);
}

ModelBundle load_model(const std::string& path) {
  ad::Checkpoint ck = ad::load_checkpoint(path);
  const auto kv = io::parse_key_values(ck.config_text, path);
  ModelConfig mc;
  dsp::FeatureConfig fc;
  std::map<std::string, std::string> metadata;
  for (const auto& [k, v] : kv)
    if (!mc.set(k, v) && !set_feature_key(fc, k, v)) metadata[k] = v;
  fc.feature_dim = static_cast<int>(mc.feature_dim);

  std::map<std::string, const ad::Tensor*> by_name;
  for (const auto& p : ck.params) by_name[p.name] = &p.tensor;
  if (by_name.count(kNormMean) && by_name.count(kNormStd)) {
    auto copy = [](const ad::Tensor* t) {
      return std::vector<double>(t->data().begin(), t->data().end());
    };
    fc.normalization.mean = copy(by_name[kNormMean]);
    fc.normalization.stddev = copy(by_name[kNormStd]);
  }
  fc.validate();

  // The seed only matters for parameters absent from the file, and
  // assign_params rejects that case.
  Dsvae model(mc, 0);
  ad::assign_params(ck.params, model.params());

  std::optional<ad::AdamState> optimizer;
  if (auto it = metadata.find(kAdamStep); it != metadata.end()) {
    ad::AdamState st;
    st.step = parse_count(kAdamStep, it->second);
    if (auto lr = metadata.find(kAdamLr); lr != metadata.end())
      st.options.learning_rate = parse_real(kAdamLr, lr->second);
    for (const auto& p : model.params()) {
      auto m = by_name.find("adam.m." + p.name);
      auto v = by_name.find("adam.v." + p.name);
      if (m == by_name.end() || v == by_name.end())
        throw IoError(path + ": optimizer state missing for " + p.name);
      st.first_moment.emplace_back(m->second->data().begin(),
                                   m->second->data().end());
      st.second_moment.emplace_back(v->second->data().begin(),
                                    v->second->data().end());
    }
    optimizer = std::move(st);
    metadata.erase(kAdamStep);
    metadata.erase(kAdamLr);
  }
  return {mc, fc, std::move(model), std::move(optimizer), std::move(metadata)};
}

}  // namespace dsvae::model
