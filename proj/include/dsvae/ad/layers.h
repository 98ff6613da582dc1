// include/dsvae/ad/layers.h
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

#ifndef DSVAE_AD_LAYERS_H_
#define DSVAE_AD_LAYERS_H_

#include <cstdint>
#include <memory>
#include <string>

#include "dsvae/ad/ops.h"

namespace dsvae::ad {

enum class LayerKind {
  kLinear,          // [..., in] → [..., out]
  kBiLstm,          // [T,B,in] → [T,B,2h], layer_count stacked
  kLstm,            // [T,B,in] → [T,B,h]
  kRnn,             // Elman tanh, [T,B,in] → [T,B,h]
  kConv,            // along time, same padding: [T,B,in] → [T,B,out]
  kInstanceNorm2d,  // per instance and channel over time, no parameters
  kTimeAvgPool,     // [T,B,h] → [1,B,h]
};

std::string to_string(LayerKind kind);

struct LayerSpec {
  LayerKind kind = LayerKind::kLinear;
  std::size_t input_dim = 0;
  std::size_t output_dim = 0;   // linear, conv
  std::size_t hidden_size = 0;  // recurrent kinds
  std::size_t layer_count = 1;  // recurrent kinds
  std::size_t kernel_size = 5;  // conv; odd

  void validate() const;
};

class Layer {
 public:
  explicit Layer(LayerSpec spec) : spec_(spec) {}
  virtual ~Layer() = default;

  virtual Tensor forward(Tape& tp, const Tensor& x) const = 0;
  // Appends this layer's parameters as "<prefix>.<name>".
  virtual void collect(const std::string& prefix, ParamList& out) const {}
  virtual std::size_t output_dim() const = 0;

  const LayerSpec& spec() const { return spec_; }

 private:
  LayerSpec spec_;
};

// Weights ~ U(±√(6/(fan_in+fan_out))), biases zero, LSTM forget-gate bias +1.
// The same seed always yields bitwise-identical parameters.
std::unique_ptr<Layer> build_layer(const LayerSpec& spec, std::uint64_t seed);

}  // namespace dsvae::ad

#endif  // DSVAE_AD_LAYERS_H_
