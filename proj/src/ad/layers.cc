// src/ad/layers.cc
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

#include "dsvae/ad/layers.h"

#include <cmath>
#include <random>

#include "dsvae/common/error.h"

namespace dsvae::ad {

std::string to_string(LayerKind kind) {
  switch (kind) {
    case LayerKind::kLinear: return "linear";
    case LayerKind::kBiLstm: return "bilstm";
    case LayerKind::kLstm: return "lstm";
    case LayerKind::kRnn: return "rnn";
    case LayerKind::kConv: return "conv";
    case LayerKind::kInstanceNorm2d: return "instance_norm_2d";
    case LayerKind::kTimeAvgPool: return "time_avg_pool";
  }
  return "?";
}

void LayerSpec::validate() const {
  const std::string what = to_string(kind);
  if (input_dim == 0) throw InvalidArgument(what + ": input_dim must be positive");
  switch (kind) {
    case LayerKind::kLinear:
      if (output_dim == 0) throw InvalidArgument(what + ": output_dim must be positive");
      break;
    case LayerKind::kConv:
      if (output_dim == 0) throw InvalidArgument(what + ": output_dim must be positive");
      if (kernel_size % 2 == 0) throw InvalidArgument(what + ": kernel_size must be odd");
      break;
    case LayerKind::kBiLstm:
    case LayerKind::kLstm:
    case LayerKind::kRnn:
      if (hidden_size == 0) throw InvalidArgument(what + ": hidden_size must be positive");
      if (layer_count == 0) throw InvalidArgument(what + ": layer_count must be positive");
      break;
    case LayerKind::kInstanceNorm2d:
    case LayerKind::kTimeAvgPool:
      break;
  }
}

namespace {

class Init {
 public:
  explicit Init(std::uint64_t seed) : rng_(seed) {}

  Tensor weight(Shape shape, double fan_in, double fan_out) {
    const double limit = std::sqrt(6.0 / (fan_in + fan_out));
    std::uniform_real_distribution<double> dist(-limit, limit);
    Tensor t(std::move(shape), true);
    for (double& v : t.data()) v = dist(rng_);
    return t;
  }

  static Tensor zeros(Shape shape) { return Tensor(std::move(shape), true); }

 private:
  std::mt19937_64 rng_;
};

class Linear final : public Layer {
 public:
  Linear(const LayerSpec& s, Init& init)
      : Layer(s),
        w_(init.weight({s.input_dim, s.output_dim},
                       static_cast<double>(s.input_dim),
                       static_cast<double>(s.output_dim))),
        b_(Init::zeros({s.output_dim})) {}

  Tensor forward(Tape& tp, const Tensor& x) const override {
    return add_bias(tp, matmul(tp, x, w_), b_);
  }
  void collect(const std::string& prefix, ParamList& out) const override {
    out.push_back({prefix + ".w", w_});
    out.push_back({prefix + ".b", b_});
  }
  std::size_t output_dim() const override { return spec().output_dim; }

 private:
  Tensor w_, b_;
};

// One direction of one recurrent layer.
struct Cell {
  Tensor w_x, w_h, b;

  static Cell make(std::size_t in, std::size_t h, std::size_t gates,
                   Init& init) {
    Cell c{init.weight({in, gates * h}, static_cast<double>(in),
                       static_cast<double>(gates * h)),
           init.weight({h, gates * h}, static_cast<double>(h),
                       static_cast<double>(gates * h)),
           Init::zeros({gates * h})};
    if (gates == 4)
      for (std::size_t j = h; j < 2 * h; ++j) c.b[j] = 1.0;
    return c;
  }

  void collect(const std::string& prefix, ParamList& out) const {
    out.push_back({prefix + ".w_x", w_x});
    out.push_back({prefix + ".w_h", w_h});
    out.push_back({prefix + ".b", b});
  }
};

class Recurrent final : public Layer {
 public:
  Recurrent(const LayerSpec& s, Init& init) : Layer(s) {
    const bool bi = s.kind == LayerKind::kBiLstm;
    const std::size_t gates = s.kind == LayerKind::kRnn ? 1 : 4;
    std::size_t in = s.input_dim;
    for (std::size_t l = 0; l < s.layer_count; ++l) {
      fwd_.push_back(Cell::make(in, s.hidden_size, gates, init));
      if (bi) bwd_.push_back(Cell::make(in, s.hidden_size, gates, init));
      in = bi ? 2 * s.hidden_size : s.hidden_size;
    }
  }

  Tensor forward(Tape& tp, const Tensor& x) const override {
    Tensor h = x;
    for (std::size_t l = 0; l < fwd_.size(); ++l) {
      Tensor f = run(tp, h, fwd_[l], false);
      h = bwd_.empty() ? f
                       : concat_last(tp, {f, run(tp, h, bwd_[l], true)});
    }
    return h;
  }

  void collect(const std::string& prefix, ParamList& out) const override {
    for (std::size_t l = 0; l < fwd_.size(); ++l) {
      const std::string p = prefix + ".l" + std::to_string(l);
      fwd_[l].collect(bwd_.empty() ? p : p + ".fwd", out);
      if (!bwd_.empty()) bwd_[l].collect(p + ".bwd", out);
    }
  }

  std::size_t output_dim() const override {
    return bwd_.empty() ? spec().hidden_size : 2 * spec().hidden_size;
  }

 private:
  Tensor run(Tape& tp, const Tensor& x, const Cell& c, bool reverse) const {
    if (spec().kind == LayerKind::kRnn)
      return rnn_tanh(tp, x, c.w_x, c.w_h, c.b, reverse);
    return lstm(tp, x, c.w_x, c.w_h, c.b, reverse);
  }

  std::vector<Cell> fwd_, bwd_;
};

class Conv final : public Layer {
 public:
  Conv(const LayerSpec& s, Init& init)
      : Layer(s),
        k_(init.weight({s.kernel_size, s.input_dim, s.output_dim},
                       static_cast<double>(s.kernel_size * s.input_dim),
                       static_cast<double>(s.kernel_size * s.output_dim))),
        b_(Init::zeros({s.output_dim})) {}

  Tensor forward(Tape& tp, const Tensor& x) const override {
    return conv_time(tp, x, k_, b_);
  }
  void collect(const std::string& prefix, ParamList& out) const override {
    out.push_back({prefix + ".k", k_});
    out.push_back({prefix + ".b", b_});
  }
  std::size_t output_dim() const override { return spec().output_dim; }

 private:
  Tensor k_, b_;
};

class InstanceNorm final : public Layer {
 public:
  using Layer::Layer;
  Tensor forward(Tape& tp, const Tensor& x) const override {
    return instance_norm(tp, x);
  }
  std::size_t output_dim() const override { return spec().input_dim; }
};

class TimeAvgPool final : public Layer {
 public:
  using Layer::Layer;
  Tensor forward(Tape& tp, const Tensor& x) const override {
    return mean_time(tp, x);
  }
  std::size_t output_dim() const override { return spec().input_dim; }
};

}  // namespace

std::unique_ptr<Layer> build_layer(const LayerSpec& spec, std::uint64_t seed) {
  spec.validate();
  Init init(seed);
  switch (spec.kind) {
    case LayerKind::kLinear: return std::make_unique<Linear>(spec, init);
    case LayerKind::kBiLstm:
    case LayerKind::kLstm:
    case LayerKind::kRnn: return std::make_unique<Recurrent>(spec, init);
    case LayerKind::kConv: return std::make_unique<Conv>(spec, init);
    case LayerKind::kInstanceNorm2d: return std::make_unique<InstanceNorm>(spec);
    case LayerKind::kTimeAvgPool: return std::make_unique<TimeAvgPool>(spec);
  }
  throw InvalidArgument("unknown layer kind");
}

}  // namespace dsvae::ad
