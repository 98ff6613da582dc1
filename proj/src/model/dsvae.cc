// src/model/dsvae.cc
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

#include "dsvae/model/dsvae.h"

#include <cmath>

#include "dsvae/ad/ops.h"
#include "dsvae/common/error.h"

namespace dsvae::model {

using ad::LayerKind;
using ad::LayerSpec;

namespace {

enum class Act { kNone, kTanh, kRelu };

Tensor activate(Tape& tp, const Tensor& x, Act act) {
  switch (act) {
    case Act::kTanh: return ad::tanh(tp, x);
    case Act::kRelu: return ad::relu(tp, x);
    case Act::kNone: break;
  }
  return x;
}

// A layer with the activation applied to its output.
struct Stage {
  std::string name;
  std::unique_ptr<ad::Layer> layer;
  Act act = Act::kNone;
};

class Stack {
 public:
  Stack() = default;
  explicit Stack(std::string prefix) : prefix_(std::move(prefix)) {}

  std::size_t add(const std::string& name, const LayerSpec& spec, Act act,
                  std::uint64_t seed) {
    stages_.push_back({name, ad::build_layer(spec, seed), act});
    return stages_.back().layer->output_dim();
  }

  Tensor forward(Tape& tp, Tensor x) const {
    for (const auto& s : stages_) x = activate(tp, s.layer->forward(tp, x), s.act);
    return x;
  }

  void collect(ad::ParamList& out) const {
    for (const auto& s : stages_) s.layer->collect(prefix_ + "." + s.name, out);
  }

 private:
  std::string prefix_;
  std::vector<Stage> stages_;
};

LayerSpec linear(std::size_t in, std::size_t out) {
  return {LayerKind::kLinear, in, out};
}

LayerSpec recurrent(LayerKind kind, std::size_t in, std::size_t hidden,
                    std::size_t layers) {
  return {kind, in, 0, hidden, layers};
}

LayerSpec conv(std::size_t in, std::size_t out, std::size_t kernel) {
  return {LayerKind::kConv, in, out, 0, 1, kernel};
}

// Gaussian head: hidden layer then separate mean / log-variance projections.
struct Head {
  Stack hidden;
  Stack mean;
  Stack log_var;

  Head(const std::string& prefix, std::size_t in, std::size_t hid,
       std::size_t out, std::uint64_t& seed)
      : hidden(prefix), mean(prefix), log_var(prefix) {
    hidden.add("hidden", linear(in, hid), Act::kTanh, seed++);
    mean.add("mean", linear(hid, out), Act::kNone, seed++);
    log_var.add("log_var", linear(hid, out), Act::kNone, seed++);
  }

  Gaussian forward(Tape& tp, const Tensor& x) const {
    Tensor h = hidden.forward(tp, x);
    return {mean.forward(tp, h),
            ad::clamp(tp, log_var.forward(tp, h), kLogVarMin, kLogVarMax)};
  }

  void collect(ad::ParamList& out) const {
    hidden.collect(out);
    mean.collect(out);
    log_var.collect(out);
  }
};

}  // namespace

struct Dsvae::Net {
  Stack shared{"shared"};
  Stack speaker_rec{"speaker"};
  Stack content_rec{"content"};
  std::unique_ptr<Head> speaker_head;
  std::unique_ptr<Head> content_head;
  Stack prior_rec{"prior"};
  Stack prior_mean{"prior"};
  Stack prior_log_var{"prior"};
  Stack decoder{"decoder"};
};

Dsvae::Dsvae(const ModelConfig& cfg, std::uint64_t seed)
    : cfg_(cfg), net_(std::make_unique<Net>()) {
  cfg_.validate();
  Net& n = *net_;
  // Each layer gets its own seed so that its initialization does not depend
  // on the shapes of the layers built before it.
  std::uint64_t s = seed * 1000003ULL + 17;
  const std::size_t d = cfg_.feature_dim, dw = cfg_.shared_dim;
  const std::size_t he = cfg_.encoder_hidden, k = cfg_.conv_kernel;

  if (cfg_.variant == Variant::kTimitMlp) {
    n.shared.add("l0", linear(d, dw), Act::kTanh, s++);
    n.shared.add("l1", linear(dw, dw), Act::kTanh, s++);
  } else {
    std::size_t in = d;
    for (int i = 0; i < 3; ++i) {
      const std::string tag = std::to_string(i);
      n.shared.add("conv" + tag, conv(in, dw, k), Act::kNone, s++);
      n.shared.add("proj" + tag, linear(dw, dw), Act::kNone, s++);
      n.shared.add("norm" + tag, {LayerKind::kInstanceNorm2d, dw}, Act::kRelu,
                   s++);
      in = dw;
    }
  }

  const LayerKind rnn_kind =
      cfg_.rnn_layer == RnnLayer::kLstm ? LayerKind::kLstm : LayerKind::kRnn;
  for (Stack* rec : {&n.speaker_rec, &n.content_rec}) {
    const std::size_t bi =
        rec->add("bilstm", recurrent(LayerKind::kBiLstm, dw, he, 2), Act::kNone, s++);
    rec->add("rnn", recurrent(rnn_kind, bi, he, 1), Act::kNone, s++);
  }
  n.speaker_rec.add("pool", {LayerKind::kTimeAvgPool, he}, Act::kNone, s++);
  n.speaker_head = std::make_unique<Head>("speaker", he, cfg_.head_hidden,
                                          cfg_.speaker_dim, s);
  n.content_head = std::make_unique<Head>("content", he, cfg_.head_hidden,
                                          cfg_.content_dim, s);

  const std::size_t dc = cfg_.content_dim, hp = cfg_.prior_hidden;
  n.prior_rec.add("lstm", recurrent(LayerKind::kLstm, dc, hp, 1), Act::kNone, s++);
  n.prior_mean.add("mean", linear(hp, dc), Act::kNone, s++);
  n.prior_log_var.add("log_var", linear(hp, dc), Act::kNone, s++);

  const std::size_t hd = cfg_.decoder_hidden, dz = cfg_.speaker_dim + dc;
  if (cfg_.variant == Variant::kTimitMlp) {
    n.decoder.add("in", linear(dz, hd), Act::kTanh, s++);
    const std::size_t bi = n.decoder.add(
        "bilstm", recurrent(LayerKind::kBiLstm, hd, hd, 2), Act::kNone, s++);
    n.decoder.add("out0", linear(bi, hd), Act::kTanh, s++);
    n.decoder.add("out1", linear(hd, d), Act::kNone, s++);
  } else {
    n.decoder.add("prenet", linear(dz, hd), Act::kRelu, s++);
    std::size_t w = n.decoder.add(
        "bilstm0", recurrent(LayerKind::kBiLstm, hd, hd, 1), Act::kNone, s++);
    for (int i = 0; i < 3; ++i)
      w = n.decoder.add("conv" + std::to_string(i), conv(w, hd, k), Act::kTanh,
                        s++);
    w = n.decoder.add("bilstm1", recurrent(LayerKind::kBiLstm, w, hd, 1),
                      Act::kNone, s++);
    n.decoder.add("out0", linear(w, hd), Act::kTanh, s++);
    n.decoder.add("out1", linear(hd, d), Act::kNone, s++);
  }

  n.shared.collect(params_);
  n.speaker_rec.collect(params_);
  n.speaker_head->collect(params_);
  n.content_rec.collect(params_);
  n.content_head->collect(params_);
  n.prior_rec.collect(params_);
  n.prior_mean.collect(params_);
  n.prior_log_var.collect(params_);
  n.decoder.collect(params_);
}

Dsvae::~Dsvae() = default;
Dsvae::Dsvae(Dsvae&&) noexcept = default;
Dsvae& Dsvae::operator=(Dsvae&&) noexcept = default;

namespace {

void expect_shape(const char* what, const Tensor& t, const ad::Shape& want) {
  if (t.shape() != want)
    throw InvalidArgument(std::string(what) + ": expected shape " +
                          ad::to_string(want) + ", got " +
                          ad::to_string(t.shape()));
}

}  // namespace

Tensor Dsvae::encode_shared(Tape& tp, const Tensor& x) const {
  if (x.rank() != 3 || x.dim(0) != cfg_.seg_len || x.dim(2) != cfg_.feature_dim)
    throw InvalidArgument("encode_shared: expected [" +
                          std::to_string(cfg_.seg_len) + ",B," +
                          std::to_string(cfg_.feature_dim) + "], got " +
                          ad::to_string(x.shape()));
  return net_->shared.forward(tp, x);
}

Gaussian Dsvae::encode_speaker(Tape& tp, const Tensor& w) const {
  return net_->speaker_head->forward(tp, net_->speaker_rec.forward(tp, w));
}

Gaussian Dsvae::encode_content(Tape& tp, const Tensor& w) const {
  return net_->content_head->forward(tp, net_->content_rec.forward(tp, w));
}

Gaussian Dsvae::content_prior(Tape& tp, const Tensor& z_c) const {
  // Teacher forcing on the latent sequence: the recurrence at step t sees
  // z_{t-1} (zeros at t = 0).
  Tensor h = net_->prior_rec.forward(tp, ad::shift_time(tp, z_c));
  return {net_->prior_mean.forward(tp, h),
          ad::clamp(tp, net_->prior_log_var.forward(tp, h), kLogVarMin,
                    kLogVarMax)};
}

Tensor Dsvae::decode(Tape& tp, const Tensor& z_s, const Tensor& z_c) const {
  if (z_c.rank() != 3 || z_c.dim(2) != cfg_.content_dim)
    throw InvalidArgument("decode: bad z_c shape " + ad::to_string(z_c.shape()));
  expect_shape("decode z_s", z_s, {1, z_c.dim(1), cfg_.speaker_dim});
  Tensor z = ad::concat_last(tp, {ad::repeat_time(tp, z_s, z_c.dim(0)), z_c});
  return net_->decoder.forward(tp, z);
}

Tensor sample(Tape& tp, const Gaussian& g, const Tensor& noise) {
  expect_shape("sample", noise, g.mean.shape());
  Tensor std = ad::exp(tp, ad::scale(tp, g.log_var, 0.5));
  return ad::add(tp, g.mean, ad::mul(tp, std, noise));
}

LatentNoise draw_noise(const ModelConfig& cfg, std::size_t batch,
                       std::mt19937_64& rng) {
  std::normal_distribution<double> n01(0.0, 1.0);
  LatentNoise out{Tensor({1, batch, cfg.speaker_dim}),
                  Tensor({cfg.seg_len, batch, cfg.content_dim})};
  for (double& v : out.speaker.data()) v = n01(rng);
  for (double& v : out.content.data()) v = n01(rng);
  return out;
}

Tensor kl_divergence(Tape& tp, const Gaussian& q, const Gaussian& p,
                     KlDirection dir) {
  Tensor kl = dir == KlDirection::kQToP
                  ? ad::gaussian_kl(tp, q.mean, q.log_var, p.mean, p.log_var)
                  : ad::gaussian_kl(tp, p.mean, p.log_var, q.mean, q.log_var);
  return ad::scale(tp, ad::sum(tp, kl), 1.0 / static_cast<double>(q.mean.dim(1)));
}

Tensor kl_speaker(Tape& tp, const Gaussian& q, KlDirection dir) {
  Gaussian standard{Tensor(q.mean.shape()), Tensor(q.log_var.shape())};
  return kl_divergence(tp, q, standard, dir);
}

Dsvae::Forward Dsvae::forward(Tape& tp, const Tensor& input,
                              const LatentNoise& noise) const {
  Forward f;
  Tensor w = encode_shared(tp, input);
  f.speaker = encode_speaker(tp, w);
  f.content = encode_content(tp, w);
  f.z_s = sample(tp, f.speaker, noise.speaker);
  f.z_c = sample(tp, f.content, noise.content);
  f.prior = content_prior(tp, f.z_c);
  f.recon = decode(tp, f.z_s, f.z_c);
  return f;
}

LossBreakdown Dsvae::loss(Tape& tp, const Tensor& input, const Tensor& target,
                          const LatentNoise& noise, double kl_scale) const {
  expect_shape("loss target", target, input.shape());
  const Forward f = forward(tp, input, noise);
  const double batch = static_cast<double>(input.dim(1));

  Tensor sq = ad::sum(tp, ad::square(tp, ad::sub(tp, f.recon, target)));
  Tensor recon = ad::scale(tp, sq, 0.5 / batch);
  Tensor kls = kl_speaker(tp, f.speaker, cfg_.kl_direction);
  Tensor klc = kl_divergence(tp, f.content, f.prior, cfg_.kl_direction);
  Tensor total = ad::add(tp, recon,
                         ad::add(tp, ad::scale(tp, kls, kl_scale * cfg_.alpha),
                                 ad::scale(tp, klc, kl_scale * cfg_.beta)));

  LossBreakdown out;
  out.total_tensor = total;
  out.recon_nll = recon.item();
  out.mse = sq.item() / static_cast<double>(input.size());
  out.kl_speaker = kls.item();
  out.kl_content = klc.item();
  out.total = out.recon_nll + cfg_.alpha * out.kl_speaker + cfg_.beta * out.kl_content;
  if (!std::isfinite(out.total)) throw Diverged("non-finite loss");
  return out;
}

LossBreakdown Dsvae::loss(Tape& tp, const Tensor& input, const Tensor& target,
                          std::mt19937_64& rng, double kl_scale) const {
  return loss(tp, input, target, draw_noise(cfg_, input.dim(1), rng), kl_scale);
}

InfoFlowReport info_flow_report(const Dsvae& model, const Tensor& input,
                                const Tensor& target, std::mt19937_64& rng) {
  Tape tp(Tape::Mode::kNoGrad);
  const LossBreakdown l = model.loss(tp, input, target, rng);
  return {l.kl_speaker, l.kl_content, l.kl_speaker + l.kl_content, l.recon_nll};
}

Tensor stack_segments(const std::vector<const dsp::Matrix*>& segments) {
  if (segments.empty()) throw InvalidArgument("stack_segments: no segments");
  const auto T = static_cast<std::size_t>(segments[0]->rows());
  const auto d = static_cast<std::size_t>(segments[0]->cols());
  const std::size_t B = segments.size();
  Tensor out({T, B, d});
  for (std::size_t b = 0; b < B; ++b) {
    const dsp::Matrix& m = *segments[b];
    if (static_cast<std::size_t>(m.rows()) != T ||
        static_cast<std::size_t>(m.cols()) != d)
      throw InvalidArgument("stack_segments: segment shapes differ");
    for (std::size_t t = 0; t < T; ++t)
      for (std::size_t j = 0; j < d; ++j) out[(t * B + b) * d + j] = m(t, j);
  }
  return out;
}

Tensor stack_segments(const std::vector<dsp::Matrix>& segments) {
  std::vector<const dsp::Matrix*> ptrs;
  ptrs.reserve(segments.size());
  for (const auto& m : segments) ptrs.push_back(&m);
  return stack_segments(ptrs);
}

dsp::Matrix unstack_segment(const Tensor& batch, std::size_t b) {
  const std::size_t T = batch.dim(0), B = batch.dim(1), d = batch.dim(2);
  if (b >= B) throw InvalidArgument("unstack_segment: index out of range");
  dsp::Matrix m(T, d);
  for (std::size_t t = 0; t < T; ++t)
    for (std::size_t j = 0; j < d; ++j) m(t, j) = batch[(t * B + b) * d + j];
  return m;
}

}  // namespace dsvae::model
