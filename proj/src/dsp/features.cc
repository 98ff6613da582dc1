// src/dsp/features.cc
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

#include "dsvae/dsp/features.h"

#include <cmath>
#include <complex>
#include <numbers>

#include "dsvae/common/error.h"
#include "dsvae/dsp/fft.h"
#include "dsvae/dsp/mel.h"

namespace dsvae::dsp {

std::string to_string(FeatureKind kind) {
  return kind == FeatureKind::kMel ? "mel" : "stft_magnitude";
}

FeatureKind feature_kind_from_string(const std::string& s) {
  if (s == "mel") return FeatureKind::kMel;
  if (s == "stft_magnitude" || s == "stft") return FeatureKind::kStftMagnitude;
  throw InvalidArgument("unknown feature kind '" + s + "'");
}

int FeatureConfig::win_samples() const {
  return static_cast<int>(std::lround(win_ms * sample_rate / 1000.0));
}

int FeatureConfig::hop_samples() const {
  return static_cast<int>(std::lround(hop_ms * sample_rate / 1000.0));
}

void FeatureConfig::validate() const {
  if (sample_rate <= 0) throw InvalidArgument("sample_rate must be positive");
  if (win_ms <= 0 || hop_ms <= 0)
    throw InvalidArgument("win_ms and hop_ms must be positive");
  if (hop_ms > win_ms) throw InvalidArgument("hop_ms must not exceed win_ms");
  if (hop_samples() < 1) throw InvalidArgument("hop is shorter than a sample");
  if (fft_size < 2 || (fft_size & (fft_size - 1)) != 0)
    throw InvalidArgument("fft_size must be a power of two");
  if (fft_size < win_samples())
    throw InvalidArgument("fft_size " + std::to_string(fft_size) +
                          " is shorter than the window (" +
                          std::to_string(win_samples()) + " samples)");
  if (feature_dim <= 0) throw InvalidArgument("feature_dim must be positive");
  if (kind == FeatureKind::kStftMagnitude && feature_dim > n_bins())
    throw InvalidArgument("feature_dim " + std::to_string(feature_dim) +
                          " exceeds fft_size/2+1 = " + std::to_string(n_bins()));
  if (!normalization.empty() &&
      (static_cast<int>(normalization.mean.size()) != feature_dim ||
       normalization.stddev.size() != normalization.mean.size()))
    throw InvalidArgument("normalization statistics do not match feature_dim");
}

FeatureConfig FeatureConfig::timit() { return FeatureConfig{}; }

FeatureConfig FeatureConfig::vctk() {
  FeatureConfig c;
  c.win_ms = 64.0;
  c.hop_ms = 16.0;
  c.fft_size = 1024;
  c.feature_dim = 80;
  c.kind = FeatureKind::kMel;
  return c;
}

std::vector<double> hann_window(int length) {
  std::vector<double> w(length);
  for (int n = 0; n < length; ++n)
    w[n] = 0.5 - 0.5 * std::cos(2.0 * std::numbers::pi * n / length);
  return w;
}

int frame_count(std::size_t num_samples, const FeatureConfig& cfg) {
  const auto win = static_cast<std::size_t>(cfg.win_samples());
  if (num_samples < win) return 0;
  return static_cast<int>((num_samples - win) / cfg.hop_samples()) + 1;
}

Matrix stft_magnitude(std::span<const double> samples,
                      const FeatureConfig& cfg) {
  const int frames = frame_count(samples.size(), cfg);
  const int win = cfg.win_samples(), hop = cfg.hop_samples();
  const RealFft fft(cfg.fft_size);
  const auto window = hann_window(win);
  Matrix mag(frames, fft.bins());
  std::vector<double> buf(cfg.fft_size, 0.0);
  std::vector<std::complex<double>> spec(fft.bins());
  for (int t = 0; t < frames; ++t) {
    std::fill(buf.begin(), buf.end(), 0.0);
    for (int n = 0; n < win; ++n)
      buf[n] = samples[static_cast<std::size_t>(t) * hop + n] * window[n];
    fft.forward(buf, spec);
    for (int k = 0; k < fft.bins(); ++k) mag(t, k) = std::abs(spec[k]);
  }
  return mag;
}

Matrix log_features(const Matrix& linear_mag, const FeatureConfig& cfg,
                    const MelFilterbank* fb) {
  if (cfg.kind == FeatureKind::kMel) {
    if (fb != nullptr) return mel_project(linear_mag, *fb);
    return mel_project(linear_mag, *MelFilterbank::cached(cfg));
  }
  if (linear_mag.cols() < cfg.feature_dim)
    throw InvalidArgument("log_features: magnitude has too few bins");
  Matrix out = linear_mag.leftCols(cfg.feature_dim);
  for (Eigen::Index i = 0; i < out.size(); ++i)
    out.data()[i] = std::log(std::max(out.data()[i], kLogFloor));
  return out;
}

Spectrogram compute_features(const Waveform& w, const FeatureConfig& cfg) {
  cfg.validate();
  validate(w);
  if (w.sample_rate != cfg.sample_rate)
    throw InvalidArgument("waveform is " + std::to_string(w.sample_rate) +
                          " Hz but features expect " +
                          std::to_string(cfg.sample_rate) + " Hz");
  if (w.empty() || frame_count(w.size(), cfg) < 1)
    throw InvalidArgument("input too short: " + std::to_string(w.size()) +
                          " samples, need at least " +
                          std::to_string(cfg.win_samples()));
  Spectrogram s;
  s.frames = log_features(stft_magnitude(w.samples, cfg), cfg);
  normalize(s.frames, cfg.normalization);
  s.config = cfg;
  return s;
}

void normalize(Matrix& log_feats, const Normalization& norm) {
  if (norm.empty()) return;
  if (static_cast<std::size_t>(log_feats.cols()) != norm.mean.size())
    throw InvalidArgument("normalize: dimension mismatch");
  for (Eigen::Index t = 0; t < log_feats.rows(); ++t)
    for (Eigen::Index k = 0; k < log_feats.cols(); ++k)
      log_feats(t, k) = (log_feats(t, k) - norm.mean[k]) / norm.stddev[k];
}

void denormalize(Matrix& feats, const Normalization& norm) {
  if (norm.empty()) return;
  if (static_cast<std::size_t>(feats.cols()) != norm.mean.size())
    throw InvalidArgument("denormalize: dimension mismatch");
  for (Eigen::Index t = 0; t < feats.rows(); ++t)
    for (Eigen::Index k = 0; k < feats.cols(); ++k)
      feats(t, k) = feats(t, k) * norm.stddev[k] + norm.mean[k];
}

Normalization compute_normalization(std::span<const Matrix> log_feats) {
  if (log_feats.empty())
    throw InvalidArgument("compute_normalization: no data");
  const Eigen::Index d = log_feats.front().cols();
  std::vector<double> sum(d, 0.0), sum_sq(d, 0.0);
  double count = 0;
  for (const auto& m : log_feats) {
    if (m.cols() != d)
      throw InvalidArgument("compute_normalization: ragged feature dims");
    for (Eigen::Index t = 0; t < m.rows(); ++t)
      for (Eigen::Index k = 0; k < d; ++k) sum[k] += m(t, k);
    count += static_cast<double>(m.rows());
  }
  if (count == 0) throw InvalidArgument("compute_normalization: no frames");
  Normalization n;
  n.mean.resize(d);
  n.stddev.resize(d);
  for (Eigen::Index k = 0; k < d; ++k) n.mean[k] = sum[k] / count;
  // Second pass for the variance; the one-pass formula loses digits.
  for (const auto& m : log_feats)
    for (Eigen::Index t = 0; t < m.rows(); ++t)
      for (Eigen::Index k = 0; k < d; ++k) {
        const double dev = m(t, k) - n.mean[k];
        sum_sq[k] += dev * dev;
      }
  for (Eigen::Index k = 0; k < d; ++k)
    n.stddev[k] = std::max(std::sqrt(sum_sq[k] / count), 1e-5);
  return n;
}

}  // namespace dsvae::dsp
