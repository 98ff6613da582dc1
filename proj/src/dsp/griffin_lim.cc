// src/dsp/griffin_lim.cc
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

#include "dsvae/dsp/griffin_lim.h"

#include <algorithm>
#include <cmath>

#include "dsvae/common/error.h"
#include "dsvae/dsp/fft.h"

namespace dsvae::dsp {

namespace {
constexpr double kEdgeFloor = 1e-4;
}  // namespace

ComplexMatrix stft(std::span<const double> samples, const FeatureConfig& cfg) {
  const int frames = frame_count(samples.size(), cfg);
  const int win = cfg.win_samples(), hop = cfg.hop_samples();
  const RealFft fft(cfg.fft_size);
  const auto window = hann_window(win);
  ComplexMatrix out(frames, fft.bins());
  std::vector<double> buf(cfg.fft_size);
  std::vector<std::complex<double>> spec(fft.bins());
  for (int t = 0; t < frames; ++t) {
    std::fill(buf.begin(), buf.end(), 0.0);
    for (int n = 0; n < win; ++n)
      buf[n] = samples[static_cast<std::size_t>(t) * hop + n] * window[n];
    fft.forward(buf, spec);
    for (int k = 0; k < fft.bins(); ++k) out(t, k) = spec[k];
  }
  return out;
}

std::vector<double> istft(const ComplexMatrix& spec, const FeatureConfig& cfg) {
  const int win = cfg.win_samples(), hop = cfg.hop_samples();
  const RealFft fft(cfg.fft_size);
  if (spec.cols() != fft.bins())
    throw InvalidArgument("istft: expected " + std::to_string(fft.bins()) +
                          " bins, got " + std::to_string(spec.cols()));
  const auto frames = static_cast<std::size_t>(spec.rows());
  if (frames == 0) return {};
  const std::size_t length = (frames - 1) * hop + win;
  const auto window = hann_window(win);
  std::vector<double> out(length, 0.0), norm(length, 0.0);
  std::vector<std::complex<double>> row(fft.bins());
  std::vector<double> frame(cfg.fft_size);
  for (std::size_t t = 0; t < frames; ++t) {
    for (int k = 0; k < fft.bins(); ++k) row[k] = spec(t, k);
    fft.inverse(row, frame);
    for (int n = 0; n < win; ++n) {
      out[t * hop + n] += window[n] * frame[n];
      norm[t * hop + n] += window[n] * window[n];
    }
  }
  // Samples seen only through the window's near-zero tails are left at zero
  // rather than amplified by 1/Σw². Every iterate of griffin_lim lives in the
  // same subspace, so the projection argument still holds.
  const double peak = *std::max_element(norm.begin(), norm.end());
  for (std::size_t i = 0; i < length; ++i)
    out[i] = norm[i] > kEdgeFloor * peak ? out[i] / norm[i] : 0.0;
  return out;
}

GriffinLimResult griffin_lim(const Matrix& mag, const FeatureConfig& cfg,
                             int iters) {
  cfg.validate();
  if (iters < 1) throw InvalidArgument("griffin_lim: iters must be >= 1");
  if (mag.cols() != cfg.n_bins())
    throw InvalidArgument("griffin_lim: magnitude has " +
                          std::to_string(mag.cols()) + " bins, expected " +
                          std::to_string(cfg.n_bins()));
  for (Eigen::Index i = 0; i < mag.size(); ++i) {
    const double v = mag.data()[i];
    if (!std::isfinite(v)) throw InvalidArgument("griffin_lim: non-finite magnitude");
    if (v < 0.0) throw InvalidArgument("griffin_lim: negative magnitude");
  }

  GriffinLimResult result;
  result.waveform.sample_rate = cfg.sample_rate;
  ComplexMatrix target = mag.cast<std::complex<double>>();  // zero phase
  std::vector<double> x;
  for (int it = 0; it < iters; ++it) {
    x = istft(target, cfg);
    const ComplexMatrix rebuilt = stft(x, cfg);
    double err = 0.0;
    for (Eigen::Index t = 0; t < mag.rows(); ++t)
      for (Eigen::Index k = 0; k < mag.cols(); ++k) {
        const std::complex<double> c = rebuilt(t, k);
        const double a = std::abs(c);
        err += (a - mag(t, k)) * (a - mag(t, k));
        // Undefined phase at a zero bin: any choice is a valid projection.
        target(t, k) = a > 0.0 ? mag(t, k) * (c / a)
                               : std::complex<double>(mag(t, k), 0.0);
      }
    result.errors.push_back(std::sqrt(err));
  }
  result.waveform.samples = std::move(x);
  return result;
}

Matrix features_to_linear_magnitude(const Spectrogram& s,
                                    const MelFilterbank* fb) {
  const FeatureConfig& cfg = s.config;
  Matrix logs = s.frames;
  for (Eigen::Index i = 0; i < logs.size(); ++i)
    if (!std::isfinite(logs.data()[i]))
      throw InvalidArgument("invert_features: non-finite feature");
  denormalize(logs, cfg.normalization);
  Matrix lin = logs.array().exp().matrix();
  if (cfg.kind == FeatureKind::kMel) {
    if (fb == nullptr)
      throw InvalidArgument("invert_features: mel features need a filterbank");
    return mel_to_linear(lin, *fb);
  }
  Matrix full = Matrix::Zero(lin.rows(), cfg.n_bins());
  full.leftCols(lin.cols()) = lin;
  return full;
}

Waveform invert_features(const Spectrogram& s, const MelFilterbank* fb,
                         int iters) {
  return griffin_lim(features_to_linear_magnitude(s, fb), s.config, iters)
      .waveform;
}

}  // namespace dsvae::dsp
