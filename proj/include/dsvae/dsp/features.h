// include/dsvae/dsp/features.h
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

#ifndef DSVAE_DSP_FEATURES_H_
#define DSVAE_DSP_FEATURES_H_

#include <Eigen/Core>
#include <span>
#include <string>
#include <vector>

#include "dsvae/dsp/wav.h"

namespace dsvae::dsp {

// Time-major: one row per frame.
using Matrix =
    Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

// Magnitudes are floored here before the log.
inline constexpr double kLogFloor = 1e-5;

enum class FeatureKind { kStftMagnitude, kMel };

std::string to_string(FeatureKind kind);
FeatureKind feature_kind_from_string(const std::string& s);

// Dataset-level per-bin statistics. Empty means "not normalized".
struct Normalization {
  std::vector<double> mean;
  std::vector<double> stddev;

  bool empty() const { return mean.empty(); }
};

struct FeatureConfig {
  int sample_rate = 16000;
  double win_ms = 25.0;
  double hop_ms = 10.0;
  int fft_size = 512;
  int feature_dim = 200;
  FeatureKind kind = FeatureKind::kStftMagnitude;
  Normalization normalization;

  int win_samples() const;
  int hop_samples() const;
  int n_bins() const { return fft_size / 2 + 1; }

  // Throws InvalidArgument when any invariant is violated.
  void validate() const;

  // 25 ms / 10 ms Hann STFT, first 200 of 257 bins.
  static FeatureConfig timit();
  // 64 ms / 16 ms, 80-band mel.
  static FeatureConfig vctk();
};

struct Spectrogram {
  Matrix frames;  // T × feature_dim, normalized log-magnitude
  FeatureConfig config;

  Eigen::Index num_frames() const { return frames.rows(); }
  Eigen::Index dim() const { return frames.cols(); }
};

// Periodic Hann window of the configured length.
std::vector<double> hann_window(int length);

// Number of full frames in a signal of `num_samples`; 0 if shorter than one
// window.
int frame_count(std::size_t num_samples, const FeatureConfig& cfg);

// Linear STFT magnitudes, T × (fft_size/2+1). Frame t covers samples
// [t·hop, t·hop + win).
Matrix stft_magnitude(std::span<const double> samples,
                      const FeatureConfig& cfg);

class MelFilterbank;

// log(max(·, kLogFloor)) of the linear magnitudes reduced to feature_dim
// columns (first bins, or mel bands).
Matrix log_features(const Matrix& linear_mag, const FeatureConfig& cfg,
                    const MelFilterbank* fb = nullptr);

// Full pipeline. Throws InvalidArgument("input too short") when the
// waveform cannot hold one frame, or on NaN input.
Spectrogram compute_features(const Waveform& w, const FeatureConfig& cfg);

// Applies / removes cfg.normalization in place. No-ops when empty.
void normalize(Matrix& log_feats, const Normalization& norm);
void denormalize(Matrix& feats, const Normalization& norm);

// Per-column mean and standard deviation over all rows of all blocks.
Normalization compute_normalization(std::span<const Matrix> log_feats);

}  // namespace dsvae::dsp

#endif  // DSVAE_DSP_FEATURES_H_
