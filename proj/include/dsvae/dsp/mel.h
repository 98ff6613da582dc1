// include/dsvae/dsp/mel.h
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

#ifndef DSVAE_DSP_MEL_H_
#define DSVAE_DSP_MEL_H_

#include <memory>

#include "dsvae/dsp/features.h"

namespace dsvae::dsp {

// Triangular HTK-scale filterbank plus its Moore-Penrose pseudo-inverse.
class MelFilterbank {
 public:
  // Takes arbitrary nonnegative weights (d_mel × n_bins). Every row must have
  // a positive sum.
  explicit MelFilterbank(Matrix weights);

  static MelFilterbank make(int sample_rate, int fft_size, int num_mels,
                            double fmin_hz = 0.0, double fmax_hz = -1.0);
  // Shared instance for a feature config (num_mels = feature_dim).
  static std::shared_ptr<const MelFilterbank> cached(const FeatureConfig& cfg);

  const Matrix& weights() const { return weights_; }
  const Matrix& pseudo_inverse() const { return pinv_; }
  int num_mels() const { return static_cast<int>(weights_.rows()); }
  int num_bins() const { return static_cast<int>(weights_.cols()); }

 private:
  Matrix weights_;
  Matrix pinv_;
};

// log(max(mag · Wᵀ, kLogFloor)); T × n_bins → T × d_mel.
Matrix mel_project(const Matrix& linear_mag, const MelFilterbank& fb);

// Linear mel magnitudes back to linear bins: max(0, mel · pinvᵀ).
Matrix mel_to_linear(const Matrix& mel_mag, const MelFilterbank& fb);

double hz_to_mel(double hz);
double mel_to_hz(double mel);

}  // namespace dsvae::dsp

#endif  // DSVAE_DSP_MEL_H_
