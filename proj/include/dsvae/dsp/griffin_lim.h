// include/dsvae/dsp/griffin_lim.h
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

#ifndef DSVAE_DSP_GRIFFIN_LIM_H_
#define DSVAE_DSP_GRIFFIN_LIM_H_

#include <complex>
#include <vector>

#include "dsvae/dsp/features.h"
#include "dsvae/dsp/mel.h"

namespace dsvae::dsp {

using ComplexMatrix = Eigen::Matrix<std::complex<double>, Eigen::Dynamic,
                                    Eigen::Dynamic, Eigen::RowMajor>;

// Complex STFT with the same framing as stft_magnitude.
ComplexMatrix stft(std::span<const double> samples, const FeatureConfig& cfg);

// Least-squares inverse STFT (weighted overlap-add normalized by Σw²).
// Output length is (T-1)·hop + win. Samples whose summed window energy is
// below 1e-4 of the peak (the outermost edge samples) are zero.
std::vector<double> istft(const ComplexMatrix& spec, const FeatureConfig& cfg);

struct GriffinLimResult {
  Waveform waveform;
  // errors[k] = ‖|STFT(x_{k+1})| − mag‖_F; non-increasing in k.
  std::vector<double> errors;
};

inline constexpr int kDefaultGriffinLimIters = 100;

// Alternating projections from an all-zero initial phase. `mag` holds
// linear magnitudes, T × (fft_size/2+1).
GriffinLimResult griffin_lim(const Matrix& mag, const FeatureConfig& cfg,
                             int iters = kDefaultGriffinLimIters);

// Denormalize, exponentiate, undo the mel projection when needed, then run
// Griffin-Lim. `fb` is required for mel features.
Waveform invert_features(const Spectrogram& s, const MelFilterbank* fb,
                         int iters = kDefaultGriffinLimIters);

// Linear T × n_bins magnitudes implied by normalized log features.
Matrix features_to_linear_magnitude(const Spectrogram& s,
                                    const MelFilterbank* fb);

}  // namespace dsvae::dsp

#endif  // DSVAE_DSP_GRIFFIN_LIM_H_
