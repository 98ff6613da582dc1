// include/dsvae/dsp/noise.h
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

#ifndef DSVAE_DSP_NOISE_H_
#define DSVAE_DSP_NOISE_H_

#include <limits>
#include <span>
#include <string>
#include <vector>

#include "dsvae/dsp/wav.h"

namespace dsvae::dsp {

// Passing this as snr_db disables mixing.
inline constexpr double kSnrDisabled = std::numeric_limits<double>::infinity();

struct NoiseMixSpec {
  double snr_db_min = 3.0;
  double snr_db_max = 10.0;
  std::vector<std::string> categories{"noise", "music", "babble"};

  void validate() const;
};

double mean_power(std::span<const double> x);

// `noise` tiled (wrapping) from `offset` to `length` samples.
std::vector<double> tile_noise(std::span<const double> noise,
                               std::size_t length, std::size_t offset = 0);

// Scale g with 10·log10(P_clean / P(g·noise)) == snr_db.
double noise_gain(std::span<const double> clean, std::span<const double> noise,
                  double snr_db);

// clean + g·noise, noise tiled/cropped to the clean length starting at
// `noise_offset`. Throws InvalidArgument("degenerate noise") for zero-power
// noise and on zero-power clean input or mismatched rates.
Waveform mix_at_snr(const Waveform& clean, const Waveform& noise,
                    double snr_db, std::size_t noise_offset = 0);

}  // namespace dsvae::dsp

#endif  // DSVAE_DSP_NOISE_H_
