// src/dsp/noise.cc
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

#include "dsvae/dsp/noise.h"

#include <cmath>

#include "dsvae/common/error.h"

namespace dsvae::dsp {

void NoiseMixSpec::validate() const {
  if (!(snr_db_min <= snr_db_max))
    throw InvalidArgument("snr_db_min must not exceed snr_db_max");
  if (categories.empty())
    throw InvalidArgument("noise mix spec needs at least one category");
}

double mean_power(std::span<const double> x) {
  if (x.empty()) return 0.0;
  double acc = 0.0;
  for (double v : x) acc += v * v;
  return acc / static_cast<double>(x.size());
}

std::vector<double> tile_noise(std::span<const double> noise,
                               std::size_t length, std::size_t offset) {
  if (noise.empty()) throw InvalidArgument("degenerate noise: empty signal");
  std::vector<double> out(length);
  for (std::size_t i = 0; i < length; ++i)
    out[i] = noise[(offset + i) % noise.size()];
  return out;
}

double noise_gain(std::span<const double> clean, std::span<const double> noise,
                  double snr_db) {
  const double pc = mean_power(clean);
  const double pn = mean_power(noise);
  if (!(pn > 0.0)) throw InvalidArgument("degenerate noise: zero power");
  if (!(pc > 0.0)) throw InvalidArgument("mix_at_snr: clean signal has zero power");
  return std::sqrt(pc / (pn * std::pow(10.0, snr_db / 10.0)));
}

Waveform mix_at_snr(const Waveform& clean, const Waveform& noise,
                    double snr_db, std::size_t noise_offset) {
  if (std::isinf(snr_db) && snr_db > 0) return clean;
  if (clean.sample_rate != noise.sample_rate)
    throw InvalidArgument("mix_at_snr: sample rates differ (" +
                          std::to_string(clean.sample_rate) + " vs " +
                          std::to_string(noise.sample_rate) + ")");
  if (!std::isfinite(snr_db)) throw InvalidArgument("mix_at_snr: bad snr");
  const auto tiled = tile_noise(noise.samples, clean.size(), noise_offset);
  const double g = noise_gain(clean.samples, tiled, snr_db);
  Waveform out = clean;
  for (std::size_t i = 0; i < out.samples.size(); ++i)
    out.samples[i] += g * tiled[i];
  return out;
}

}  // namespace dsvae::dsp
