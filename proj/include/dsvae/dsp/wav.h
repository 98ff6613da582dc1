// include/dsvae/dsp/wav.h
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

#ifndef DSVAE_DSP_WAV_H_
#define DSVAE_DSP_WAV_H_

#include <string>
#include <vector>

namespace dsvae::dsp {

// Mono audio. Samples are nominally in [-1, 1].
struct Waveform {
  std::vector<double> samples;
  int sample_rate = 16000;

  std::size_t size() const { return samples.size(); }
  bool empty() const { return samples.empty(); }
};

// Throws InvalidArgument for a non-positive rate or non-finite samples.
void validate(const Waveform& w);

enum class WavEncoding { kPcm16, kFloat32 };

// Reads a mono RIFF/WAVE file holding 16-bit PCM or 32-bit float samples.
// Multi-channel files are rejected.
Waveform read_wav(const std::string& path);
void write_wav(const std::string& path, const Waveform& w,
               WavEncoding encoding = WavEncoding::kPcm16);

// Integer-factor decimation with a windowed-sinc anti-alias filter.
Waveform decimate(const Waveform& w, int factor);

// Brings `w` to `target_rate`, which must divide its rate exactly.
Waveform to_rate(const Waveform& w, int target_rate);

}  // namespace dsvae::dsp

#endif  // DSVAE_DSP_WAV_H_
