// include/dsvae/eval/synth.h
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

#ifndef DSVAE_EVAL_SYNTH_H_
#define DSVAE_EVAL_SYNTH_H_

#include <cstdint>
#include <string>
#include <vector>

#include "dsvae/train/dataset.h"

namespace dsvae::eval {

// Synthetic speech-like corpus with known factors. Every speaker owns a
// fixed spectral envelope and a base f0; every utterance is a random
// sequence of phones drawn from an inventory shared by all speakers, each
// phone a set of formant peaks. Audio is harmonic synthesis of the f0
// contour shaped by envelope × formants, plus aspiration noise shaped by
// the envelope alone and a faint white noise floor.
struct SynthCorpusSpec {
  std::size_t speakers = 8;
  std::size_t utts_per_speaker = 50;
  double duration_s = 1.0;
  int sample_rate = 16000;
  std::size_t phones = 6;         // inventory size
  double phone_min_ms = 80.0;
  double phone_max_ms = 200.0;
  double formant_db_min = 30.0;   // formant peak gain range
  double formant_db_max = 40.0;
  double formant_bw_min = 80.0;   // Hz
  double formant_bw_max = 200.0;
  double envelope_db = 24.0;      // peak size of the speaker envelope bumps
  double breath_db = -40.0;       // envelope-shaped noise vs harmonics
  double noise_floor_db = -45.0;  // relative to the signal RMS
  double vibrato = 0.0;           // peak relative f0 excursion
  double declination = 0.0;       // relative f0 drop over the utterance

  void validate() const;
};

struct SpeakerProfile {
  std::string id;
  double f0_hz = 0.0;
  // Log-amplitude envelope (dB) sampled every 10 Hz from 0 to Nyquist.
  std::vector<double> envelope_db;
};

struct SynthUtterance {
  train::Utterance utterance;
  std::vector<std::size_t> phones;  // ground-truth content
};

struct SynthCorpus {
  std::vector<SpeakerProfile> speakers;
  std::vector<SynthUtterance> utterances;  // speaker-major order
};

// Deterministic in (spec, seed). Samples sit on the 16-bit PCM grid so that
// a write/read round trip is exact.
SynthCorpus synth_corpus(const SynthCorpusSpec& spec, std::uint64_t seed);

// Ids are spk<i>_utt<j> with both indices zero-padded to a common width.
// Writes <id>.wav files and manifest.tsv (columns utt_id,
// speaker_id, f0_hz, phones) into `dir`.
void write_synth_corpus(const std::string& dir, const SynthCorpus& corpus);

std::vector<train::Utterance> utterances_of(const SynthCorpus& corpus);

// Synthetic noise bank: "noise" (coloured Gaussian), "music" (sustained
// harmonic notes) and "babble" (overlapping synthetic talkers unrelated to
// any corpus speaker). `files` per category, `seconds` long each.
train::NoiseBank synth_noise_bank(int sample_rate, std::size_t files,
                                  double seconds, std::uint64_t seed);
// One subdirectory per category, as read_noise_bank expects.
void write_noise_bank(const std::string& dir, const train::NoiseBank& bank);

// Long-term average spectrum in dB: mean STFT power per bin over all
// frames, first feature_dim bins.
std::vector<double> long_term_spectrum(const dsp::Waveform& w,
                                       const dsp::FeatureConfig& cfg);

}  // namespace dsvae::eval

#endif  // DSVAE_EVAL_SYNTH_H_
