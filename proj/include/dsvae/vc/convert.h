// include/dsvae/vc/convert.h
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

#ifndef DSVAE_VC_CONVERT_H_
#define DSVAE_VC_CONVERT_H_

#include <map>
#include <string>
#include <vector>

#include "dsvae/dsp/features.h"
#include "dsvae/dsp/griffin_lim.h"
#include "dsvae/model/dsvae.h"
#include "dsvae/model/model_io.h"

namespace dsvae::vc {

// Utterance-level speaker embedding (posterior means over full segments).
std::vector<double> speaker_embedding(const model::Dsvae& model, const dsp::Matrix& frames);

struct DecodedFeatures {
  dsp::Matrix frames;  // normalized, one row per source frame
  std::size_t segments = 0;
};

// Content posterior means of every source segment (the last one zero-padded)
// decoded with the given speaker embedding; segments are concatenated in
// order and trimmed to the source length.
DecodedFeatures decode_with_speaker(const model::Dsvae& model, const dsp::Matrix& source,
                                    const std::vector<double>& mu_s);

// Source content with the target's speaker embedding.
DecodedFeatures convert_frames(const model::Dsvae& model, const dsp::Matrix& source,
                               const dsp::Matrix& target);
// Source content with its own utterance-level speaker embedding.
DecodedFeatures reconstruct_frames(const model::Dsvae& model, const dsp::Matrix& source);

// Mean squared difference between two equally shaped feature matrices.
double feature_mse(const dsp::Matrix& a, const dsp::Matrix& b);

struct ConversionRequest {
  std::string checkpoint;
  std::string source;  // WAV, or DSFEAT1 file of normalized features
  std::string target;  // ignored by reconstruct
  std::string output;  // WAV path
  std::string feature_dump;  // optional DSFEAT1 of the output features
  int vocoder_iters = dsp::kDefaultGriffinLimIters;
};

struct ConversionOutput {
  dsp::Spectrogram spectrogram;
  dsp::Waveform waveform;
  std::size_t segments = 0;
  double mse = 0.0;  // output vs source features, normalized domain
  std::map<std::string, std::string> metadata;
};

// Loads everything, checks compatibility before any audio work, converts
// (or reconstructs when `reconstruct` is set), vocodes with Griffin-Lim and
// writes the WAV, the optional feature dump and "<output>.meta" (key=value:
// mode, source, target, checkpoint, checkpoint_sha256, segments, frames,
// mse, vocoder_iters).
ConversionOutput run_conversion(const ConversionRequest& req, bool reconstruct);

// Normalized features of a WAV or DSFEAT1 input under the bundle's config.
dsp::Matrix load_input_features(const std::string& path, const dsp::FeatureConfig& features);

// Hex SHA-256 of a file's bytes.
std::string file_sha256(const std::string& path);

struct DoubleSided {
  dsp::Matrix recon_a, recon_b;
  dsp::Matrix a_as_b;  // content of a, speaker of b
  dsp::Matrix b_as_a;
};

// Reconstructions and both cross-conversions for a pair of utterances.
DoubleSided double_sided(const model::Dsvae& model, const dsp::Matrix& a, const dsp::Matrix& b);
// Writes recon_a/recon_b/a_as_b/b_as_a .feat files (DSFEAT1) into `dir`.
void write_double_sided(const std::string& dir, const DoubleSided& d);

}  // namespace dsvae::vc

#endif  // DSVAE_VC_CONVERT_H_
