// include/dsvae/eval/embeddings.h
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

#ifndef DSVAE_EVAL_EMBEDDINGS_H_
#define DSVAE_EVAL_EMBEDDINGS_H_

#include <string>
#include <vector>

#include "dsvae/dsp/features.h"
#include "dsvae/model/dsvae.h"
#include "dsvae/train/dataset.h"

namespace dsvae::eval {

struct UtteranceEmbedding {
  std::string utt_id;
  std::string speaker_id;  // metadata
  std::vector<double> mu_s;
  std::vector<double> mu_c;
  // Shorter than one segment: computed from a single zero-padded segment.
  bool padded = false;
};

enum class EmbeddingKind { kSpeaker, kContent };
std::string to_string(EmbeddingKind kind);
EmbeddingKind embedding_kind_from_string(const std::string& s);

// Posterior-mean embeddings of one utterance given its normalized T × d
// features. The utterance is cut into full segments (the remainder is not
// used); mu_s is the mean of the segments' speaker means and mu_c the mean
// over segments of each segment's time-averaged content means. Inputs
// shorter than one segment are zero-padded to a single segment and only
// its true-length steps enter mu_c.
UtteranceEmbedding embed_frames(const model::Dsvae& model, const dsp::Matrix& frames,
                                std::string utt_id, std::string speaker_id);

// Featurizes (with the normalization in `features`) and embeds every
// utterance; runs on up to `workers` threads (0 means DSVAE_THREADS).
std::vector<UtteranceEmbedding> extract_embeddings(
    const model::Dsvae& model, const dsp::FeatureConfig& features,
    const std::vector<train::Utterance>& utterances, std::size_t workers = 0);

const std::vector<double>& select(const UtteranceEmbedding& e, EmbeddingKind kind);

// Cosine similarity; 0 when either vector is all zeros.
double cosine(const std::vector<double>& a, const std::vector<double>& b);

// CSV with header "utt_id,speaker_id,e0,...,e{d-1}", full double precision.
void write_embedding_csv(const std::string& path,
                         const std::vector<UtteranceEmbedding>& embeddings,
                         EmbeddingKind kind);
// Reads one CSV back; the vectors land in the field named by `kind`.
std::vector<UtteranceEmbedding> read_embedding_csv(const std::string& path,
                                                   EmbeddingKind kind);

}  // namespace dsvae::eval

#endif  // DSVAE_EVAL_EMBEDDINGS_H_
