// src/eval/embeddings.cc
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

#include "dsvae/eval/embeddings.h"

#include <cmath>
#include <fstream>
#include <sstream>

#include "dsvae/common/error.h"
#include "dsvae/common/io_util.h"
#include "dsvae/common/parallel.h"
#include "dsvae/dsp/segment.h"

namespace dsvae::eval {

std::string to_string(EmbeddingKind kind) {
  return kind == EmbeddingKind::kSpeaker ? "speaker" : "content";
}

EmbeddingKind embedding_kind_from_string(const std::string& s) {
  if (s == "speaker" || s == "mu_s") return EmbeddingKind::kSpeaker;
  if (s == "content" || s == "mu_c") return EmbeddingKind::kContent;
  throw InvalidArgument("unknown embedding kind '" + s + "' (speaker|content)");
}

UtteranceEmbedding embed_frames(const model::Dsvae& model, const dsp::Matrix& frames,
                                std::string utt_id, std::string speaker_id) {
  const auto& cfg = model.config();
  if (static_cast<std::size_t>(frames.cols()) != cfg.feature_dim)
    throw InvalidArgument("utterance " + utt_id + " has " +
                          std::to_string(frames.cols()) + "-dim features, model expects " +
                          std::to_string(cfg.feature_dim));
  const int seg_len = static_cast<int>(cfg.seg_len);
  auto seg = dsp::segment(frames, seg_len, dsp::SegmentMode::kInference);
  UtteranceEmbedding e;
  e.utt_id = std::move(utt_id);
  e.speaker_id = std::move(speaker_id);
  e.padded = seg.short_input;
  std::vector<const dsp::Matrix*> use;
  std::vector<int> lengths;
  for (const auto& s : seg.segments)
    if (s.true_length == seg_len || seg.short_input) {
      use.push_back(&s.frames);
      lengths.push_back(s.true_length);
    }

  model::Tape tp(model::Tape::Mode::kNoGrad);
  const auto x = model::stack_segments(use);
  const auto w = model.encode_shared(tp, x);
  const auto spk = model.encode_speaker(tp, w);
  const auto con = model.encode_content(tp, w);
  const std::size_t k_count = use.size(), ds = cfg.speaker_dim, dc = cfg.content_dim;
  e.mu_s.assign(ds, 0.0);
  e.mu_c.assign(dc, 0.0);
  for (std::size_t k = 0; k < k_count; ++k) {
    for (std::size_t j = 0; j < ds; ++j) e.mu_s[j] += spk.mean[k * ds + j];
    const auto steps = static_cast<std::size_t>(lengths[k]);
    for (std::size_t j = 0; j < dc; ++j) {
      double acc = 0.0;
      for (std::size_t t = 0; t < steps; ++t) acc += con.mean[(t * k_count + k) * dc + j];
      e.mu_c[j] += acc / static_cast<double>(steps);
    }
  }
  for (double& v : e.mu_s) v /= static_cast<double>(k_count);
  for (double& v : e.mu_c) v /= static_cast<double>(k_count);
  return e;
}

std::vector<UtteranceEmbedding> extract_embeddings(
    const model::Dsvae& model, const dsp::FeatureConfig& features,
    const std::vector<train::Utterance>& utterances, std::size_t workers) {
  std::vector<UtteranceEmbedding> out(utterances.size());
  parallel_for(
      utterances.size(),
      [&](std::size_t i) {
        const auto& u = utterances[i];
        out[i] = embed_frames(model, dsp::compute_features(u.wav, features).frames,
                              u.id, u.speaker);
      },
      workers);
  return out;
}

const std::vector<double>& select(const UtteranceEmbedding& e, EmbeddingKind kind) {
  return kind == EmbeddingKind::kSpeaker ? e.mu_s : e.mu_c;
}

double cosine(const std::vector<double>& a, const std::vector<double>& b) {
  if (a.size() != b.size()) throw InvalidArgument("cosine: dimension mismatch");
  double ab = 0.0, aa = 0.0, bb = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    ab += a[i] * b[i];
    aa += a[i] * a[i];
    bb += b[i] * b[i];
  }
  if (aa == 0.0 || bb == 0.0) return 0.0;
  return ab / std::sqrt(aa * bb);
}

void write_embedding_csv(const std::string& path,
                         const std::vector<UtteranceEmbedding>& embeddings,
                         EmbeddingKind kind) {
  std::ostringstream os;
  const std::size_t dim = embeddings.empty() ? 0 : select(embeddings[0], kind).size();
  os << "utt_id,speaker_id";
  for (std::size_t j = 0; j < dim; ++j) os << ",e" << j;
  os << "\n";
  for (const auto& e : embeddings) {
    const auto& v = select(e, kind);
    if (v.size() != dim) throw InvalidArgument("embeddings differ in dimension");
    if (e.utt_id.find_first_of(",\n") != std::string::npos ||
        e.speaker_id.find_first_of(",\n") != std::string::npos)
      throw InvalidArgument("ids may not contain commas: " + e.utt_id);
    os << e.utt_id << "," << e.speaker_id;
    for (double x : v) os << "," << io::format_double(x);
    os << "\n";
  }
  io::write_text_file(path, os.str());
}

std::vector<UtteranceEmbedding> read_embedding_csv(const std::string& path,
                                                   EmbeddingKind kind) {
  std::istringstream is(io::read_text_file(path));
  std::string line;
  if (!std::getline(is, line) || line.rfind("utt_id,speaker_id", 0) != 0)
    throw IoError(path + ": missing embedding CSV header");
  const std::size_t dim = io::split(line, ',').size() - 2;
  std::vector<UtteranceEmbedding> out;
  std::size_t line_no = 1;
  while (std::getline(is, line)) {
    ++line_no;
    if (io::trim(line).empty()) continue;
    const auto f = io::split(line, ',');
    if (f.size() != dim + 2)
      throw IoError(path + ":" + std::to_string(line_no) + ": expected " +
                    std::to_string(dim + 2) + " fields");
    UtteranceEmbedding e;
    e.utt_id = f[0];
    e.speaker_id = f[1];
    auto& v = kind == EmbeddingKind::kSpeaker ? e.mu_s : e.mu_c;
    for (std::size_t j = 0; j < dim; ++j) v.push_back(io::parse_double(f[j + 2]));
    out.push_back(std::move(e));
  }
  return out;
}

}  // namespace dsvae::eval
