// src/vc/convert.cc
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

#include "dsvae/vc/convert.h"

#include <openssl/evp.h>

#include <array>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <sstream>

#include "dsvae/common/error.h"
#include "dsvae/common/io_util.h"
#include "dsvae/dsp/feature_io.h"
#include "dsvae/dsp/mel.h"
#include "dsvae/dsp/segment.h"
#include "dsvae/eval/embeddings.h"

namespace dsvae::vc {

namespace {

void check_dim(const model::Dsvae& model, const dsp::Matrix& frames, const char* what) {
  if (static_cast<std::size_t>(frames.cols()) != model.config().feature_dim)
    throw InvalidArgument(std::string(what) + " has " + std::to_string(frames.cols()) +
                          "-dim features but the checkpoint expects " +
                          std::to_string(model.config().feature_dim));
  if (frames.rows() < 1) throw InvalidArgument(std::string(what) + " has no frames");
}

}  // namespace

std::vector<double> speaker_embedding(const model::Dsvae& model, const dsp::Matrix& frames) {
  check_dim(model, frames, "speaker input");
  return eval::embed_frames(model, frames, "", "").mu_s;
}

DecodedFeatures decode_with_speaker(const model::Dsvae& model, const dsp::Matrix& source,
                                    const std::vector<double>& mu_s) {
  check_dim(model, source, "source");
  const auto& cfg = model.config();
  if (mu_s.size() != cfg.speaker_dim) throw InvalidArgument("speaker embedding size mismatch");
  auto seg = dsp::segment(source, static_cast<int>(cfg.seg_len), dsp::SegmentMode::kInference);
  std::vector<const dsp::Matrix*> frames;
  for (const auto& s : seg.segments) frames.push_back(&s.frames);
  const std::size_t k = frames.size();

  model::Tape tp(model::Tape::Mode::kNoGrad);
  const auto x = model::stack_segments(frames);
  const auto content = model.encode_content(tp, model.encode_shared(tp, x));
  model::Tensor z_s({1, k, cfg.speaker_dim});
  for (std::size_t b = 0; b < k; ++b)
    for (std::size_t j = 0; j < cfg.speaker_dim; ++j) z_s[b * cfg.speaker_dim + j] = mu_s[j];
  const auto recon = model.decode(tp, z_s, content.mean);
  for (std::size_t b = 0; b < k; ++b) seg.segments[b].frames = model::unstack_segment(recon, b);
  return {dsp::concatenate(seg.segments), k};
}

DecodedFeatures convert_frames(const model::Dsvae& model, const dsp::Matrix& source,
                               const dsp::Matrix& target) {
  return decode_with_speaker(model, source, speaker_embedding(model, target));
}

DecodedFeatures reconstruct_frames(const model::Dsvae& model, const dsp::Matrix& source) {
  return decode_with_speaker(model, source, speaker_embedding(model, source));
}

double feature_mse(const dsp::Matrix& a, const dsp::Matrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols() || a.size() == 0)
    throw InvalidArgument("feature_mse: shape mismatch");
  return (a - b).squaredNorm() / static_cast<double>(a.size());
}

dsp::Matrix load_input_features(const std::string& path, const dsp::FeatureConfig& features) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path);
  std::array<char, 7> magic{};
  in.read(magic.data(), magic.size());
  in.close();
  if (std::string(magic.data(), magic.size()) == "DSFEAT1") {
    auto m = dsp::read_feature_file(path);
    if (m.cols() != features.feature_dim)
      throw InvalidArgument(path + ": " + std::to_string(m.cols()) +
                            "-dim features, checkpoint expects " +
                            std::to_string(features.feature_dim));
    return m;
  }
  return dsp::compute_features(dsp::to_rate(dsp::read_wav(path), features.sample_rate),
                               features)
      .frames;
}

std::string file_sha256(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path);
  EVP_MD_CTX* ctx = EVP_MD_CTX_new();
  if (ctx == nullptr || EVP_DigestInit_ex(ctx, EVP_sha256(), nullptr) != 1) {
    EVP_MD_CTX_free(ctx);
    throw Error("sha256 init failed");
  }
  std::array<char, 1 << 16> buf;
  while (in) {
    in.read(buf.data(), buf.size());
    if (in.gcount() > 0) EVP_DigestUpdate(ctx, buf.data(), static_cast<std::size_t>(in.gcount()));
  }
  std::array<unsigned char, EVP_MAX_MD_SIZE> md;
  unsigned int len = 0;
  EVP_DigestFinal_ex(ctx, md.data(), &len);
  EVP_MD_CTX_free(ctx);
  std::ostringstream os;
  for (unsigned int i = 0; i < len; ++i)
    os << std::hex << std::setw(2) << std::setfill('0') << static_cast<int>(md[i]);
  return os.str();
}

ConversionOutput run_conversion(const ConversionRequest& req, bool reconstruct) {
  namespace fs = std::filesystem;
  if (req.output.empty()) throw InvalidArgument("no output path");
  if (fs::exists(req.source) && fs::exists(req.output) &&
      fs::equivalent(req.source, req.output))
    throw InvalidArgument("output would overwrite the source " + req.source);
  if (req.vocoder_iters < 1) throw InvalidArgument("vocoder iterations must be >= 1");
  const auto bundle = model::load_model(req.checkpoint);
  const auto& features = bundle.feature_config;
  if (static_cast<std::size_t>(features.feature_dim) != bundle.model_config.feature_dim)
    throw InvalidArgument(req.checkpoint + ": feature and model dimensions disagree");
  const auto source = load_input_features(req.source, features);
  const auto decoded =
      reconstruct ? reconstruct_frames(bundle.model, source)
                  : convert_frames(bundle.model, source,
                                   load_input_features(req.target, features));

  ConversionOutput out;
  out.spectrogram.frames = decoded.frames;
  out.spectrogram.config = features;
  out.segments = decoded.segments;
  out.mse = feature_mse(decoded.frames, source);
  const auto fb = features.kind == dsp::FeatureKind::kMel ? dsp::MelFilterbank::cached(features)
                                                          : nullptr;
  out.waveform = dsp::invert_features(out.spectrogram, fb.get(), req.vocoder_iters);

  if (fs::path(req.output).has_parent_path())
    fs::create_directories(fs::path(req.output).parent_path());
  dsp::write_wav(req.output, out.waveform);
  if (!req.feature_dump.empty()) dsp::write_feature_file(req.feature_dump, decoded.frames);
  out.metadata = {
      {"mode", reconstruct ? "reconstruct" : "convert"},
      {"source", req.source},
      {"target", reconstruct ? req.source : req.target},
      {"checkpoint", req.checkpoint},
      {"checkpoint_sha256", file_sha256(req.checkpoint)},
      {"segments", std::to_string(out.segments)},
      {"frames", std::to_string(decoded.frames.rows())},
      {"mse", io::format_double(out.mse)},
      {"vocoder_iters", std::to_string(req.vocoder_iters)},
  };
  std::string meta;
  for (const auto& [k, v] : out.metadata) meta += k + "=" + v + "\n";
  io::write_text_file(req.output + ".meta", meta);
  return out;
}

DoubleSided double_sided(const model::Dsvae& model, const dsp::Matrix& a, const dsp::Matrix& b) {
  const auto sa = speaker_embedding(model, a), sb = speaker_embedding(model, b);
  return {decode_with_speaker(model, a, sa).frames, decode_with_speaker(model, b, sb).frames,
          decode_with_speaker(model, a, sb).frames, decode_with_speaker(model, b, sa).frames};
}

void write_double_sided(const std::string& dir, const DoubleSided& d) {
  namespace fs = std::filesystem;
  fs::create_directories(dir);
  dsp::write_feature_file((fs::path(dir) / "recon_a.feat").string(), d.recon_a);
  dsp::write_feature_file((fs::path(dir) / "recon_b.feat").string(), d.recon_b);
  dsp::write_feature_file((fs::path(dir) / "a_as_b.feat").string(), d.a_as_b);
  dsp::write_feature_file((fs::path(dir) / "b_as_a.feat").string(), d.b_as_a);
}

}  // namespace dsvae::vc
