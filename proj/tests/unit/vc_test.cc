// tests/unit/vc_test.cc
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

#include <filesystem>
#include <fstream>
#include <random>

#include "doctest.h"
#include "dsvae/common/error.h"
#include "dsvae/common/io_util.h"
#include "dsvae/dsp/feature_io.h"
#include "dsvae/eval/synth.h"
#include "dsvae/vc/convert.h"
#include "support/toy.h"

namespace dsvae::vc {
namespace {

namespace fs = std::filesystem;

dsp::Matrix random_frames(int rows, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> g(0.0, 1.0);
  dsp::Matrix m(rows, 4);
  for (Eigen::Index i = 0; i < m.size(); ++i) m.data()[i] = g(rng);
  return m;
}

TEST_CASE("self-conversion is bitwise the reconstruction") {
  const model::Dsvae m(testing::toy_model_config(), 5);
  for (int rows : {1, 2, 5, 8}) {
    const auto u = random_frames(rows, static_cast<std::uint64_t>(rows));
    const auto c = convert_frames(m, u, u);
    const auto r = reconstruct_frames(m, u);
    CHECK(c.frames.rows() == rows);
    CHECK(c.frames == r.frames);
    CHECK(c.segments == static_cast<std::size_t>((rows + 1) / 2));
  }
}

TEST_CASE("output length follows the source, not the target") {
  const model::Dsvae m(testing::toy_model_config(), 5);
  const auto src = random_frames(7, 1);
  const auto a = convert_frames(m, src, random_frames(3, 2));
  const auto b = convert_frames(m, src, random_frames(12, 3));
  CHECK(a.frames.rows() == 7);
  CHECK(b.frames.rows() == 7);
  CHECK(a.frames != b.frames);
  CHECK_THROWS_AS(convert_frames(m, src, dsp::Matrix::Zero(3, 5)), InvalidArgument);
  CHECK_THROWS_AS(convert_frames(m, dsp::Matrix::Zero(0, 4), src), InvalidArgument);
}

TEST_CASE("one-segment decode matches a hand-wired forward pass") {
  const auto cfg = testing::toy_model_config();
  const model::Dsvae m(cfg, 9);
  const auto src = random_frames(2, 4);
  const std::vector<double> mu_s{0.3, -1.2, 0.7};
  model::Tape tp(model::Tape::Mode::kNoGrad);
  const auto x = model::stack_segments({src});
  const auto content = m.encode_content(tp, m.encode_shared(tp, x));
  const model::Tensor z_s({1, 1, 3}, std::vector<double>(mu_s));
  const auto expect = model::unstack_segment(m.decode(tp, z_s, content.mean), 0);
  CHECK(decode_with_speaker(m, src, mu_s).frames == expect);
  const auto spk = m.encode_speaker(tp, m.encode_shared(tp, x));
  CHECK(speaker_embedding(m, src) ==
        std::vector<double>(spk.mean.data().begin(), spk.mean.data().end()));
}

TEST_CASE("double-sided harness pairs reconstructions with cross conversions") {
  const model::Dsvae m(testing::toy_model_config(), 2);
  const auto a = random_frames(6, 1), b = random_frames(5, 2);
  const auto d = double_sided(m, a, b);
  CHECK(d.recon_a == reconstruct_frames(m, a).frames);
  CHECK(d.recon_b == reconstruct_frames(m, b).frames);
  CHECK(d.a_as_b == convert_frames(m, a, b).frames);
  CHECK(d.b_as_a == convert_frames(m, b, a).frames);
  const auto dir = fs::temp_directory_path() / "dsvae_vc_test_ds";
  write_double_sided(dir.string(), d);
  CHECK(dsp::read_feature_file((dir / "a_as_b.feat").string()) == d.a_as_b);
  fs::remove_all(dir);
}

TEST_CASE("feature mse and file hashing") {
  const auto a = random_frames(3, 1);
  CHECK(feature_mse(a, a) == 0.0);
  dsp::Matrix b = a;
  b(0, 0) += 2.0;
  CHECK(feature_mse(a, b) == doctest::Approx(4.0 / 12.0));
  CHECK_THROWS_AS(feature_mse(a, random_frames(2, 1)), InvalidArgument);

  const auto path = fs::temp_directory_path() / "dsvae_vc_test_abc.txt";
  io::write_text_file(path.string(), "abc");
  CHECK(file_sha256(path.string()) ==
        "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
  fs::remove(path);
}

TEST_CASE("file-level conversion writes audio, features and a sidecar") {
  const auto dir = fs::temp_directory_path() / "dsvae_vc_test_run";
  fs::remove_all(dir);
  fs::create_directories(dir);
  auto feats = dsp::FeatureConfig::timit();
  feats.feature_dim = 4;
  eval::SynthCorpusSpec spec;
  spec.speakers = 2;
  spec.utts_per_speaker = 1;
  spec.duration_s = 0.3;
  const auto corpus = eval::synth_corpus(spec, 3);
  const auto src = (dir / "src.wav").string(), tgt = (dir / "tgt.wav").string();
  dsp::write_wav(src, corpus.utterances[0].utterance.wav);
  dsp::write_wav(tgt, corpus.utterances[1].utterance.wav);
  std::vector<dsp::Matrix> raw;
  for (const auto& u : corpus.utterances) raw.push_back(dsp::compute_features(u.utterance.wav, feats).frames);
  feats.normalization = dsp::compute_normalization(raw);
  const model::Dsvae m(testing::toy_model_config(), 1);
  const auto ckpt = (dir / "model.ckpt").string();
  model::save_model(ckpt, m, feats);

  ConversionRequest req;
  req.checkpoint = ckpt;
  req.source = src;
  req.target = src;
  req.output = (dir / "self.wav").string();
  req.feature_dump = (dir / "self.feat").string();
  req.vocoder_iters = 5;
  const auto conv = run_conversion(req, false);
  req.output = (dir / "recon.wav").string();
  req.feature_dump = (dir / "recon.feat").string();
  const auto rec = run_conversion(req, true);
  CHECK(conv.spectrogram.frames == rec.spectrogram.frames);
  CHECK(io::read_text_file((dir / "self.wav").string()) ==
        io::read_text_file((dir / "recon.wav").string()));
  CHECK(conv.spectrogram.frames.rows() == 28);
  CHECK(conv.segments == 14);

  const auto meta = io::parse_key_values(io::read_text_file(req.output + ".meta"), "meta");
  CHECK(meta.at("mode") == "reconstruct");
  CHECK(meta.at("segments") == "14");
  CHECK(meta.at("frames") == "28");
  CHECK(meta.at("checkpoint_sha256") == file_sha256(ckpt));
  CHECK(io::parse_double(meta.at("mse")) == rec.mse);
  CHECK(rec.mse == feature_mse(rec.spectrogram.frames, load_input_features(src, feats)));
  CHECK(dsp::read_feature_file(req.feature_dump) == rec.spectrogram.frames);

  // Feature-file input gives the same result as the WAV it came from.
  dsp::write_feature_file((dir / "src.feat").string(), load_input_features(src, feats));
  req.source = (dir / "src.feat").string();
  req.target = tgt;
  req.output = (dir / "cross.wav").string();
  req.feature_dump.clear();
  const auto from_feat = run_conversion(req, false);
  req.source = src;
  req.output = (dir / "cross2.wav").string();
  CHECK(run_conversion(req, false).spectrogram.frames == from_feat.spectrogram.frames);

  // Incompatible inputs are rejected before any audio is written.
  dsp::write_feature_file((dir / "wide.feat").string(), dsp::Matrix::Zero(10, 7));
  req.source = (dir / "wide.feat").string();
  req.output = (dir / "never.wav").string();
  CHECK_THROWS_AS(run_conversion(req, false), InvalidArgument);
  CHECK(!fs::exists(dir / "never.wav"));
  req.source = src;
  req.output = src;
  CHECK_THROWS_AS(run_conversion(req, false), InvalidArgument);
  fs::remove_all(dir);
}

}  // namespace
}  // namespace dsvae::vc
