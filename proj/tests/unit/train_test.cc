// tests/unit/train_test.cc
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

#include <cmath>
#include <filesystem>
#include <fstream>
#include <set>

#include "doctest.h"
#include "dsvae/common/error.h"
#include "dsvae/common/io_util.h"
#include "dsvae/model/model_io.h"
#include "dsvae/train/trainer.h"
#include "support/toy.h"

namespace dsvae::train {
namespace {

namespace fs = std::filesystem;

// Two tones per speaker, 0.3 s each: 28 frames, 14 segments of 2.
std::vector<Utterance> toy_corpus(std::size_t speakers = 3) {
  std::vector<Utterance> out;
  std::mt19937_64 rng(5);
  std::normal_distribution<double> g(0.0, 0.01);
  for (std::size_t s = 0; s < speakers; ++s) {
    for (int u = 0; u < 2; ++u) {
      Utterance utt;
      utt.speaker = "spk" + std::to_string(s);
      utt.id = utt.speaker + "_utt" + std::to_string(u);
      utt.wav.sample_rate = 16000;
      const double f = 60.0 + 40.0 * static_cast<double>(s) + 15.0 * u;
      for (int n = 0; n < 4800; ++n)
        utt.wav.samples.push_back(0.3 * std::sin(2.0 * M_PI * f * n / 16000.0) +
                                  g(rng));
      out.push_back(std::move(utt));
    }
  }
  return out;
}

dsp::FeatureConfig toy_features() {
  dsp::FeatureConfig f = dsp::FeatureConfig::timit();
  f.feature_dim = 4;
  return f;
}

Dataset toy_dataset() { return Dataset(toy_corpus(), toy_features(), 2); }

NoiseBank toy_bank() {
  NoiseBank bank;
  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> u(-0.5, 0.5);
  for (const char* cat : {"noise", "music"}) {
    dsp::Waveform w;
    w.sample_rate = 16000;
    for (int n = 0; n < 8000; ++n) w.samples.push_back(u(rng));
    bank[cat].push_back(w);
  }
  return bank;
}

TrainConfig toy_train(std::size_t epochs = 2) {
  TrainConfig t;
  t.batch_size = 8;
  t.epochs = epochs;
  t.seed = 3;
  return t;
}

bool same_values(const ad::Tensor& a, const ad::Tensor& b) {
  if (a.shape() != b.shape()) return false;
  for (std::size_t i = 0; i < a.size(); ++i)
    if (a[i] != b[i]) return false;
  return true;
}

fs::path scratch(const std::string& name) {
  auto p = fs::temp_directory_path() / ("dsvae_train_test_" + name);
  fs::remove_all(p);
  return p;
}

TEST_CASE("run config parses known keys and rejects unknown ones") {
  const auto cfg = parse_run_config(
      "# comment\nfeature_dim=4\nseg_len=2\nbeta=10\nlr=0.001\naugment=on\n"
      "noise_categories=noise, music\nsnr_min=0\nsnr_max=5\nwin_ms=25\n",
      "inline");
  CHECK(cfg.model.feature_dim == 4);
  CHECK(cfg.model.beta == 10.0);
  CHECK(cfg.train.lr_initial == 0.001);
  CHECK(cfg.train.augment);
  CHECK(cfg.train.noise.categories == std::vector<std::string>{"noise", "music"});
  CHECK(cfg.resolved_features().feature_dim == 4);
  CHECK_THROWS_WITH_AS(parse_run_config("lerning_rate=1\n", "x.cfg"),
                       doctest::Contains("unknown config key 'lerning_rate'"),
                       InvalidArgument);
  const auto again = parse_run_config(cfg.to_text(), "echo");
  CHECK(again.to_text() == cfg.to_text());
}

TEST_CASE("shipped configs parse and validate") {
  const std::string dir = std::string(DSVAE_SOURCE_DIR) + "/configs/";
  const auto desk = load_run_config(dir + "timit_desk.cfg");
  desk.validate();
  CHECK(desk.model.encoder_hidden == 64);
  CHECK(desk.train.batch_size == 32);
  CHECK(desk.model.beta / desk.model.alpha == 10.0);
  const auto timit = load_run_config(dir + "timit_full.cfg");
  timit.validate();
  CHECK(timit.model.encoder_hidden == 512);
  CHECK(timit.train.batch_size == 256);
  CHECK(timit.train.lr_initial == 5e-4);
  const auto vctk = load_run_config(dir + "vctk_full.cfg");
  vctk.validate();
  CHECK(vctk.resolved_features().kind == dsp::FeatureKind::kMel);
  CHECK(vctk.model.seg_len == 100);
}

TEST_CASE("zero alpha and beta are rejected at config validation") {
  auto cfg = parse_run_config("alpha=0\nbeta=0\n", "inline");
  CHECK_THROWS_AS(cfg.validate(), InvalidArgument);
}

TEST_CASE("learning rate at epoch 11 is two decays down") {
  const TrainConfig t;
  CHECK(learning_rate(t, 1) == 5e-4);
  CHECK(learning_rate(t, 5) == 5e-4);
  CHECK(learning_rate(t, 6) == doctest::Approx(5e-4 * 0.95).epsilon(1e-15));
  CHECK(learning_rate(t, 11) == doctest::Approx(5e-4 * 0.95 * 0.95).epsilon(1e-15));
  CHECK_THROWS_AS(learning_rate(t, 0), InvalidArgument);
}

TEST_CASE("kl warm-up ramps both weights linearly and reports the full objective") {
  TrainConfig t;
  CHECK(kl_scale(t, 0, 10) == 1.0);
  t.kl_warmup_epochs = 2;
  CHECK(kl_scale(t, 0, 10) == 0.05);
  CHECK(kl_scale(t, 9, 10) == 0.5);
  CHECK(kl_scale(t, 19, 10) == 1.0);
  CHECK(kl_scale(t, 500, 10) == 1.0);
  CHECK(parse_run_config("kl_warmup_epochs=3\n", "inline").train.kl_warmup_epochs == 3);

  const model::Dsvae m(testing::toy_model_config(), 4);
  const Dataset d = toy_dataset();
  std::mt19937_64 rng(2);
  const Batch b = make_batch(d, epoch_batches(d, 4, 0, rng).front(), nullptr, {}, rng);
  ad::Tape tp(ad::Tape::Mode::kNoGrad);
  std::mt19937_64 r1(8), r2(8);
  const auto full = m.loss(tp, b.augmented, b.clean, r1);
  const auto warm = m.loss(tp, b.augmented, b.clean, r2, 0.25);
  CHECK(warm.total == full.total);
  const auto& c = m.config();
  CHECK(warm.total_tensor.item() ==
        doctest::Approx(full.recon_nll + 0.25 * (c.alpha * full.kl_speaker +
                                                 c.beta * full.kl_content))
            .epsilon(1e-12));
}

TEST_CASE("dataset drops segment remainders and normalizes per bin") {
  const Dataset d = toy_dataset();
  const int frames = dsp::frame_count(4800, toy_features());
  CHECK(frames == 28);
  CHECK(d.segments().size() == 6u * (28u / 2u));
  CHECK(d.speakers() == std::vector<std::string>{"spk0", "spk1", "spk2"});
  double sum = 0.0, sq = 0.0, n = 0.0;
  for (const auto& m : d.frames())
    for (Eigen::Index t = 0; t < m.rows(); ++t) {
      sum += m(t, 1);
      sq += m(t, 1) * m(t, 1);
      ++n;
    }
  CHECK(std::abs(sum / n) < 1e-9);
  CHECK(sq / n == doctest::Approx(1.0).epsilon(1e-9));

  auto c = toy_corpus();
  c[1].id = c[0].id;
  CHECK_THROWS_AS(Dataset(c, toy_features(), 2), InvalidArgument);
  CHECK_THROWS_AS(Dataset({}, toy_features(), 2), InvalidArgument);
}

TEST_CASE("speaker is taken from the directory or the file stem") {
  CHECK(speaker_of("spk3/utt1.wav") == "spk3");
  CHECK(speaker_of("spk3_utt1.wav") == "spk3");
  CHECK(speaker_of("single.wav") == "single");
}

TEST_CASE("hold-out split takes the last utterances of every speaker") {
  const auto corpus = toy_corpus(3);
  const auto split = hold_out(corpus, 1);
  REQUIRE(split.train.size() == 3);
  REQUIRE(split.test.size() == 3);
  for (std::size_t s = 0; s < 3; ++s) {
    CHECK(split.train[s].id == corpus[2 * s].id);
    CHECK(split.test[s].id == corpus[2 * s + 1].id);
  }
  CHECK(hold_out(corpus, 0).test.empty());
  CHECK_THROWS_AS(hold_out(corpus, 2), InvalidArgument);
}

TEST_CASE("epoch batches cover each segment once") {
  const Dataset d = toy_dataset();
  std::mt19937_64 rng(1);
  const auto batches = epoch_batches(d, 32, 0, rng);
  std::size_t total = 0;
  std::set<std::pair<std::size_t, std::size_t>> seen;
  for (const auto& b : batches) {
    total += b.size();
    for (const auto& r : b) seen.insert({r.utterance, r.start_frame});
  }
  CHECK(total == d.segments().size());
  CHECK(seen.size() == total);
  CHECK(batches.back().size() == total % 32);
  std::mt19937_64 rng2(1);
  CHECK(epoch_batches(d, 32, 10, rng2).front().size() == 10);
}

TEST_CASE("without augmentation the encoder input equals the target") {
  const Dataset d = toy_dataset();
  std::mt19937_64 rng(2);
  const auto refs = epoch_batches(d, 5, 0, rng).front();
  const Batch b = make_batch(d, refs, nullptr, {}, rng);
  CHECK(same_values(b.clean, b.augmented));
  CHECK(!b.clean.is(b.augmented));
  CHECK(b.clean.shape() == ad::Shape{2, 5, 4});
  for (double s : b.snr_db) CHECK(std::isinf(s));
  // Row t of batch column k is frame start+t of that utterance.
  const auto seg = d.clean_segment(refs[3]);
  for (std::size_t t = 0; t < 2; ++t)
    for (std::size_t j = 0; j < 4; ++j)
      CHECK(b.clean[(t * 5 + 3) * 4 + j] == seg(static_cast<Eigen::Index>(t),
                                                static_cast<Eigen::Index>(j)));
}

TEST_CASE("augmented batches draw SNRs from the configured range") {
  const Dataset d = toy_dataset();
  const NoiseBank bank = toy_bank();
  dsp::NoiseMixSpec spec;
  spec.snr_db_min = 0.0;
  spec.snr_db_max = 5.0;
  spec.categories = {"noise", "music", "babble"};  // babble absent: skipped
  std::mt19937_64 rng(4);
  const auto refs = epoch_batches(d, 40, 0, rng).front();
  const Batch b = make_batch(d, refs, &bank, spec, rng);
  double lo = 1e9, hi = -1e9;
  for (double s : b.snr_db) {
    lo = std::min(lo, s);
    hi = std::max(hi, s);
  }
  CHECK(lo >= 0.0);
  CHECK(hi <= 5.0);
  CHECK(hi - lo > 2.0);
  CHECK(!same_values(b.clean, b.augmented));

  spec.categories = {"babble"};
  CHECK_THROWS_AS(make_batch(d, refs, &bank, spec, rng), InvalidArgument);
}

TEST_CASE("noisy segment at infinite SNR matches the clean features") {
  const Dataset d = toy_dataset();
  const NoiseBank bank = toy_bank();
  const SegmentRef ref{2, 6};
  const auto clean = d.clean_segment(ref);
  const auto same = d.noisy_segment(ref, bank.at("noise")[0], dsp::kSnrDisabled, 0);
  CHECK((clean - same).cwiseAbs().maxCoeff() < 1e-9);
  const auto noisy = d.noisy_segment(ref, bank.at("noise")[0], 0.0, 100);
  CHECK((clean - noisy).cwiseAbs().maxCoeff() > 0.1);
}

TEST_CASE("train step scores the augmented input against the clean target") {
  const Dataset d = toy_dataset();
  const NoiseBank bank = toy_bank();
  const auto cfg = testing::toy_model_config();
  std::mt19937_64 rng(6);
  const auto refs = epoch_batches(d, 6, 0, rng).front();
  Batch b = make_batch(d, refs, &bank, {}, rng);
  // Sentinel target: far from anything the input could give back cheaply.
  for (double& v : b.clean.data()) v = 50.0;

  model::Dsvae m(cfg, 11);
  std::mt19937_64 latent(7), latent_copy(7);
  double expect_recon, expect_aug_target;
  {
    ad::Tape tp(ad::Tape::Mode::kNoGrad);
    expect_recon = m.loss(tp, b.augmented, b.clean, latent_copy).recon_nll;
    std::mt19937_64 again(7);
    expect_aug_target = m.loss(tp, b.augmented, b.augmented, again).recon_nll;
  }
  ad::AdamState adam;
  const auto l = train_step(m, b, adam, 5e-4, latent);
  CHECK(l.recon_nll == expect_recon);
  CHECK(l.recon_nll > 10.0 * expect_aug_target);
  CHECK(adam.step == 1);
  for (const auto& p : m.params())
    for (double g : p.tensor.grad()) CHECK(g == 0.0);
}

TEST_CASE("training is deterministic and blind to speaker labels") {
  const auto cfg = testing::toy_model_config();
  const auto t = toy_train(2);
  const auto a = train(toy_dataset(), cfg, t);
  const auto b = train(toy_dataset(), cfg, t);
  auto shuffled = toy_corpus();
  std::vector<std::string> labels;
  for (const auto& u : shuffled) labels.push_back(u.speaker);
  for (std::size_t i = 0; i < shuffled.size(); ++i)
    shuffled[i].speaker = labels[(i * 5 + 1) % labels.size()] + "x";
  const auto c = train(Dataset(shuffled, toy_features(), 2), cfg, t);

  REQUIRE(a.log.size() == 2);
  for (const auto* other : {&b, &c}) {
    for (std::size_t e = 0; e < 2; ++e) {
      CHECK(a.log[e].total == other->log[e].total);
      CHECK(a.log[e].kl_content == other->log[e].kl_content);
    }
    for (std::size_t i = 0; i < a.model.params().size(); ++i)
      CHECK(same_values(a.model.params()[i].tensor,
                        other->model.params()[i].tensor));
  }
  CHECK(a.log[1].total < a.log[0].total);

  auto t2 = t;
  t2.seed = 4;
  const auto d = train(toy_dataset(), cfg, t2);
  CHECK(d.log[0].total != a.log[0].total);
}

TEST_CASE("checkpoints and the training log are written every epoch") {
  const auto dir = scratch("ckpt");
  const auto cfg = testing::toy_model_config();
  const Dataset data = toy_dataset();
  TrainOptions opt;
  opt.out_dir = dir.string();
  std::vector<std::size_t> seen;
  opt.on_epoch = [&](const EpochLog& e, const model::Dsvae&) {
    seen.push_back(e.epoch);
    CHECK(fs::exists(dir / "last.ckpt"));
  };
  const auto r = train(data, cfg, toy_train(3), opt);
  CHECK(seen == std::vector<std::size_t>{1, 2, 3});
  CHECK(fs::exists(dir / "best.ckpt"));

  const auto lines = io::split(io::read_text_file((dir / "train_log.tsv").string()), '\n');
  REQUIRE(lines.size() >= 4);
  CHECK(lines[0] == log_header());
  for (std::size_t e = 0; e < 3; ++e) {
    const auto parsed = parse_log_line(lines[e + 1]);
    CHECK(parsed.epoch == e + 1);
    CHECK(parsed.total == r.log[e].total);
    CHECK(parsed.lr == r.log[e].lr);
  }

  const auto best = model::load_model((dir / "best.ckpt").string());
  CHECK(best.metadata.at("epoch") == std::to_string(r.best_epoch));
  const auto last = model::load_model((dir / "last.ckpt").string());
  CHECK(last.metadata.at("epoch") == "3");
  CHECK(last.feature_config.normalization.mean ==
        data.features().normalization.mean);
  fs::remove_all(dir);
}

TEST_CASE("resuming from a checkpoint reproduces the next step") {
  const auto dir = scratch("resume");
  const auto cfg = testing::toy_model_config();
  const Dataset data = toy_dataset();
  TrainOptions opt;
  opt.out_dir = dir.string();
  auto live = train(data, cfg, toy_train(1), opt);
  auto restored = model::load_model((dir / "last.ckpt").string());
  REQUIRE(restored.optimizer.has_value());

  std::mt19937_64 rng(12);
  const auto refs = epoch_batches(data, 8, 0, rng).front();
  const Batch batch = make_batch(data, refs, nullptr, {}, rng);
  std::mt19937_64 r1(13), r2(13);
  train_step(live.model, batch, live.optimizer, 5e-4, r1);
  train_step(restored.model, batch, *restored.optimizer, 5e-4, r2);
  ad::Tape tp(ad::Tape::Mode::kNoGrad);
  std::mt19937_64 r3(14), r4(14);
  const double a = live.model.loss(tp, batch.clean, batch.clean, r3).total;
  const double b = restored.model.loss(tp, batch.clean, batch.clean, r4).total;
  CHECK(std::abs(a - b) < 1e-12);
  fs::remove_all(dir);
}

TEST_CASE("divergence aborts and keeps the last good checkpoint") {
  const auto dir = scratch("diverge");
  const auto cfg = testing::toy_model_config();
  TrainOptions opt;
  opt.out_dir = dir.string();
  opt.on_epoch = [](const EpochLog& e, const model::Dsvae& m) {
    if (e.epoch == 1) {
      ad::Tensor w = m.params().front().tensor;
      w[0] = std::nan("");
    }
  };
  CHECK_THROWS_AS(train(toy_dataset(), cfg, toy_train(3), opt), Diverged);
  const auto kept = model::load_model((dir / "last.ckpt").string());
  CHECK(kept.metadata.at("epoch") == "1");
  for (const auto& p : kept.model.params())
    for (double v : p.tensor.data()) REQUIRE(std::isfinite(v));
  fs::remove_all(dir);
}

TEST_CASE("augmentation without a noise bank is rejected") {
  auto t = toy_train(1);
  t.augment = true;
  CHECK_THROWS_AS(train(toy_dataset(), testing::toy_model_config(), t),
                  InvalidArgument);
}

}  // namespace
}  // namespace dsvae::train
