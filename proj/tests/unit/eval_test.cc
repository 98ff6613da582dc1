// tests/unit/eval_test.cc
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

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <limits>
#include <random>

#include "doctest.h"
#include "dsvae/common/error.h"
#include "dsvae/common/io_util.h"
#include "dsvae/eval/eer.h"
#include "dsvae/eval/synth.h"
#include "dsvae/eval/trials.h"
#include "support/eer_oracle.h"
#include "support/toy.h"

namespace dsvae::eval {
namespace {

namespace fs = std::filesystem;

UtteranceEmbedding emb(const std::string& id, const std::string& spk,
                       std::vector<double> v) {
  UtteranceEmbedding e;
  e.utt_id = id;
  e.speaker_id = spk;
  e.mu_s = v;
  e.mu_c = std::move(v);
  return e;
}

double pearson(const std::vector<double>& a, const std::vector<double>& b) {
  const double n = static_cast<double>(a.size());
  double ma = 0, mb = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    ma += a[i] / n;
    mb += b[i] / n;
  }
  double ab = 0, aa = 0, bb = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    ab += (a[i] - ma) * (b[i] - mb);
    aa += (a[i] - ma) * (a[i] - ma);
    bb += (b[i] - mb) * (b[i] - mb);
  }
  return ab / std::sqrt(aa * bb);
}

TEST_CASE("EER of the three-by-three example is one third") {
  const std::vector<double> tgt{0.9, 0.7, 0.6}, non{0.8, 0.4, 0.3};
  const auto r = compute_eer(tgt, non);
  CHECK(r.eer == 1.0 / 3.0);
  CHECK(r.threshold == 0.7);
  CHECK(r.targets == 3);
  CHECK(r.nontargets == 3);
  CHECK(testing::brute_force_eer(tgt, non) == 1.0 / 3.0);
}

TEST_CASE("EER extremes and errors") {
  CHECK(compute_eer(std::vector<double>{0.9, 0.8}, std::vector<double>{0.1, 0.2}).eer == 0.0);
  CHECK(compute_eer(std::vector<double>{0.1, 0.2}, std::vector<double>{0.9, 0.8}).eer == 1.0);
  // All scores tied: every threshold accepts everything or nothing.
  CHECK(compute_eer(std::vector<double>{0.5, 0.5}, std::vector<double>{0.5}).eer == 0.5);
  CHECK_THROWS_AS(compute_eer(std::vector<double>{0.1}, std::vector<double>{}),
                  InvalidArgument);
  CHECK_THROWS_AS(compute_eer(std::vector<double>{}, std::vector<double>{0.1}),
                  InvalidArgument);
  CHECK_THROWS_AS(
      compute_eer(std::vector<double>{std::nan("")}, std::vector<double>{0.1}),
      InvalidArgument);
}

TEST_CASE("EER matches the brute-force oracle on random score sets") {
  std::mt19937_64 rng(17);
  for (int trial = 0; trial < 300; ++trial) {
    const int p = std::uniform_int_distribution<int>(1, 100)(rng);
    const int n = std::uniform_int_distribution<int>(1, 100)(rng);
    const bool coarse = trial % 3 == 0;  // many ties
    std::normal_distribution<double> g(0.0, 1.0);
    auto draw = [&](double shift) {
      double v = g(rng) + shift;
      return coarse ? std::round(v * 4.0) / 4.0 : v;
    };
    std::vector<double> tgt, non;
    for (int i = 0; i < p; ++i) tgt.push_back(draw(1.0));
    for (int i = 0; i < n; ++i) non.push_back(draw(0.0));
    const double got = compute_eer(tgt, non).eer;
    CHECK(std::abs(got - testing::brute_force_eer(tgt, non)) < 1e-9);
    CHECK(got >= 0.0);
    CHECK(got <= 1.0);
    // Strictly increasing transform.
    for (double& v : tgt) v = std::exp(2.0 * v) - 3.0;
    for (double& v : non) v = std::exp(2.0 * v) - 3.0;
    CHECK(compute_eer(tgt, non).eer == got);
  }
}

TEST_CASE("cosine scoring") {
  CHECK(cosine({1, 2, 3}, {1, 2, 3}) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(cosine({1, 0}, {0, 5}) == 0.0);
  CHECK(cosine({0, 0}, {1, 1}) == 0.0);
  std::mt19937_64 rng(3);
  std::normal_distribution<double> g(0.0, 1.0);
  std::vector<double> a(64), b(64);
  for (auto& v : a) v = g(rng);
  for (auto& v : b) v = g(rng);
  double dot = 0, na = 0, nb = 0;
  for (int i = 0; i < 64; ++i) {
    dot += a[i] * b[i];
    na += a[i] * a[i];
    nb += b[i] * b[i];
  }
  CHECK(std::abs(cosine(a, b) - dot / (std::sqrt(na) * std::sqrt(nb))) < 1e-12);
  CHECK_THROWS_AS(cosine({1}, {1, 2}), InvalidArgument);
}

TEST_CASE("trial generation counts") {
  std::vector<UtteranceEmbedding> four{emb("a1", "A", {1}), emb("a2", "A", {1}),
                                       emb("b1", "B", {1}), emb("b2", "B", {1})};
  const auto all = generate_trials(four);
  CHECK(all.size() == 6);
  CHECK(std::count_if(all.begin(), all.end(), [](const Trial& t) { return t.target; }) == 2);
  for (const auto& t : all) CHECK(t.utt_a != t.utt_b);

  const auto bal = generate_trials(four, TrialMode::kBalanced, 1, 5);
  CHECK(bal.size() == 2);
  CHECK(bal[0].target);
  CHECK(!bal[1].target);
  CHECK(generate_trials(four, TrialMode::kBalanced, 10, 5).size() == 6);

  CHECK_THROWS_AS(generate_trials({four[0]}), InvalidArgument);
  CHECK_THROWS_AS(generate_trials({four[0], four[1]}), InvalidArgument);
}

TEST_CASE("scoring reports every unknown utterance id") {
  std::vector<UtteranceEmbedding> utts{emb("a", "A", {1, 0}), emb("b", "B", {0, 1})};
  const std::vector<Trial> trials{{true, "a", "zz"}, {false, "yy", "b"}};
  CHECK_THROWS_WITH_AS(score_trials(utts, trials, EmbeddingKind::kSpeaker),
                       doctest::Contains("yy, zz"), InvalidArgument);
  const auto s = score_trials(utts, {{false, "a", "b"}}, EmbeddingKind::kContent);
  CHECK(s[0].score == 0.0);
}

TEST_CASE("trials and embedding CSV files round-trip exactly") {
  const auto dir = fs::temp_directory_path() / "dsvae_eval_test_io";
  fs::create_directories(dir);
  std::mt19937_64 rng(8);
  std::normal_distribution<double> g(0.0, 1.0);
  std::vector<UtteranceEmbedding> utts;
  for (int i = 0; i < 6; ++i) {
    std::vector<double> v(5);
    for (auto& x : v) x = g(rng) * std::pow(10.0, i - 3);
    utts.push_back(emb("u" + std::to_string(i), "s" + std::to_string(i % 2), v));
  }
  const auto trials = generate_trials(utts);
  write_trials((dir / "trials.txt").string(), trials);
  CHECK(read_trials((dir / "trials.txt").string()) == trials);
  CHECK(io::read_text_file((dir / "trials.txt").string()).substr(0, 7) == "0 u0 u1");

  write_embedding_csv((dir / "spk.csv").string(), utts, EmbeddingKind::kSpeaker);
  const auto back = read_embedding_csv((dir / "spk.csv").string(), EmbeddingKind::kSpeaker);
  REQUIRE(back.size() == utts.size());
  for (std::size_t i = 0; i < utts.size(); ++i) {
    CHECK(back[i].utt_id == utts[i].utt_id);
    CHECK(back[i].speaker_id == utts[i].speaker_id);
    CHECK(back[i].mu_s == utts[i].mu_s);
  }
  CHECK(io::read_text_file((dir / "spk.csv").string()).rfind("utt_id,speaker_id,e0,e1,e2,e3,e4\n", 0) == 0);
  CHECK(all_pairs_eer(back, EmbeddingKind::kSpeaker).eer ==
        all_pairs_eer(utts, EmbeddingKind::kSpeaker).eer);

  io::write_text_file((dir / "bad.txt").string(), "2 a b\n");
  CHECK_THROWS_AS(read_trials((dir / "bad.txt").string()), IoError);
  io::write_text_file((dir / "bad.txt").string(), "1 a a\n");
  CHECK_THROWS_AS(read_trials((dir / "bad.txt").string()), IoError);
  fs::remove_all(dir);
}

dsp::Matrix random_frames(int rows, int cols, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> g(0.0, 1.0);
  dsp::Matrix m(rows, cols);
  for (Eigen::Index i = 0; i < m.size(); ++i) m.data()[i] = g(rng);
  return m;
}

TEST_CASE("embeddings pool posterior means over segments") {
  const auto cfg = testing::toy_model_config();
  const model::Dsvae m(cfg, 21);
  const auto one = random_frames(2, 4, 1), other = random_frames(2, 4, 2);

  // Single segment: mu_s is that segment's posterior mean.
  model::Tape tp(model::Tape::Mode::kNoGrad);
  const auto post = m.encode_speaker(tp, m.encode_shared(tp, model::stack_segments({one})));
  const auto e1 = embed_frames(m, one, "x", "s");
  for (std::size_t j = 0; j < cfg.speaker_dim; ++j) CHECK(e1.mu_s[j] == post.mean[j]);
  CHECK(!e1.padded);
  CHECK(e1.mu_c.size() == cfg.content_dim);

  const auto e2 = embed_frames(m, other, "y", "s");
  dsp::Matrix both(4, 4), swapped(4, 4), doubled(8, 4);
  both << one, other;
  swapped << other, one;
  doubled << one, one, other, other;
  const auto eb = embed_frames(m, both, "b", "s");
  const auto es = embed_frames(m, swapped, "s", "s");
  const auto ed = embed_frames(m, doubled, "d", "s");
  for (std::size_t j = 0; j < cfg.speaker_dim; ++j) {
    CHECK(eb.mu_s[j] == doctest::Approx((e1.mu_s[j] + e2.mu_s[j]) / 2).epsilon(1e-14));
    CHECK(es.mu_s[j] == doctest::Approx(eb.mu_s[j]).epsilon(1e-14));
    CHECK(ed.mu_s[j] == doctest::Approx(eb.mu_s[j]).epsilon(1e-14));
  }
  for (std::size_t j = 0; j < cfg.content_dim; ++j) {
    CHECK(eb.mu_c[j] == doctest::Approx((e1.mu_c[j] + e2.mu_c[j]) / 2).epsilon(1e-14));
    CHECK(ed.mu_c[j] == doctest::Approx(eb.mu_c[j]).epsilon(1e-14));
  }

  // A trailing partial segment is not used.
  dsp::Matrix tail(3, 4);
  tail << one, other.row(0);
  CHECK(embed_frames(m, tail, "t", "s").mu_s == e1.mu_s);

  // Shorter than one segment: padded and flagged.
  const auto short_e = embed_frames(m, one.topRows(1), "short", "s");
  CHECK(short_e.padded);
  for (double v : short_e.mu_c) CHECK(std::isfinite(v));
  CHECK_THROWS_AS(embed_frames(m, random_frames(2, 5, 3), "w", "s"), InvalidArgument);
}

TEST_CASE("parallel and serial extraction agree") {
  const auto cfg = testing::toy_model_config();
  const model::Dsvae m(cfg, 4);
  SynthCorpusSpec spec;
  spec.speakers = 2;
  spec.utts_per_speaker = 3;
  spec.duration_s = 0.3;
  const auto utts = utterances_of(synth_corpus(spec, 2));
  auto feats = dsp::FeatureConfig::timit();
  feats.feature_dim = 4;
  const auto a = extract_embeddings(m, feats, utts, 1);
  const auto b = extract_embeddings(m, feats, utts, 3);
  REQUIRE(a.size() == 6);
  for (std::size_t i = 0; i < a.size(); ++i) {
    CHECK(a[i].utt_id == utts[i].id);
    CHECK(a[i].mu_s == b[i].mu_s);
    CHECK(a[i].mu_c == b[i].mu_c);
  }
}

TEST_CASE("synthetic corpus is deterministic and survives a WAV round trip") {
  SynthCorpusSpec spec;
  spec.speakers = 3;
  spec.utts_per_speaker = 2;
  spec.duration_s = 0.5;
  const auto a = synth_corpus(spec, 7);
  const auto b = synth_corpus(spec, 7);
  const auto c = synth_corpus(spec, 8);
  REQUIRE(a.utterances.size() == 6);
  CHECK(a.utterances[4].utterance.id == "spk2_utt0");
  CHECK(a.utterances[4].utterance.speaker == "spk2");
  for (std::size_t i = 0; i < 6; ++i) {
    CHECK(a.utterances[i].utterance.wav.samples == b.utterances[i].utterance.wav.samples);
    CHECK(a.utterances[i].utterance.wav.samples.size() == 8000);
  }
  CHECK(a.utterances[0].utterance.wav.samples != c.utterances[0].utterance.wav.samples);

  const auto dir = fs::temp_directory_path() / "dsvae_eval_test_synth";
  fs::remove_all(dir);
  write_synth_corpus(dir.string(), a);
  const auto scan = train::read_corpus(dir.string(), 16000);
  CHECK(scan.skipped == 0);
  REQUIRE(scan.utterances.size() == 6);
  for (std::size_t i = 0; i < 6; ++i) {
    CHECK(scan.utterances[i].id == a.utterances[i].utterance.id);
    CHECK(scan.utterances[i].speaker == a.utterances[i].utterance.speaker);
    CHECK(scan.utterances[i].wav.samples == a.utterances[i].utterance.wav.samples);
  }
  const auto manifest = io::split(io::read_text_file((dir / "manifest.tsv").string()), '\n');
  CHECK(manifest[0] == "utt_id\tspeaker_id\tf0_hz\tphones");
  CHECK(manifest[1].rfind("spk0_utt0\tspk0\t", 0) == 0);
  fs::remove_all(dir);
}

TEST_CASE("synthetic speakers are separated in the long-term spectrum") {
  SynthCorpusSpec spec;
  spec.utts_per_speaker = 4;
  spec.duration_s = 4.0;  // long enough for the phone mix to average out
  const auto c = synth_corpus(spec, 7);
  const auto feats = dsp::FeatureConfig::timit();
  const std::size_t k = spec.utts_per_speaker;
  std::vector<std::vector<double>> ltas, average(spec.speakers);
  for (const auto& u : c.utterances) ltas.push_back(long_term_spectrum(u.utterance.wav, feats));
  for (std::size_t i = 0; i < ltas.size(); ++i) {
    auto& avg = average[i / k];
    avg.resize(ltas[i].size(), 0.0);
    for (std::size_t j = 0; j < avg.size(); ++j) avg[j] += ltas[i][j] / k;
  }
  double within = 1.0, across = -1.0;
  for (std::size_t i = 0; i < ltas.size(); ++i)
    for (std::size_t j = i + 1; j < ltas.size(); ++j)
      if (i / k == j / k) within = std::min(within, pearson(ltas[i], ltas[j]));
  for (std::size_t a = 0; a < average.size(); ++a)
    for (std::size_t b = a + 1; b < average.size(); ++b)
      across = std::max(across, pearson(average[a], average[b]));
  MESSAGE("LTAS correlation: same-speaker pairs >= " << within
          << ", between speaker averages <= " << across);
  CHECK(within > 0.95);
  CHECK(across < 0.9);
}

TEST_CASE("synthetic noise bank holds the three categories") {
  const auto bank = synth_noise_bank(16000, 2, 0.5, 3);
  CHECK(bank.size() == 3);
  for (const char* cat : {"noise", "music", "babble"}) {
    REQUIRE(bank.count(cat));
    CHECK(bank.at(cat).size() == 2);
    for (const auto& w : bank.at(cat)) {
      CHECK(w.samples.size() == 8000);
      CHECK(dsp::mean_power(w.samples) == doctest::Approx(0.01).epsilon(0.01));
    }
  }
  CHECK(bank.at("noise")[0].samples != bank.at("noise")[1].samples);
  CHECK(synth_noise_bank(16000, 2, 0.5, 3).at("babble")[1].samples ==
        bank.at("babble")[1].samples);
}

}  // namespace
}  // namespace dsvae::eval
