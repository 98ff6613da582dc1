// tools/dsvae_cli.cc
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

// dsvae: command-line driver for corpus synthesis, training, embedding
// extraction, speaker-verification scoring, beta/alpha sweeps and voice
// conversion.
//
// Exit codes: 0 success, 1 bad flags / config / inputs, 2 runtime failure
// (divergence, I/O).

#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "dsvae/common/error.h"
#include "dsvae/common/io_util.h"
#include "dsvae/common/parallel.h"
#include "dsvae/eval/eer.h"
#include "dsvae/eval/embeddings.h"
#include "dsvae/eval/sweep.h"
#include "dsvae/eval/synth.h"
#include "dsvae/eval/trials.h"
#include "dsvae/model/model_io.h"
#include "dsvae/train/config_file.h"
#include "dsvae/train/trainer.h"
#include "dsvae/vc/convert.h"

namespace {

namespace fs = std::filesystem;
using namespace dsvae;

void echo_config(const std::string& command, const std::string& text) {
  std::cerr << "# " << command << " resolved config\n" << text;
  if (!text.empty() && text.back() != '\n') std::cerr << '\n';
}

std::string kv_text(const std::map<std::string, std::string>& kv) {
  return model::to_config_text(kv);
}

// Config file, then --set key=value overrides in order, then --seed.
train::RunConfig resolve_config(const std::string& path,
                                const std::vector<std::string>& overrides,
                                const std::optional<std::uint64_t>& seed) {
  train::RunConfig cfg = path.empty() ? train::RunConfig{} : train::load_run_config(path);
  for (const auto& o : overrides) {
    const auto eq = o.find('=');
    if (eq == std::string::npos || eq == 0)
      throw InvalidArgument("--set " + o + ": expected key=value");
    try {
      cfg.set(io::trim(o.substr(0, eq)), io::trim(o.substr(eq + 1)));
    } catch (const InvalidArgument& e) {
      throw InvalidArgument("--set " + o + ": " + e.what());
    }
  }
  if (seed) cfg.train.seed = *seed;
  cfg.validate();
  return cfg;
}

std::vector<train::Utterance> load_corpus(const std::string& dir, int sample_rate,
                                          const std::string& flag) {
  auto scan = train::read_corpus(dir, sample_rate);
  if (scan.utterances.empty())
    throw InvalidArgument(flag + " " + dir + ": no readable WAV files");
  if (scan.skipped > 0)
    std::cerr << "warning: " << scan.skipped << " unreadable files skipped under " << dir << "\n";
  return std::move(scan.utterances);
}

std::optional<train::NoiseBank> load_noise(const train::RunConfig& cfg,
                                           const std::string& noise_dir) {
  if (!cfg.train.augment) return std::nullopt;
  if (noise_dir.empty())
    throw InvalidArgument("augment=on needs --noise-dir");
  return train::read_noise_bank(noise_dir, cfg.train.noise.categories,
                                cfg.features.sample_rate);
}

std::vector<double> parse_ratios(const std::string& text) {
  std::vector<double> out;
  for (const auto& f : io::split(text, ',')) {
    const std::string t = io::trim(f);
    if (t.empty()) continue;
    double v;
    try {
      v = io::parse_double(t);
    } catch (const Error&) {
      throw InvalidArgument("--ratios: '" + t + "' is not a number");
    }
    if (!(v > 0.0)) throw InvalidArgument("--ratios: '" + t + "' must be positive");
    out.push_back(v);
  }
  if (out.empty()) throw InvalidArgument("--ratios: no values");
  return out;
}

// ---------------------------------------------------------------- commands

struct SynthArgs {
  std::string out;
  std::size_t speakers = 8;
  std::size_t utts = 50;
  double duration = 1.0;
  std::uint64_t seed = 1;
  std::string noise_out;
  std::size_t noise_files = 4;
  double noise_seconds = 2.0;
};

int run_synth(const SynthArgs& a) {
  eval::SynthCorpusSpec spec;
  spec.speakers = a.speakers;
  spec.utts_per_speaker = a.utts;
  spec.duration_s = a.duration;
  spec.validate();
  echo_config("synth-data",
              kv_text({{"out", a.out},
                       {"speakers", std::to_string(a.speakers)},
                       {"utts", std::to_string(a.utts)},
                       {"duration", io::format_double(a.duration)},
                       {"seed", std::to_string(a.seed)},
                       {"noise_out", a.noise_out},
                       {"noise_files", std::to_string(a.noise_files)},
                       {"noise_seconds", io::format_double(a.noise_seconds)}}));
  const auto corpus = eval::synth_corpus(spec, a.seed);
  eval::write_synth_corpus(a.out, corpus);
  std::cout << "wrote " << corpus.utterances.size() << " utterances of "
            << corpus.speakers.size() << " speakers to " << a.out << "\n";
  if (!a.noise_out.empty()) {
    // A separate stream so the corpus does not depend on the noise request.
    const auto bank = eval::synth_noise_bank(spec.sample_rate, a.noise_files,
                                             a.noise_seconds, a.seed + 1);
    eval::write_noise_bank(a.noise_out, bank);
    std::cout << "wrote noise bank (" << bank.size() << " categories) to "
              << a.noise_out << "\n";
  }
  return 0;
}

struct TrainArgs {
  std::string config;
  std::vector<std::string> overrides;
  std::optional<std::uint64_t> seed;
  std::string data;
  std::string noise_dir;
  std::string out;
  std::size_t holdout = 0;
};

int run_train(const TrainArgs& a) {
  const auto cfg = resolve_config(a.config, a.overrides, a.seed);
  echo_config("train", cfg.to_text() + kv_text({{"data", a.data},
                                                {"noise_dir", a.noise_dir},
                                                {"out", a.out},
                                                {"holdout", std::to_string(a.holdout)}}));
  auto utts = load_corpus(a.data, cfg.features.sample_rate, "--data");
  if (a.holdout > 0) utts = train::hold_out(utts, a.holdout).train;
  const auto noise = load_noise(cfg, a.noise_dir);
  train::Dataset data(std::move(utts), cfg.resolved_features(), cfg.model.seg_len);
  std::cerr << "training on " << data.utterances().size() << " utterances, "
            << data.segments().size() << " segments\n";

  fs::create_directories(a.out);
  io::write_text_file((fs::path(a.out) / "config.cfg").string(), cfg.to_text());
  train::TrainOptions opt;
  opt.out_dir = a.out;
  opt.noise = noise ? &*noise : nullptr;
  std::cout << train::log_header() << "\n";
  opt.on_epoch = [](const train::EpochLog& e, const model::Dsvae&) {
    std::cout << train::format_log_line(e) << std::endl;
  };
  const auto r = train::train(data, cfg.model, cfg.train, opt);
  std::cerr << "best epoch " << r.best_epoch << "; checkpoints in " << a.out << "\n";
  return 0;
}

struct ExtractArgs {
  std::string checkpoint;
  std::string data;
  std::string out_dir;
};

int run_extract(const ExtractArgs& a) {
  echo_config("extract", kv_text({{"checkpoint", a.checkpoint},
                                  {"data", a.data},
                                  {"out_dir", a.out_dir},
                                  {"threads", std::to_string(worker_count())}}));
  const auto bundle = model::load_model(a.checkpoint);
  const auto utts = load_corpus(a.data, bundle.feature_config.sample_rate, "--data");
  const auto emb = eval::extract_embeddings(bundle.model, bundle.feature_config, utts);
  fs::create_directories(a.out_dir);
  for (auto kind : {eval::EmbeddingKind::kSpeaker, eval::EmbeddingKind::kContent}) {
    const auto path = (fs::path(a.out_dir) / (eval::to_string(kind) + ".csv")).string();
    eval::write_embedding_csv(path, emb, kind);
    std::cout << "wrote " << path << "\n";
  }
  return 0;
}

struct SvEvalArgs {
  std::string embeddings;
  std::string checkpoint;
  std::string data;
  std::string kind = "speaker";
  std::string trials;
  std::string write_trials;
  std::size_t balanced = 0;
  std::uint64_t seed = 1;
  std::string out;
};

int run_sv_eval(const SvEvalArgs& a) {
  const bool from_csv = !a.embeddings.empty();
  if (from_csv == !a.checkpoint.empty())
    throw InvalidArgument("give either --embeddings or --checkpoint with --data");
  if (!from_csv && a.data.empty()) throw InvalidArgument("--checkpoint needs --data");
  if (!a.trials.empty() && a.balanced > 0)
    throw InvalidArgument("--trials and --balanced are exclusive");
  const auto kind = eval::embedding_kind_from_string(a.kind);
  echo_config("sv-eval", kv_text({{"embeddings", a.embeddings},
                                  {"checkpoint", a.checkpoint},
                                  {"data", a.data},
                                  {"kind", a.kind},
                                  {"trials", a.trials},
                                  {"write_trials", a.write_trials},
                                  {"balanced", std::to_string(a.balanced)},
                                  {"seed", std::to_string(a.seed)}}));

  std::vector<eval::UtteranceEmbedding> emb;
  if (from_csv) {
    emb = eval::read_embedding_csv(a.embeddings, kind);
  } else {
    const auto bundle = model::load_model(a.checkpoint);
    const auto utts = load_corpus(a.data, bundle.feature_config.sample_rate, "--data");
    emb = eval::extract_embeddings(bundle.model, bundle.feature_config, utts);
  }
  std::vector<eval::Trial> trials;
  if (!a.trials.empty())
    trials = eval::read_trials(a.trials);
  else
    trials = eval::generate_trials(
        emb, a.balanced > 0 ? eval::TrialMode::kBalanced : eval::TrialMode::kAllPairs,
        a.balanced, a.seed);
  if (!a.write_trials.empty()) eval::write_trials(a.write_trials, trials);
  const auto scored = eval::score_trials(emb, trials, kind);
  const auto r = eval::compute_eer(scored);
  const std::string report = kv_text({{"kind", a.kind},
                                      {"eer", io::format_double(r.eer)},
                                      {"threshold", io::format_double(r.threshold)},
                                      {"targets", std::to_string(r.targets)},
                                      {"nontargets", std::to_string(r.nontargets)}});
  std::cout << report;
  if (!a.out.empty()) io::write_text_file(a.out, report);
  return 0;
}

struct SweepArgs {
  std::string config;
  std::vector<std::string> overrides;
  std::optional<std::uint64_t> seed;
  std::string data;
  std::string test_data;
  std::size_t holdout = 10;
  std::string noise_dir;
  std::string ratios = "1,10,20,100";
  std::string out;
};

int run_sweep(const SweepArgs& a) {
  const auto cfg = resolve_config(a.config, a.overrides, a.seed);
  const auto ratios = parse_ratios(a.ratios);
  echo_config("sweep", cfg.to_text() + kv_text({{"data", a.data},
                                                {"test_data", a.test_data},
                                                {"holdout", std::to_string(a.holdout)},
                                                {"noise_dir", a.noise_dir},
                                                {"ratios", a.ratios},
                                                {"out", a.out}}));
  auto utts = load_corpus(a.data, cfg.features.sample_rate, "--data");
  std::vector<train::Utterance> test;
  if (!a.test_data.empty()) {
    test = load_corpus(a.test_data, cfg.features.sample_rate, "--test-data");
  } else {
    auto split = train::hold_out(utts, a.holdout);
    utts = std::move(split.train);
    test = std::move(split.test);
  }
  if (test.empty()) throw InvalidArgument("sweep needs test utterances (--test-data or --holdout)");
  const auto noise = load_noise(cfg, a.noise_dir);
  train::Dataset data(std::move(utts), cfg.resolved_features(), cfg.model.seg_len);
  const auto rows = eval::sweep_beta_alpha(data, test, cfg, ratios, noise ? &*noise : nullptr);
  const std::string tsv = eval::sweep_tsv(rows);
  io::write_text_file(a.out, tsv);
  std::cout << tsv;
  return 0;
}

struct ConvertArgs {
  std::string checkpoint;
  std::string source;
  std::string target;
  std::string out;
  std::string feat_out;
  int iters = dsp::kDefaultGriffinLimIters;
};

int run_convert(const ConvertArgs& a, bool reconstruct) {
  if (a.iters < 1) throw InvalidArgument("--iters must be >= 1");
  const std::string cmd = reconstruct ? "reconstruct" : "convert";
  std::map<std::string, std::string> kv{{"checkpoint", a.checkpoint},
                                        {"source", a.source},
                                        {"out", a.out},
                                        {"feat_out", a.feat_out},
                                        {"iters", std::to_string(a.iters)}};
  if (!reconstruct) kv["target"] = a.target;
  echo_config(cmd, kv_text(kv));
  vc::ConversionRequest req;
  req.checkpoint = a.checkpoint;
  req.source = a.source;
  req.target = reconstruct ? a.source : a.target;
  req.output = a.out;
  req.feature_dump = a.feat_out;
  req.vocoder_iters = a.iters;
  const auto r = vc::run_conversion(req, reconstruct);
  std::cout << "wrote " << a.out << " (" << r.spectrogram.frames.rows() << " frames, "
            << r.segments << " segments, mse " << io::format_double(r.mse) << ")\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Disentangled sequential VAE for zero-shot voice conversion"};
  app.require_subcommand(1);
  app.set_help_all_flag("--help-all", "Expand all help");

  SynthArgs synth;
  auto* s = app.add_subcommand("synth-data", "Write a synthetic multi-speaker corpus");
  s->add_option("--out", synth.out, "Output directory")->required();
  s->add_option("--speakers", synth.speakers, "Number of speakers")->check(CLI::Range(2, 1000));
  s->add_option("--utts", synth.utts, "Utterances per speaker")->check(CLI::Range(1, 100000));
  s->add_option("--duration", synth.duration, "Seconds per utterance")->check(CLI::Range(0.06, 600.0));
  s->add_option("--seed", synth.seed, "Random seed");
  s->add_option("--noise-out", synth.noise_out, "Also write a noise bank here");
  s->add_option("--noise-files", synth.noise_files, "Noise files per category")->check(CLI::Range(1, 1000));
  s->add_option("--noise-seconds", synth.noise_seconds, "Seconds per noise file")->check(CLI::Range(0.1, 600.0));

  TrainArgs tr;
  auto* t = app.add_subcommand("train", "Train a model");
  t->add_option("--config", tr.config, "key=value config file")->check(CLI::ExistingFile);
  t->add_option("--set", tr.overrides, "Override a config key (key=value), repeatable");
  t->add_option("--seed", tr.seed, "Random seed (overrides the config)");
  t->add_option("--data", tr.data, "Corpus directory of WAV files")->required()->check(CLI::ExistingDirectory);
  t->add_option("--noise-dir", tr.noise_dir, "Noise bank (one subdirectory per category)")->check(CLI::ExistingDirectory);
  t->add_option("--out", tr.out, "Run directory for checkpoints and the log")->required();
  t->add_option("--holdout", tr.holdout, "Leave out the last N utterances of every speaker");

  ExtractArgs ex;
  auto* e = app.add_subcommand("extract", "Export speaker and content embeddings as CSV");
  e->add_option("--checkpoint", ex.checkpoint, "Model checkpoint")->required()->check(CLI::ExistingFile);
  e->add_option("--data", ex.data, "Directory of WAV files")->required()->check(CLI::ExistingDirectory);
  e->add_option("--out-dir", ex.out_dir, "Writes speaker.csv and content.csv here")->required();

  SvEvalArgs sv;
  auto* v = app.add_subcommand("sv-eval", "Cosine-scored speaker verification EER");
  v->add_option("--embeddings", sv.embeddings, "Embedding CSV from extract")->check(CLI::ExistingFile);
  v->add_option("--checkpoint", sv.checkpoint, "Model checkpoint (end-to-end mode)")->check(CLI::ExistingFile);
  v->add_option("--data", sv.data, "Directory of WAV files (end-to-end mode)")->check(CLI::ExistingDirectory);
  v->add_option("--kind", sv.kind, "speaker or content")->check(CLI::IsMember({"speaker", "content"}));
  v->add_option("--trials", sv.trials, "Trials file (default: all pairs)")->check(CLI::ExistingFile);
  v->add_option("--write-trials", sv.write_trials, "Save the trials used");
  v->add_option("--balanced", sv.balanced, "Draw N target and N nontarget trials");
  v->add_option("--seed", sv.seed, "Seed for --balanced");
  v->add_option("--out", sv.out, "Also write the report here");

  SweepArgs sw;
  auto* w = app.add_subcommand("sweep", "Train one model per beta/alpha ratio and report");
  w->add_option("--config", sw.config, "key=value config file")->check(CLI::ExistingFile);
  w->add_option("--set", sw.overrides, "Override a config key (key=value), repeatable");
  w->add_option("--seed", sw.seed, "Random seed (overrides the config)");
  w->add_option("--data", sw.data, "Corpus directory of WAV files")->required()->check(CLI::ExistingDirectory);
  w->add_option("--test-data", sw.test_data, "Evaluation corpus (default: held out from --data)")->check(CLI::ExistingDirectory);
  w->add_option("--holdout", sw.holdout, "Utterances per speaker held out when --test-data is absent");
  w->add_option("--noise-dir", sw.noise_dir, "Noise bank for augment=on")->check(CLI::ExistingDirectory);
  w->add_option("--ratios", sw.ratios, "Comma-separated beta/alpha values");
  w->add_option("--out", sw.out, "Sweep report (TSV)")->required();

  ConvertArgs cv;
  auto* c = app.add_subcommand("convert", "Source content in the target speaker's voice");
  c->add_option("--checkpoint", cv.checkpoint, "Model checkpoint")->required()->check(CLI::ExistingFile);
  c->add_option("--source", cv.source, "Source WAV or feature file")->required()->check(CLI::ExistingFile);
  c->add_option("--target", cv.target, "Target WAV or feature file")->required()->check(CLI::ExistingFile);
  c->add_option("--out", cv.out, "Output WAV")->required();
  c->add_option("--feat-out", cv.feat_out, "Also dump the output features");
  c->add_option("--iters", cv.iters, "Griffin-Lim iterations");

  ConvertArgs rc;
  auto* r = app.add_subcommand("reconstruct", "Re-synthesize an utterance through the model");
  r->add_option("--checkpoint", rc.checkpoint, "Model checkpoint")->required()->check(CLI::ExistingFile);
  r->add_option("--source", rc.source, "Input WAV or feature file")->required()->check(CLI::ExistingFile);
  r->add_option("--out", rc.out, "Output WAV")->required();
  r->add_option("--feat-out", rc.feat_out, "Also dump the output features");
  r->add_option("--iters", rc.iters, "Griffin-Lim iterations");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& err) {
    const int code = app.exit(err);
    return code == 0 ? 0 : 1;
  }

  try {
    if (*s) return run_synth(synth);
    if (*t) return run_train(tr);
    if (*e) return run_extract(ex);
    if (*v) return run_sv_eval(sv);
    if (*w) return run_sweep(sw);
    if (*c) return run_convert(cv, false);
    if (*r) return run_convert(rc, true);
  } catch (const InvalidArgument& err) {
    std::cerr << "error: " << err.what() << "\n";
    return 1;
  } catch (const std::exception& err) {
    std::cerr << "error: " << err.what() << "\n";
    return 2;
  }
  return 1;
}
