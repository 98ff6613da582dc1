// src/eval/sweep.cc
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

#include "dsvae/eval/sweep.h"

#include <cmath>
#include <limits>
#include <sstream>

#include "dsvae/common/error.h"
#include "dsvae/common/io_util.h"
#include "dsvae/common/parallel.h"
#include "dsvae/dsp/segment.h"
#include "dsvae/eval/trials.h"
#include "dsvae/train/trainer.h"

namespace dsvae::eval {

EvalReport evaluate_model(const model::Dsvae& model, const dsp::FeatureConfig& features,
                          const std::vector<train::Utterance>& test, std::uint64_t seed,
                          std::size_t workers) {
  EvalReport r;
  r.embeddings = extract_embeddings(model, features, test, workers);
  r.eer_mu_s = all_pairs_eer(r.embeddings, EmbeddingKind::kSpeaker).eer;
  r.eer_mu_c = all_pairs_eer(r.embeddings, EmbeddingKind::kContent).eer;

  std::vector<dsp::Matrix> segments;
  const int seg_len = static_cast<int>(model.config().seg_len);
  for (const auto& u : test) {
    const auto frames = dsp::compute_features(u.wav, features).frames;
    for (auto& s : dsp::segment(frames, seg_len, dsp::SegmentMode::kTraining).segments)
      segments.push_back(std::move(s.frames));
  }
  if (segments.empty())
    throw InvalidArgument("no test utterance holds a full segment");
  const auto x = model::stack_segments(segments);
  std::mt19937_64 rng(seed);
  r.flow = model::info_flow_report(model, x, x, rng);
  return r;
}

std::vector<SweepRow> sweep_beta_alpha(const train::Dataset& train_data,
                                       const std::vector<train::Utterance>& test,
                                       const train::RunConfig& base,
                                       const std::vector<double>& ratios,
                                       const train::NoiseBank* noise,
                                       std::size_t workers) {
  if (ratios.empty()) throw InvalidArgument("sweep needs at least one ratio");
  for (double r : ratios)
    if (!(r > 0.0) || !std::isfinite(r))
      throw InvalidArgument("sweep ratios must be positive and finite");
  base.validate();
  std::vector<SweepRow> rows(ratios.size());
  parallel_for(
      ratios.size(),
      [&](std::size_t i) {
        SweepRow& row = rows[i];
        row.ratio = ratios[i];
        model::ModelConfig mc = base.model;
        mc.beta = ratios[i] * mc.alpha;
        train::TrainOptions opt;
        opt.noise = noise;
        try {
          const auto run = train::train(train_data, mc, base.train, opt);
          const auto rep = evaluate_model(run.model, train_data.features(), test,
                                          base.train.seed, 1);
          row.eer_mu_s = rep.eer_mu_s;
          row.eer_mu_c = rep.eer_mu_c;
          row.kl_speaker = rep.flow.kl_speaker;
          row.kl_content = rep.flow.kl_content;
          row.kl_sum = rep.flow.kl_speaker + rep.flow.kl_content;
          row.recon = rep.flow.recon_nll;
        } catch (const Diverged& e) {
          const double nan = std::numeric_limits<double>::quiet_NaN();
          row.eer_mu_s = row.eer_mu_c = row.kl_speaker = row.kl_content = row.kl_sum =
              row.recon = nan;
          row.status = std::string("diverged: ") + e.what();
        }
      },
      workers);
  return rows;
}

std::string sweep_tsv(const std::vector<SweepRow>& rows) {
  using io::format_double;
  std::ostringstream os;
  os << "ratio\teer_mu_s\teer_mu_c\tkl_speaker\tkl_content\tkl_sum\trecon\tstatus\n";
  for (const auto& r : rows) {
    std::string status = r.status;
    for (char& c : status)
      if (c == '\t' || c == '\n') c = ' ';
    os << format_double(r.ratio) << "\t" << format_double(r.eer_mu_s) << "\t"
       << format_double(r.eer_mu_c) << "\t" << format_double(r.kl_speaker) << "\t"
       << format_double(r.kl_content) << "\t" << format_double(r.kl_sum) << "\t"
       << format_double(r.recon) << "\t" << status << "\n";
  }
  return os.str();
}

std::vector<SweepRow> parse_sweep_tsv(const std::string& text) {
  std::istringstream is(text);
  std::string line;
  if (!std::getline(is, line) || line.rfind("ratio\t", 0) != 0)
    throw IoError("sweep report: missing header");
  std::vector<SweepRow> out;
  while (std::getline(is, line)) {
    if (io::trim(line).empty()) continue;
    const auto f = io::split(line, '\t');
    if (f.size() != 8) throw IoError("sweep report: expected 8 columns: " + line);
    SweepRow r;
    r.ratio = io::parse_double(f[0]);
    r.eer_mu_s = io::parse_double(f[1]);
    r.eer_mu_c = io::parse_double(f[2]);
    r.kl_speaker = io::parse_double(f[3]);
    r.kl_content = io::parse_double(f[4]);
    r.kl_sum = io::parse_double(f[5]);
    r.recon = io::parse_double(f[6]);
    r.status = f[7];
    out.push_back(std::move(r));
  }
  return out;
}

}  // namespace dsvae::eval
