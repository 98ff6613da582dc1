// include/dsvae/eval/sweep.h
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

#ifndef DSVAE_EVAL_SWEEP_H_
#define DSVAE_EVAL_SWEEP_H_

#include <cstdint>
#include <string>
#include <vector>

#include "dsvae/eval/embeddings.h"
#include "dsvae/model/dsvae.h"
#include "dsvae/train/config_file.h"
#include "dsvae/train/dataset.h"

namespace dsvae::eval {

struct EvalReport {
  double eer_mu_s = 0.0;
  double eer_mu_c = 0.0;
  model::InfoFlowReport flow;  // over all full segments of the test set
  std::vector<UtteranceEmbedding> embeddings;
};

// All-pairs EERs of both embeddings plus the information-flow terms,
// measured on `test` (featurized with the normalization in `features`).
// Latent samples for the KL/recon terms come from `seed`.
EvalReport evaluate_model(const model::Dsvae& model, const dsp::FeatureConfig& features,
                          const std::vector<train::Utterance>& test,
                          std::uint64_t seed = 1, std::size_t workers = 0);

struct SweepRow {
  double ratio = 0.0;  // β/α
  double eer_mu_s = 0.0;
  double eer_mu_c = 0.0;
  double kl_speaker = 0.0;
  double kl_content = 0.0;
  double kl_sum = 0.0;  // kl_speaker + kl_content
  double recon = 0.0;
  std::string status = "ok";  // "ok" or "diverged: ..."
};

// One training run per ratio with β = ratio·α (α from `base`), the same
// seed, and therefore the same initialization and data order. A diverging
// run yields a row with status "diverged" and NaN metrics; the rest go on.
// Runs execute on up to `workers` threads, each with its own model.
std::vector<SweepRow> sweep_beta_alpha(const train::Dataset& train_data,
                                       const std::vector<train::Utterance>& test,
                                       const train::RunConfig& base,
                                       const std::vector<double>& ratios,
                                       const train::NoiseBank* noise = nullptr,
                                       std::size_t workers = 0);

// Columns: ratio, eer_mu_s, eer_mu_c, kl_speaker, kl_content, kl_sum,
// recon, status; one header line.
std::string sweep_tsv(const std::vector<SweepRow>& rows);
std::vector<SweepRow> parse_sweep_tsv(const std::string& text);

}  // namespace dsvae::eval

#endif  // DSVAE_EVAL_SWEEP_H_
