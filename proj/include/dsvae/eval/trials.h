// include/dsvae/eval/trials.h
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

#ifndef DSVAE_EVAL_TRIALS_H_
#define DSVAE_EVAL_TRIALS_H_

#include <cstdint>
#include <string>
#include <vector>

#include "dsvae/eval/eer.h"
#include "dsvae/eval/embeddings.h"

namespace dsvae::eval {

struct Trial {
  bool target = false;
  std::string utt_a;
  std::string utt_b;
  bool operator==(const Trial&) const = default;
};

enum class TrialMode { kAllPairs, kBalanced };

// kAllPairs: every unordered pair (i < j in input order), labeled by speaker
// equality. kBalanced: `per_class` target and `per_class` nontarget pairs
// drawn without replacement from the all-pairs list (all of a class when it
// has fewer). Throws with fewer than 2 utterances or fewer than 2 speakers.
std::vector<Trial> generate_trials(const std::vector<UtteranceEmbedding>& utts,
                                   TrialMode mode = TrialMode::kAllPairs,
                                   std::size_t per_class = 0,
                                   std::uint64_t seed = 1);

// Cosine score of the selected embeddings. Unknown ids are reported
// together in one InvalidArgument.
std::vector<ScoredTrial> score_trials(const std::vector<UtteranceEmbedding>& utts,
                                      const std::vector<Trial>& trials,
                                      EmbeddingKind kind);

// All-pairs trials scored and reduced to an EER in one call.
EerResult all_pairs_eer(const std::vector<UtteranceEmbedding>& utts,
                        EmbeddingKind kind);

// "<0|1> <utt_a> <utt_b>" per line.
void write_trials(const std::string& path, const std::vector<Trial>& trials);
std::vector<Trial> read_trials(const std::string& path);

}  // namespace dsvae::eval

#endif  // DSVAE_EVAL_TRIALS_H_
