// src/eval/trials.cc
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

#include "dsvae/eval/trials.h"

#include <algorithm>
#include <map>
#include <random>
#include <set>
#include <sstream>

#include "dsvae/common/error.h"
#include "dsvae/common/io_util.h"

namespace dsvae::eval {

std::vector<Trial> generate_trials(const std::vector<UtteranceEmbedding>& utts,
                                   TrialMode mode, std::size_t per_class,
                                   std::uint64_t seed) {
  if (utts.size() < 2) throw InvalidArgument("trials need at least 2 utterances");
  std::set<std::string> speakers;
  for (const auto& u : utts) speakers.insert(u.speaker_id);
  if (speakers.size() < 2) throw InvalidArgument("trials need at least 2 speakers");

  std::vector<Trial> all;
  all.reserve(utts.size() * (utts.size() - 1) / 2);
  for (std::size_t i = 0; i < utts.size(); ++i)
    for (std::size_t j = i + 1; j < utts.size(); ++j)
      all.push_back({utts[i].speaker_id == utts[j].speaker_id, utts[i].utt_id,
                     utts[j].utt_id});
  if (mode == TrialMode::kAllPairs) return all;

  std::vector<Trial> target, nontarget;
  for (auto& t : all) (t.target ? target : nontarget).push_back(std::move(t));
  std::mt19937_64 rng(seed);
  std::vector<Trial> out;
  for (auto* pool : {&target, &nontarget}) {
    std::shuffle(pool->begin(), pool->end(), rng);
    const std::size_t n = std::min(per_class, pool->size());
    out.insert(out.end(), pool->begin(), pool->begin() + static_cast<long>(n));
  }
  return out;
}

std::vector<ScoredTrial> score_trials(const std::vector<UtteranceEmbedding>& utts,
                                      const std::vector<Trial>& trials,
                                      EmbeddingKind kind) {
  std::map<std::string, const UtteranceEmbedding*> by_id;
  for (const auto& u : utts) by_id[u.utt_id] = &u;
  std::set<std::string> missing;
  for (const auto& t : trials)
    for (const auto* id : {&t.utt_a, &t.utt_b})
      if (!by_id.count(*id)) missing.insert(*id);
  if (!missing.empty()) {
    std::string list;
    for (const auto& m : missing) list += (list.empty() ? "" : ", ") + m;
    throw InvalidArgument("trials reference unknown utterances: " + list);
  }
  std::vector<ScoredTrial> out;
  out.reserve(trials.size());
  for (const auto& t : trials)
    out.push_back({t.target, cosine(select(*by_id[t.utt_a], kind),
                                    select(*by_id[t.utt_b], kind))});
  return out;
}

EerResult all_pairs_eer(const std::vector<UtteranceEmbedding>& utts,
                        EmbeddingKind kind) {
  return compute_eer(score_trials(utts, generate_trials(utts), kind));
}

void write_trials(const std::string& path, const std::vector<Trial>& trials) {
  std::ostringstream os;
  for (const auto& t : trials) {
    if (t.utt_a.find_first_of(" \t\n") != std::string::npos ||
        t.utt_b.find_first_of(" \t\n") != std::string::npos)
      throw InvalidArgument("utterance ids may not contain whitespace");
    os << (t.target ? 1 : 0) << " " << t.utt_a << " " << t.utt_b << "\n";
  }
  io::write_text_file(path, os.str());
}

std::vector<Trial> read_trials(const std::string& path) {
  std::istringstream is(io::read_text_file(path));
  std::vector<Trial> out;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(is, line)) {
    ++line_no;
    if (io::trim(line).empty()) continue;
    std::istringstream ls(line);
    std::string label, extra;
    Trial t;
    if (!(ls >> label >> t.utt_a >> t.utt_b) || (ls >> extra) ||
        (label != "0" && label != "1"))
      throw IoError(path + ":" + std::to_string(line_no) +
                    ": expected '<0|1> <utt_a> <utt_b>'");
    if (t.utt_a == t.utt_b)
      throw IoError(path + ":" + std::to_string(line_no) + ": trial pairs an utterance with itself");
    t.target = label == "1";
    out.push_back(std::move(t));
  }
  return out;
}

}  // namespace dsvae::eval
