// src/eval/eer.cc
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

#include "dsvae/eval/eer.h"

#include <algorithm>
#include <cmath>
#include <limits>

#include "dsvae/common/error.h"

namespace dsvae::eval {

EerResult compute_eer(std::span<const ScoredTrial> trials) {
  std::vector<ScoredTrial> sorted(trials.begin(), trials.end());
  EerResult r;
  for (const auto& t : sorted) {
    if (!std::isfinite(t.score)) throw InvalidArgument("non-finite trial score");
    (t.target ? r.targets : r.nontargets)++;
  }
  if (r.targets == 0 || r.nontargets == 0)
    throw InvalidArgument("EER needs at least one target and one nontarget trial");
  std::sort(sorted.begin(), sorted.end(),
            [](const ScoredTrial& a, const ScoredTrial& b) { return a.score > b.score; });

  const double p = static_cast<double>(r.targets);
  const double n = static_cast<double>(r.nontargets);
  // Walk thresholds from +inf downwards. At threshold θ every trial with
  // score >= θ is accepted.
  double prev_far = 0.0, prev_frr = 1.0;
  double prev_threshold = std::numeric_limits<double>::infinity();
  std::size_t accepted_targets = 0, accepted_nontargets = 0;
  std::size_t i = 0;
  while (i < sorted.size()) {
    const double theta = sorted[i].score;
    for (; i < sorted.size() && sorted[i].score == theta; ++i)
      (sorted[i].target ? accepted_targets : accepted_nontargets)++;
    const double far = static_cast<double>(accepted_nontargets) / n;
    const double frr = static_cast<double>(r.targets - accepted_targets) / p;
    if (frr <= far) {
      const double d_prev = prev_frr - prev_far;  // > 0
      const double d_cur = frr - far;             // <= 0
      const double w = d_prev / (d_prev - d_cur);
      r.eer = prev_far + w * (far - prev_far);
      r.threshold = std::isinf(prev_threshold)
                        ? theta
                        : prev_threshold + w * (theta - prev_threshold);
      if (d_cur == 0.0) {
        r.eer = far;
        r.threshold = theta;
      }
      return r;
    }
    prev_far = far;
    prev_frr = frr;
    prev_threshold = theta;
  }
  // Unreachable: at the lowest score everything is accepted, FRR = 0.
  throw Error("compute_eer: no crossing found");
}

EerResult compute_eer(std::span<const double> target_scores,
                      std::span<const double> nontarget_scores) {
  std::vector<ScoredTrial> trials;
  trials.reserve(target_scores.size() + nontarget_scores.size());
  for (double s : target_scores) trials.push_back({true, s});
  for (double s : nontarget_scores) trials.push_back({false, s});
  return compute_eer(trials);
}

}  // namespace dsvae::eval
