// include/dsvae/eval/eer.h
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

#ifndef DSVAE_EVAL_EER_H_
#define DSVAE_EVAL_EER_H_

#include <cstddef>
#include <span>
#include <vector>

namespace dsvae::eval {

struct ScoredTrial {
  bool target = false;
  double score = 0.0;
};

struct EerResult {
  double eer = 0.0;        // in [0, 1]
  double threshold = 0.0;  // interpolated score at the crossing
  std::size_t targets = 0;
  std::size_t nontargets = 0;
};

// A trial is accepted when score >= threshold. The ROC operating points are
// the thresholds at every distinct score plus +inf (nothing accepted). The
// EER is where the false-reject rate meets the false-accept rate, linearly
// interpolated between the two adjacent operating points that bracket the
// crossing. Throws InvalidArgument without both trial classes or on a
// non-finite score.
EerResult compute_eer(std::span<const ScoredTrial> trials);
EerResult compute_eer(std::span<const double> target_scores,
                      std::span<const double> nontarget_scores);

}  // namespace dsvae::eval

#endif  // DSVAE_EVAL_EER_H_
