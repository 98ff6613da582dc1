// tests/support/eer_oracle.h
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

#ifndef DSVAE_TESTS_SUPPORT_EER_ORACLE_H_
#define DSVAE_TESTS_SUPPORT_EER_ORACLE_H_

#include <algorithm>
#include <limits>
#include <set>
#include <vector>

namespace dsvae::testing {

// Exhaustive threshold sweep. Every distinct score (and +inf) is tried as
// an acceptance threshold, counting rates from scratch; the ROC polyline in
// (FAR, FRR) is then intersected with the diagonal FRR = FAR, taking the
// first segment that reaches it.
inline double brute_force_eer(const std::vector<double>& tgt,
                              const std::vector<double>& non) {
  std::set<double, std::greater<>> thresholds(tgt.begin(), tgt.end());
  thresholds.insert(non.begin(), non.end());
  thresholds.insert(std::numeric_limits<double>::infinity());
  struct Point {
    double far, frr;
  };
  std::vector<Point> roc;
  for (double th : thresholds) {
    double fa = 0, fr = 0;
    for (double s : non) fa += s >= th ? 1 : 0;
    for (double s : tgt) fr += s < th ? 1 : 0;
    roc.push_back({fa / non.size(), fr / tgt.size()});
  }
  for (std::size_t i = 0; i < roc.size(); ++i) {
    if (roc[i].frr == roc[i].far) return roc[i].far;
    if (i + 1 < roc.size() && roc[i].frr > roc[i].far && roc[i + 1].frr < roc[i + 1].far) {
      // P(s) = A + s·(B − A); solve frr(s) = far(s).
      const Point a = roc[i], b = roc[i + 1];
      const double s = (a.frr - a.far) / ((a.frr - a.far) - (b.frr - b.far));
      return a.far + s * (b.far - a.far);
    }
  }
  return std::numeric_limits<double>::quiet_NaN();
}

}  // namespace dsvae::testing

#endif  // DSVAE_TESTS_SUPPORT_EER_ORACLE_H_
