// tests/support/gradcheck.h
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

#ifndef DSVAE_TESTS_SUPPORT_GRADCHECK_H_
#define DSVAE_TESTS_SUPPORT_GRADCHECK_H_

#include <algorithm>
#include <cmath>
#include <functional>
#include <string>
#include <vector>

#include "dsvae/ad/tape.h"
#include "dsvae/ad/tensor.h"

namespace dsvae::testing {

struct GradCheckResult {
  double max_rel_error = 0.0;
  std::string worst;  // "<param>[index]"
  std::size_t checked = 0;
};

// Relative error with a floor on the denominator so that entries whose true
// gradient is ~0 are judged on absolute error. Central differences at
// h = 1e-5 on an O(1) loss carry round-off near 1e-10, so the default floor
// of 1e-5 judges tiny entries at an absolute 1e-9.
inline double relative_error(double analytic, double numeric,
                             double floor = 1e-5) {
  return std::abs(analytic - numeric) /
         std::max({std::abs(analytic), std::abs(numeric), floor});
}

// Compares reverse-mode gradients against central finite differences.
// `loss` must build the whole graph on the tape it is given; it is called
// once in record mode and 2·N times in no-grad mode.
inline GradCheckResult check_gradients(
    const std::function<ad::Tensor(ad::Tape&)>& loss,
    const ad::ParamList& params, double h = 1e-5, double floor = 1e-5,
    std::size_t max_per_param = 0) {
  for (const auto& p : params) p.tensor.drop_grad();
  {
    ad::Tape tape;
    ad::Tensor l = loss(tape);
    tape.backward(l);
  }
  GradCheckResult r;
  for (const auto& p : params) {
    ad::Tensor t = p.tensor;
    std::vector<double> analytic(t.size(), 0.0);
    if (t.has_grad())
      std::copy(t.grad().begin(), t.grad().end(), analytic.begin());
    const std::size_t n = max_per_param == 0
                              ? t.size()
                              : std::min(t.size(), max_per_param);
    // Spread the probes over the tensor when sub-sampling.
    const std::size_t stride = std::max<std::size_t>(1, t.size() / n);
    for (std::size_t k = 0, i = 0; k < n && i < t.size(); ++k, i += stride) {
      const double orig = t[i];
      t[i] = orig + h;
      double up, down;
      {
        ad::Tape tape(ad::Tape::Mode::kNoGrad);
        up = loss(tape).item();
      }
      t[i] = orig - h;
      {
        ad::Tape tape(ad::Tape::Mode::kNoGrad);
        down = loss(tape).item();
      }
      t[i] = orig;
      const double numeric = (up - down) / (2.0 * h);
      const double err = relative_error(analytic[i], numeric, floor);
      ++r.checked;
      if (err > r.max_rel_error) {
        r.max_rel_error = err;
        r.worst = p.name + "[" + std::to_string(i) + "] analytic=" +
                  std::to_string(analytic[i]) +
                  " numeric=" + std::to_string(numeric) + " abs_diff=" +
                  std::to_string(std::abs(analytic[i] - numeric));
      }
    }
  }
  return r;
}

}  // namespace dsvae::testing

#endif  // DSVAE_TESTS_SUPPORT_GRADCHECK_H_
