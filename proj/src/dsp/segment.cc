// src/dsp/segment.cc
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

#include "dsvae/dsp/segment.h"

#include "dsvae/common/error.h"

namespace dsvae::dsp {

Segmentation segment(const Matrix& frames, int seg_len, SegmentMode mode) {
  if (seg_len < 1) throw InvalidArgument("seg_len must be >= 1");
  const auto total = static_cast<int>(frames.rows());
  const int full = total / seg_len;
  const int rem = total - full * seg_len;
  Segmentation out;
  out.segments.reserve(full + 1);
  for (int k = 0; k < full; ++k)
    out.segments.push_back(
        {frames.middleRows(static_cast<Eigen::Index>(k) * seg_len, seg_len),
         seg_len});
  if (rem == 0) return out;
  if (mode == SegmentMode::kTraining) {
    out.dropped_frames = rem;
    return out;
  }
  Segment last{Matrix::Zero(seg_len, frames.cols()), rem};
  last.frames.topRows(rem) = frames.bottomRows(rem);
  out.segments.push_back(std::move(last));
  out.short_input = full == 0;
  return out;
}

Matrix concatenate(const std::vector<Segment>& segments) {
  if (segments.empty()) return Matrix();
  Eigen::Index rows = 0;
  for (const auto& s : segments) rows += s.true_length;
  Matrix out(rows, segments.front().frames.cols());
  Eigen::Index at = 0;
  for (const auto& s : segments) {
    out.middleRows(at, s.true_length) = s.frames.topRows(s.true_length);
    at += s.true_length;
  }
  return out;
}

}  // namespace dsvae::dsp
