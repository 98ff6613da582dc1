// include/dsvae/dsp/segment.h
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

#ifndef DSVAE_DSP_SEGMENT_H_
#define DSVAE_DSP_SEGMENT_H_

#include <vector>

#include "dsvae/dsp/features.h"

namespace dsvae::dsp {

enum class SegmentMode {
  kTraining,   // drop the trailing remainder
  kInference,  // zero-pad the trailing remainder, keep its true length
};

struct Segment {
  Matrix frames;  // always seg_len rows
  int true_length = 0;
};

struct Segmentation {
  std::vector<Segment> segments;
  int dropped_frames = 0;
  // Inference input shorter than one segment: the single segment is padding
  // beyond `true_length`.
  bool short_input = false;
};

// Consecutive non-overlapping windows of seg_len frames.
Segmentation segment(const Matrix& frames, int seg_len, SegmentMode mode);

// Inverse of inference-mode segmentation: concatenates true-length rows.
Matrix concatenate(const std::vector<Segment>& segments);

}  // namespace dsvae::dsp

#endif  // DSVAE_DSP_SEGMENT_H_
