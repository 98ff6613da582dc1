// include/dsvae/ad/tape.h
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

#ifndef DSVAE_AD_TAPE_H_
#define DSVAE_AD_TAPE_H_

#include <functional>
#include <initializer_list>
#include <vector>

#include "dsvae/ad/tensor.h"

namespace dsvae::ad {

// Ordered record of primitive operations. Nodes are appended as ops execute,
// so the record is already topologically sorted; backward() walks it once
// in reverse.
//
// A tape and the intermediates on it belong to one thread.
class Tape {
 public:
  enum class Mode { kRecord, kNoGrad };

  // Receives the node's output; its grad() holds dLoss/dOutput. The closure
  // accumulates into the grad_buffer() of every input that requires grad.
  using BackwardFn = std::function<void(const Tensor& out)>;

  explicit Tape(Mode mode = Mode::kRecord) : mode_(mode) {}
  Tape(const Tape&) = delete;
  Tape& operator=(const Tape&) = delete;

  bool recording() const { return mode_ == Mode::kRecord; }

  // True when an op over `inputs` must be recorded.
  bool tracks(std::initializer_list<const Tensor*> inputs) const;

  // Records `out` as produced by `op`. Callers check tracks() first so that
  // no closure is built for untracked ops.
  void record(const char* op, Tensor& out, BackwardFn fn);

  // Fills dLoss/dp for every tracked leaf. Intermediate gradients on this
  // tape are reset first; leaf gradients accumulate across calls.
  void backward(const Tensor& loss);

  std::size_t size() const { return nodes_.size(); }
  void clear() { nodes_.clear(); }

 private:
  struct Node {
    const char* op;
    Tensor output;
    BackwardFn backward;
  };
  Mode mode_;
  std::vector<Node> nodes_;
};

}  // namespace dsvae::ad

#endif  // DSVAE_AD_TAPE_H_
