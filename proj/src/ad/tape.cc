// src/ad/tape.cc
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

#include "dsvae/ad/tape.h"

#include "dsvae/common/error.h"

namespace dsvae::ad {

bool Tape::tracks(std::initializer_list<const Tensor*> inputs) const {
  if (!recording()) return false;
  for (const Tensor* t : inputs)
    if (t->requires_grad()) return true;
  return false;
}

void Tape::record(const char* op, Tensor& out, BackwardFn fn) {
  out.set_requires_grad(true);
  nodes_.push_back({op, out, std::move(fn)});
}

void Tape::backward(const Tensor& loss) {
  if (loss.size() != 1)
    throw InvalidArgument("backward: loss must be a scalar, got shape " +
                          to_string(loss.shape()));
  bool found = false;
  for (auto it = nodes_.rbegin(); it != nodes_.rend(); ++it)
    if (it->output.is(loss)) {
      found = true;
      break;
    }
  if (!found) throw InvalidArgument("backward: loss was not recorded on this tape");

  for (auto& n : nodes_) n.output.drop_grad();
  Tensor seed = loss;
  seed.grad_buffer()[0] = 1.0;
  for (auto it = nodes_.rbegin(); it != nodes_.rend(); ++it)
    if (it->output.has_grad()) it->backward(it->output);
}

}  // namespace dsvae::ad
