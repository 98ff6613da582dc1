// include/dsvae/ad/ops.h
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

#ifndef DSVAE_AD_OPS_H_
#define DSVAE_AD_OPS_H_

#include <vector>

#include "dsvae/ad/tape.h"
#include "dsvae/ad/tensor.h"

// Differentiable primitives. Every op validates shapes (throwing
// InvalidArgument naming the op and the offending shapes) and records itself
// on the tape when any input requires grad.
//
// Sequence tensors are time-major: [T, B, features].
namespace dsvae::ad {

// a: [..., k], b: [k, n] → [..., n]. Leading axes of `a` are flattened.
Tensor matmul(Tape& tp, const Tensor& a, const Tensor& b);

Tensor add(Tape& tp, const Tensor& a, const Tensor& b);
Tensor sub(Tape& tp, const Tensor& a, const Tensor& b);
Tensor mul(Tape& tp, const Tensor& a, const Tensor& b);
// a: [..., n] + bias: [n].
Tensor add_bias(Tape& tp, const Tensor& a, const Tensor& bias);
Tensor scale(Tape& tp, const Tensor& a, double s);

Tensor tanh(Tape& tp, const Tensor& a);
Tensor sigmoid(Tape& tp, const Tensor& a);
Tensor relu(Tape& tp, const Tensor& a);
Tensor exp(Tape& tp, const Tensor& a);
Tensor square(Tape& tp, const Tensor& a);
// Gradient is zero where the input lies outside [lo, hi].
Tensor clamp(Tape& tp, const Tensor& a, double lo, double hi);

// Sum of all elements → shape [1].
Tensor sum(Tape& tp, const Tensor& a);
Tensor mean(Tape& tp, const Tensor& a);

// Concatenation along the last axis; all other extents must agree.
Tensor concat_last(Tape& tp, const std::vector<Tensor>& parts);
// Mean over axis 0, keeping it: [T, ...] → [1, ...].
Tensor mean_time(Tape& tp, const Tensor& a);
// [1, ...] → [T, ...].
Tensor repeat_time(Tape& tp, const Tensor& a, std::size_t steps);
// out[0] = 0, out[t] = a[t-1]; same shape as `a`.
Tensor shift_time(Tape& tp, const Tensor& a);
Tensor reshape(Tape& tp, const Tensor& a, Shape shape);

// Elementwise closed-form KL(N(mu_q, e^lv_q) ‖ N(mu_p, e^lv_p)).
Tensor gaussian_kl(Tape& tp, const Tensor& mu_q, const Tensor& logvar_q,
                   const Tensor& mu_p, const Tensor& logvar_p);

// LSTM over a whole sequence. x: [T, B, in], w_x: [in, 4h], w_h: [h, 4h],
// bias: [4h], gate order (input, forget, cell, output). Zero initial state.
// With `reverse`, time runs from T-1 down to 0; the output stays aligned
// with the input.
Tensor lstm(Tape& tp, const Tensor& x, const Tensor& w_x, const Tensor& w_h,
            const Tensor& bias, bool reverse = false);

// Elman recurrence h_t = tanh(x_t W_x + h_{t-1} W_h + b).
Tensor rnn_tanh(Tape& tp, const Tensor& x, const Tensor& w_x,
                const Tensor& w_h, const Tensor& bias, bool reverse = false);

// 1-D convolution along time with same padding and stride 1.
// x: [T, B, c_in], kernel: [K, c_in, c_out] (K odd), bias: [c_out].
Tensor conv_time(Tape& tp, const Tensor& x, const Tensor& kernel,
                 const Tensor& bias);

// Normalizes each (instance, channel) over time: x: [T, B, C].
Tensor instance_norm(Tape& tp, const Tensor& x, double eps = 1e-5);

}  // namespace dsvae::ad

#endif  // DSVAE_AD_OPS_H_
