// src/ad/recurrent.cc
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

#include <Eigen/Core>
#include <cmath>

#include "dsvae/ad/ops.h"
#include "dsvae/common/error.h"

namespace dsvae::ad {

namespace {

using RowMat =
    Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using MapMat = Eigen::Map<RowMat>;
using ConstMapMat = Eigen::Map<const RowMat>;

void check_recurrent(const char* op, const Tensor& x, const Tensor& w_x,
                     const Tensor& w_h, const Tensor& bias,
                     std::size_t gates) {
  if (x.rank() != 3 || w_x.rank() != 2 || w_h.rank() != 2 || bias.rank() != 1)
    throw InvalidArgument(std::string(op) + ": expected x [T,B,in], got " +
                          to_string(x.shape()) + ", w_x " +
                          to_string(w_x.shape()) + ", w_h " +
                          to_string(w_h.shape()));
  const auto h = w_h.dim(0);
  if (w_x.dim(0) != x.dim(2) || w_x.dim(1) != gates * h ||
      w_h.dim(1) != gates * h || bias.dim(0) != gates * h)
    throw InvalidArgument(std::string(op) + ": inconsistent shapes x " +
                          to_string(x.shape()) + ", w_x " +
                          to_string(w_x.shape()) + ", w_h " +
                          to_string(w_h.shape()) + ", bias " +
                          to_string(bias.shape()));
}

inline double sigm(double v) { return 1.0 / (1.0 + std::exp(-v)); }

// Time index of the s-th processed step.
inline std::size_t step_index(std::size_t s, std::size_t steps, bool reverse) {
  return reverse ? steps - 1 - s : s;
}

// Shared tail of both recurrent backward passes: given dA (pre-activation
// grads for every step), accumulate into x, w_x and bias.
void input_side_backward(const Tensor& x, const Tensor& w_x,
                         const Tensor& bias,
                         const RowMat& d_pre, std::size_t rows,
                         std::size_t in, std::size_t width) {
  if (x.requires_grad())
    MapMat(x.grad_buffer().data(), rows, in).noalias() +=
        d_pre * ConstMapMat(w_x.data().data(), in, width).transpose();
  if (w_x.requires_grad())
    MapMat(w_x.grad_buffer().data(), in, width).noalias() +=
        ConstMapMat(x.data().data(), rows, in).transpose() * d_pre;
  if (bias.requires_grad()) {
    Eigen::Map<Eigen::RowVectorXd>(bias.grad_buffer().data(), width) +=
        d_pre.colwise().sum();
  }
}

}  // namespace

Tensor lstm(Tape& tp, const Tensor& x, const Tensor& w_x, const Tensor& w_h,
            const Tensor& bias, bool reverse) {
  check_recurrent("lstm", x, w_x, w_h, bias, 4);
  const std::size_t steps = x.dim(0), batch = x.dim(1), in = x.dim(2);
  const std::size_t h = w_h.dim(0), width = 4 * h, rows = steps * batch;

  // Pre-activations from the input side for all steps at once.
  RowMat pre = ConstMapMat(x.data().data(), rows, in) *
               ConstMapMat(w_x.data().data(), in, width);
  pre.rowwise() +=
      Eigen::Map<const Eigen::RowVectorXd>(bias.data().data(), width);
  const ConstMapMat Wh(w_h.data().data(), h, width);

  auto acts = std::make_shared<RowMat>(rows, width);   // i, f, g, o
  auto cells = std::make_shared<RowMat>(rows, h);
  Tensor out({steps, batch, h});
  MapMat H(out.data().data(), rows, h);

  RowMat h_prev = RowMat::Zero(batch, h), c_prev = RowMat::Zero(batch, h);
  RowMat gates(batch, width);
  for (std::size_t s = 0; s < steps; ++s) {
    const std::size_t t = step_index(s, steps, reverse);
    gates.noalias() = pre.middleRows(t * batch, batch);
    gates.noalias() += h_prev * Wh;
    for (std::size_t b = 0; b < batch; ++b)
      for (std::size_t j = 0; j < h; ++j) {
        const double i_g = sigm(gates(b, j));
        const double f_g = sigm(gates(b, h + j));
        const double g_g = std::tanh(gates(b, 2 * h + j));
        const double o_g = sigm(gates(b, 3 * h + j));
        const double c = f_g * c_prev(b, j) + i_g * g_g;
        const std::size_t r = t * batch + b;
        (*acts)(r, j) = i_g;
        (*acts)(r, h + j) = f_g;
        (*acts)(r, 2 * h + j) = g_g;
        (*acts)(r, 3 * h + j) = o_g;
        (*cells)(r, j) = c;
        H(r, j) = o_g * std::tanh(c);
      }
    h_prev = H.middleRows(t * batch, batch);
    c_prev = cells->middleRows(t * batch, batch);
  }

  if (tp.tracks({&x, &w_x, &w_h, &bias}))
    tp.record("lstm", out,
              [x, w_x, w_h, bias, acts, cells, steps, batch, in, h, width, rows,
               reverse](const Tensor& o) mutable {
                const ConstMapMat G(o.grad().data(), rows, h);
                const ConstMapMat Hs(o.data().data(), rows, h);
                const ConstMapMat Wh(w_h.data().data(), h, width);
                RowMat d_pre(rows, width);
                RowMat dh_next = RowMat::Zero(batch, h);
                RowMat dc_next = RowMat::Zero(batch, h);
                RowMat dwh = RowMat::Zero(h, width);
                for (std::size_t s = steps; s-- > 0;) {
                  const std::size_t t = step_index(s, steps, reverse);
                  const bool first = s == 0;
                  const std::size_t tp_idx =
                      first ? 0 : step_index(s - 1, steps, reverse);
                  for (std::size_t b = 0; b < batch; ++b)
                    for (std::size_t j = 0; j < h; ++j) {
                      const std::size_t r = t * batch + b;
                      const double i_g = (*acts)(r, j);
                      const double f_g = (*acts)(r, h + j);
                      const double g_g = (*acts)(r, 2 * h + j);
                      const double o_g = (*acts)(r, 3 * h + j);
                      const double tc = std::tanh((*cells)(r, j));
                      const double c_prev =
                          first ? 0.0 : (*cells)(tp_idx * batch + b, j);
                      const double dh = G(r, j) + dh_next(b, j);
                      const double dc =
                          dh * o_g * (1.0 - tc * tc) + dc_next(b, j);
                      d_pre(r, j) = dc * g_g * i_g * (1.0 - i_g);
                      d_pre(r, h + j) = dc * c_prev * f_g * (1.0 - f_g);
                      d_pre(r, 2 * h + j) = dc * i_g * (1.0 - g_g * g_g);
                      d_pre(r, 3 * h + j) = dh * tc * o_g * (1.0 - o_g);
                      dc_next(b, j) = dc * f_g;
                    }
                  const auto dA = d_pre.middleRows(t * batch, batch);
                  dh_next.noalias() = dA * Wh.transpose();
                  if (!first)
                    dwh.noalias() +=
                        Hs.middleRows(tp_idx * batch, batch).transpose() * dA;
                }
                if (w_h.requires_grad())
                  MapMat(w_h.grad_buffer().data(), h, width) += dwh;
                input_side_backward(x, w_x, bias, d_pre, rows, in, width);
              });
  return out;
}

Tensor rnn_tanh(Tape& tp, const Tensor& x, const Tensor& w_x,
                const Tensor& w_h, const Tensor& bias, bool reverse) {
  check_recurrent("rnn_tanh", x, w_x, w_h, bias, 1);
  const std::size_t steps = x.dim(0), batch = x.dim(1), in = x.dim(2);
  const std::size_t h = w_h.dim(0), rows = steps * batch;

  RowMat pre = ConstMapMat(x.data().data(), rows, in) *
               ConstMapMat(w_x.data().data(), in, h);
  pre.rowwise() += Eigen::Map<const Eigen::RowVectorXd>(bias.data().data(), h);
  const ConstMapMat Wh(w_h.data().data(), h, h);

  Tensor out({steps, batch, h});
  MapMat H(out.data().data(), rows, h);
  RowMat h_prev = RowMat::Zero(batch, h);
  RowMat a(batch, h);
  for (std::size_t s = 0; s < steps; ++s) {
    const std::size_t t = step_index(s, steps, reverse);
    a.noalias() = pre.middleRows(t * batch, batch);
    a.noalias() += h_prev * Wh;
    H.middleRows(t * batch, batch) = a.array().tanh().matrix();
    h_prev = H.middleRows(t * batch, batch);
  }

  if (tp.tracks({&x, &w_x, &w_h, &bias}))
    tp.record("rnn_tanh", out,
              [x, w_x, w_h, bias, steps, batch, in, h, rows,
               reverse](const Tensor& o) mutable {
                const ConstMapMat G(o.grad().data(), rows, h);
                const ConstMapMat Hs(o.data().data(), rows, h);
                const ConstMapMat Wh(w_h.data().data(), h, h);
                RowMat d_pre(rows, h);
                RowMat dh_next = RowMat::Zero(batch, h);
                RowMat dwh = RowMat::Zero(h, h);
                for (std::size_t s = steps; s-- > 0;) {
                  const std::size_t t = step_index(s, steps, reverse);
                  const auto rows_t = Eigen::seqN(t * batch, batch);
                  auto dA = d_pre.middleRows(t * batch, batch);
                  dA = ((G(rows_t, Eigen::all) + dh_next).array() *
                        (1.0 - Hs(rows_t, Eigen::all).array().square()))
                           .matrix();
                  dh_next.noalias() = dA * Wh.transpose();
                  if (s > 0) {
                    const std::size_t tprev = step_index(s - 1, steps, reverse);
                    dwh.noalias() +=
                        Hs.middleRows(tprev * batch, batch).transpose() * dA;
                  }
                }
                if (w_h.requires_grad())
                  MapMat(w_h.grad_buffer().data(), h, h) += dwh;
                input_side_backward(x, w_x, bias, d_pre, rows, in, h);
              });
  return out;
}

}  // namespace dsvae::ad
