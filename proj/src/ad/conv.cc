// src/ad/conv.cc
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

// Output steps [first, first + count) read input steps shifted by `offset`.
struct TapRange {
  std::size_t first = 0;
  std::size_t count = 0;
};

TapRange tap_range(std::size_t steps, long offset) {
  const long lo = std::max(0L, -offset);
  const long hi = std::min(static_cast<long>(steps), static_cast<long>(steps) - offset);
  if (hi <= lo) return {};
  return {static_cast<std::size_t>(lo), static_cast<std::size_t>(hi - lo)};
}

}  // namespace

Tensor conv_time(Tape& tp, const Tensor& x, const Tensor& kernel,
                 const Tensor& bias) {
  if (x.rank() != 3 || kernel.rank() != 3 || bias.rank() != 1 ||
      kernel.dim(1) != x.dim(2) || bias.dim(0) != kernel.dim(2) ||
      kernel.dim(0) % 2 == 0)
    throw InvalidArgument("conv_time: incompatible shapes x " +
                          to_string(x.shape()) + ", kernel " +
                          to_string(kernel.shape()) + ", bias " +
                          to_string(bias.shape()));
  const std::size_t steps = x.dim(0), batch = x.dim(1), c_in = x.dim(2);
  const std::size_t taps = kernel.dim(0), c_out = kernel.dim(2);
  const long half = static_cast<long>(taps / 2);

  Tensor out({steps, batch, c_out});
  MapMat Y(out.data().data(), steps * batch, c_out);
  Y.rowwise() = Eigen::Map<const Eigen::RowVectorXd>(bias.data().data(), c_out);
  const ConstMapMat X(x.data().data(), steps * batch, c_in);
  for (std::size_t k = 0; k < taps; ++k) {
    const long offset = static_cast<long>(k) - half;
    const auto r = tap_range(steps, offset);
    if (r.count == 0) continue;
    const ConstMapMat Wk(kernel.data().data() + k * c_in * c_out, c_in, c_out);
    Y.middleRows(r.first * batch, r.count * batch).noalias() +=
        X.middleRows((r.first + offset) * batch, r.count * batch) * Wk;
  }

  if (tp.tracks({&x, &kernel, &bias}))
    tp.record("conv_time", out,
              [x, kernel, bias, steps, batch, c_in, c_out, taps,
               half](const Tensor& o) mutable {
                const ConstMapMat G(o.grad().data(), steps * batch, c_out);
                const ConstMapMat X(x.data().data(), steps * batch, c_in);
                for (std::size_t k = 0; k < taps; ++k) {
                  const long offset = static_cast<long>(k) - half;
                  const auto r = tap_range(steps, offset);
                  if (r.count == 0) continue;
                  const auto g_rows =
                      G.middleRows(r.first * batch, r.count * batch);
                  const std::size_t x_first = (r.first + offset) * batch;
                  if (x.requires_grad()) {
                    const ConstMapMat Wk(kernel.data().data() + k * c_in * c_out,
                                         c_in, c_out);
                    MapMat(x.grad_buffer().data(), steps * batch, c_in)
                        .middleRows(x_first, r.count * batch)
                        .noalias() += g_rows * Wk.transpose();
                  }
                  if (kernel.requires_grad())
                    MapMat(kernel.grad_buffer().data() + k * c_in * c_out, c_in,
                           c_out)
                        .noalias() +=
                        X.middleRows(x_first, r.count * batch).transpose() *
                        g_rows;
                }
                if (bias.requires_grad())
                  Eigen::Map<Eigen::RowVectorXd>(bias.grad_buffer().data(),
                                                 c_out) += G.colwise().sum();
              });
  return out;
}

Tensor instance_norm(Tape& tp, const Tensor& x, double eps) {
  if (x.rank() != 3)
    throw InvalidArgument("instance_norm: expected [T,B,C], got " +
                          to_string(x.shape()));
  const std::size_t steps = x.dim(0), lanes = x.dim(1) * x.dim(2);
  Tensor out(x.shape());
  auto inv_std = std::make_shared<std::vector<double>>(lanes);
  for (std::size_t j = 0; j < lanes; ++j) {
    double mu = 0.0;
    for (std::size_t t = 0; t < steps; ++t) mu += x[t * lanes + j];
    mu /= static_cast<double>(steps);
    double var = 0.0;
    for (std::size_t t = 0; t < steps; ++t) {
      const double d = x[t * lanes + j] - mu;
      var += d * d;
    }
    var /= static_cast<double>(steps);
    const double is = 1.0 / std::sqrt(var + eps);
    (*inv_std)[j] = is;
    for (std::size_t t = 0; t < steps; ++t)
      out[t * lanes + j] = (x[t * lanes + j] - mu) * is;
  }
  if (tp.tracks({&x}))
    tp.record("instance_norm", out,
              [x, inv_std, steps, lanes](const Tensor& o) mutable {
                auto go = o.grad();
                auto y = o.data();
                auto g = x.grad_buffer();
                const double n = static_cast<double>(steps);
                for (std::size_t j = 0; j < lanes; ++j) {
                  double mean_g = 0.0, mean_gy = 0.0;
                  for (std::size_t t = 0; t < steps; ++t) {
                    mean_g += go[t * lanes + j];
                    mean_gy += go[t * lanes + j] * y[t * lanes + j];
                  }
                  mean_g /= n;
                  mean_gy /= n;
                  for (std::size_t t = 0; t < steps; ++t) {
                    const std::size_t i = t * lanes + j;
                    g[i] += (*inv_std)[j] * (go[i] - mean_g - y[i] * mean_gy);
                  }
                }
              });
  return out;
}

}  // namespace dsvae::ad
