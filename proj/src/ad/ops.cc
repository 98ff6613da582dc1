// src/ad/ops.cc
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

#include "dsvae/ad/ops.h"

#include <Eigen/Core>
#include <algorithm>
#include <cmath>

#include "dsvae/common/error.h"

namespace dsvae::ad {

namespace {

using RowMat =
    Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using MapMat = Eigen::Map<RowMat>;
using ConstMapMat = Eigen::Map<const RowMat>;

[[noreturn]] void shape_error(const char* op, const Tensor& a,
                              const Tensor& b) {
  throw InvalidArgument(std::string(op) + ": incompatible shapes " +
                        to_string(a.shape()) + " and " + to_string(b.shape()));
}

void require_same(const char* op, const Tensor& a, const Tensor& b) {
  if (a.shape() != b.shape()) shape_error(op, a, b);
}

std::size_t last_dim(const Tensor& t) { return t.shape().back(); }

// y = f(x) elementwise; dy/dx = df(x, y).
template <typename F, typename DF>
Tensor unary(Tape& tp, const char* op, const Tensor& a, F f, DF df) {
  Tensor out(a.shape());
  auto x = a.data();
  auto y = out.data();
  for (std::size_t i = 0; i < x.size(); ++i) y[i] = f(x[i]);
  if (tp.tracks({&a}))
    tp.record(op, out, [a, df](const Tensor& o) mutable {
      auto g = a.grad_buffer();
      auto go = o.grad();
      auto xs = a.data();
      auto ys = o.data();
      for (std::size_t i = 0; i < g.size(); ++i) g[i] += go[i] * df(xs[i], ys[i]);
    });
  return out;
}

}  // namespace

Tensor matmul(Tape& tp, const Tensor& a, const Tensor& b) {
  if (b.rank() != 2 || a.rank() < 1 || last_dim(a) != b.dim(0))
    shape_error("matmul", a, b);
  const auto k = b.dim(0), n = b.dim(1);
  const auto rows = a.size() / k;
  Shape out_shape = a.shape();
  out_shape.back() = n;
  Tensor out(out_shape);
  ConstMapMat A(a.data().data(), rows, k);
  ConstMapMat B(b.data().data(), k, n);
  MapMat(out.data().data(), rows, n).noalias() = A * B;
  if (tp.tracks({&a, &b}))
    tp.record("matmul", out, [a, b, rows, k, n](const Tensor& o) mutable {
      ConstMapMat G(o.grad().data(), rows, n);
      if (a.requires_grad())
        MapMat(a.grad_buffer().data(), rows, k).noalias() +=
            G * ConstMapMat(b.data().data(), k, n).transpose();
      if (b.requires_grad())
        MapMat(b.grad_buffer().data(), k, n).noalias() +=
            ConstMapMat(a.data().data(), rows, k).transpose() * G;
    });
  return out;
}

Tensor add(Tape& tp, const Tensor& a, const Tensor& b) {
  require_same("add", a, b);
  Tensor out(a.shape());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = a[i] + b[i];
  if (tp.tracks({&a, &b}))
    tp.record("add", out, [a, b](const Tensor& o) mutable {
      auto go = o.grad();
      if (a.requires_grad()) {
        auto g = a.grad_buffer();
        for (std::size_t i = 0; i < g.size(); ++i) g[i] += go[i];
      }
      if (b.requires_grad()) {
        auto g = b.grad_buffer();
        for (std::size_t i = 0; i < g.size(); ++i) g[i] += go[i];
      }
    });
  return out;
}

Tensor sub(Tape& tp, const Tensor& a, const Tensor& b) {
  require_same("sub", a, b);
  Tensor out(a.shape());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = a[i] - b[i];
  if (tp.tracks({&a, &b}))
    tp.record("sub", out, [a, b](const Tensor& o) mutable {
      auto go = o.grad();
      if (a.requires_grad()) {
        auto g = a.grad_buffer();
        for (std::size_t i = 0; i < g.size(); ++i) g[i] += go[i];
      }
      if (b.requires_grad()) {
        auto g = b.grad_buffer();
        for (std::size_t i = 0; i < g.size(); ++i) g[i] -= go[i];
      }
    });
  return out;
}

Tensor mul(Tape& tp, const Tensor& a, const Tensor& b) {
  require_same("mul", a, b);
  Tensor out(a.shape());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = a[i] * b[i];
  if (tp.tracks({&a, &b}))
    tp.record("mul", out, [a, b](const Tensor& o) mutable {
      auto go = o.grad();
      if (a.requires_grad()) {
        auto g = a.grad_buffer();
        for (std::size_t i = 0; i < g.size(); ++i) g[i] += go[i] * b[i];
      }
      if (b.requires_grad()) {
        auto g = b.grad_buffer();
        for (std::size_t i = 0; i < g.size(); ++i) g[i] += go[i] * a[i];
      }
    });
  return out;
}

Tensor add_bias(Tape& tp, const Tensor& a, const Tensor& bias) {
  if (bias.rank() != 1 || last_dim(a) != bias.dim(0))
    shape_error("add_bias", a, bias);
  const auto n = bias.dim(0);
  Tensor out(a.shape());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = a[i] + bias[i % n];
  if (tp.tracks({&a, &bias}))
    tp.record("add_bias", out, [a, bias, n](const Tensor& o) mutable {
      auto go = o.grad();
      if (a.requires_grad()) {
        auto g = a.grad_buffer();
        for (std::size_t i = 0; i < g.size(); ++i) g[i] += go[i];
      }
      if (bias.requires_grad()) {
        auto g = bias.grad_buffer();
        for (std::size_t i = 0; i < go.size(); ++i) g[i % n] += go[i];
      }
    });
  return out;
}

Tensor scale(Tape& tp, const Tensor& a, double s) {
  return unary(
      tp, "scale", a, [s](double x) { return s * x; },
      [s](double, double) { return s; });
}

Tensor tanh(Tape& tp, const Tensor& a) {
  return unary(
      tp, "tanh", a, [](double x) { return std::tanh(x); },
      [](double, double y) { return 1.0 - y * y; });
}

Tensor sigmoid(Tape& tp, const Tensor& a) {
  return unary(
      tp, "sigmoid", a, [](double x) { return 1.0 / (1.0 + std::exp(-x)); },
      [](double, double y) { return y * (1.0 - y); });
}

Tensor relu(Tape& tp, const Tensor& a) {
  return unary(
      tp, "relu", a, [](double x) { return x > 0.0 ? x : 0.0; },
      [](double x, double) { return x > 0.0 ? 1.0 : 0.0; });
}

Tensor exp(Tape& tp, const Tensor& a) {
  return unary(
      tp, "exp", a, [](double x) { return std::exp(x); },
      [](double, double y) { return y; });
}

Tensor square(Tape& tp, const Tensor& a) {
  return unary(
      tp, "square", a, [](double x) { return x * x; },
      [](double x, double) { return 2.0 * x; });
}

Tensor clamp(Tape& tp, const Tensor& a, double lo, double hi) {
  return unary(
      tp, "clamp", a, [lo, hi](double x) { return std::clamp(x, lo, hi); },
      [lo, hi](double x, double) { return x >= lo && x <= hi ? 1.0 : 0.0; });
}

Tensor sum(Tape& tp, const Tensor& a) {
  double acc = 0.0;
  for (double v : a.data()) acc += v;
  Tensor out = Tensor::scalar(acc);
  if (tp.tracks({&a}))
    tp.record("sum", out, [a](const Tensor& o) mutable {
      const double go = o.grad()[0];
      for (double& g : a.grad_buffer()) g += go;
    });
  return out;
}

Tensor mean(Tape& tp, const Tensor& a) {
  return scale(tp, sum(tp, a), 1.0 / static_cast<double>(a.size()));
}

Tensor concat_last(Tape& tp, const std::vector<Tensor>& parts) {
  if (parts.empty()) throw InvalidArgument("concat_last: no inputs");
  const Shape& ref = parts.front().shape();
  std::size_t width = 0;
  for (const auto& p : parts) {
    if (p.rank() != ref.size() ||
        !std::equal(ref.begin(), ref.end() - 1, p.shape().begin()))
      shape_error("concat_last", parts.front(), p);
    width += last_dim(p);
  }
  Shape out_shape = ref;
  out_shape.back() = width;
  Tensor out(out_shape);
  const std::size_t rows = out.size() / width;
  std::size_t offset = 0;
  for (const auto& p : parts) {
    const auto w = last_dim(p);
    for (std::size_t r = 0; r < rows; ++r)
      std::copy_n(p.data().begin() + r * w, w,
                  out.data().begin() + r * width + offset);
    offset += w;
  }
  bool track = false;
  for (const auto& p : parts) track = track || tp.tracks({&p});
  if (track)
    tp.record("concat_last", out, [parts, rows, width](const Tensor& o) mutable {
      auto go = o.grad();
      std::size_t off = 0;
      for (auto& p : parts) {
        const auto w = p.shape().back();
        if (p.requires_grad()) {
          auto g = p.grad_buffer();
          for (std::size_t r = 0; r < rows; ++r)
            for (std::size_t j = 0; j < w; ++j)
              g[r * w + j] += go[r * width + off + j];
        }
        off += w;
      }
    });
  return out;
}

Tensor mean_time(Tape& tp, const Tensor& a) {
  if (a.rank() < 1) throw InvalidArgument("mean_time: scalar input");
  const auto steps = a.dim(0);
  const auto stride = a.size() / steps;
  Shape out_shape = a.shape();
  out_shape[0] = 1;
  Tensor out(out_shape);
  for (std::size_t t = 0; t < steps; ++t)
    for (std::size_t j = 0; j < stride; ++j) out[j] += a[t * stride + j];
  for (std::size_t j = 0; j < stride; ++j) out[j] /= static_cast<double>(steps);
  if (tp.tracks({&a}))
    tp.record("mean_time", out, [a, steps, stride](const Tensor& o) mutable {
      auto go = o.grad();
      auto g = a.grad_buffer();
      const double inv = 1.0 / static_cast<double>(steps);
      for (std::size_t t = 0; t < steps; ++t)
        for (std::size_t j = 0; j < stride; ++j) g[t * stride + j] += go[j] * inv;
    });
  return out;
}

Tensor repeat_time(Tape& tp, const Tensor& a, std::size_t steps) {
  if (a.rank() < 1 || a.dim(0) != 1 || steps == 0)
    throw InvalidArgument("repeat_time: expected [1, ...], got " +
                          to_string(a.shape()));
  Shape out_shape = a.shape();
  out_shape[0] = steps;
  Tensor out(out_shape);
  const auto stride = a.size();
  for (std::size_t t = 0; t < steps; ++t)
    std::copy(a.data().begin(), a.data().end(), out.data().begin() + t * stride);
  if (tp.tracks({&a}))
    tp.record("repeat_time", out, [a, steps, stride](const Tensor& o) mutable {
      auto go = o.grad();
      auto g = a.grad_buffer();
      for (std::size_t t = 0; t < steps; ++t)
        for (std::size_t j = 0; j < stride; ++j) g[j] += go[t * stride + j];
    });
  return out;
}

Tensor shift_time(Tape& tp, const Tensor& a) {
  if (a.rank() < 1) throw InvalidArgument("shift_time: scalar input");
  const auto stride = a.size() / a.dim(0);
  Tensor out(a.shape());
  std::copy(a.data().begin(), a.data().end() - stride,
            out.data().begin() + stride);
  if (tp.tracks({&a}))
    tp.record("shift_time", out, [a, stride](const Tensor& o) mutable {
      auto go = o.grad();
      auto g = a.grad_buffer();
      for (std::size_t i = 0; i + stride < g.size(); ++i) g[i] += go[i + stride];
    });
  return out;
}

Tensor reshape(Tape& tp, const Tensor& a, Shape shape) {
  if (numel(shape) != a.size())
    throw InvalidArgument("reshape: cannot view " + to_string(a.shape()) +
                          " as " + to_string(shape));
  Tensor out(std::move(shape),
             std::vector<double>(a.data().begin(), a.data().end()));
  if (tp.tracks({&a}))
    tp.record("reshape", out, [a](const Tensor& o) mutable {
      auto go = o.grad();
      auto g = a.grad_buffer();
      for (std::size_t i = 0; i < g.size(); ++i) g[i] += go[i];
    });
  return out;
}

Tensor gaussian_kl(Tape& tp, const Tensor& mu_q, const Tensor& logvar_q,
                   const Tensor& mu_p, const Tensor& logvar_p) {
  require_same("gaussian_kl", mu_q, logvar_q);
  require_same("gaussian_kl", mu_q, mu_p);
  require_same("gaussian_kl", mu_q, logvar_p);
  // KL = ½[lv_p − lv_q + (e^{lv_q} + (μ_q − μ_p)²)·e^{−lv_p} − 1]
  Tensor out(mu_q.shape());
  for (std::size_t i = 0; i < out.size(); ++i) {
    const double d = mu_q[i] - mu_p[i];
    out[i] = 0.5 * (logvar_p[i] - logvar_q[i] +
                    (std::exp(logvar_q[i]) + d * d) * std::exp(-logvar_p[i]) -
                    1.0);
  }
  if (tp.tracks({&mu_q, &logvar_q, &mu_p, &logvar_p}))
    tp.record("gaussian_kl", out,
              [mu_q, logvar_q, mu_p, logvar_p](const Tensor& o) mutable {
                auto go = o.grad();
                const std::size_t n = go.size();
                std::span<double> g_mq, g_lq, g_mp, g_lp;
                if (mu_q.requires_grad()) g_mq = mu_q.grad_buffer();
                if (logvar_q.requires_grad()) g_lq = logvar_q.grad_buffer();
                if (mu_p.requires_grad()) g_mp = mu_p.grad_buffer();
                if (logvar_p.requires_grad()) g_lp = logvar_p.grad_buffer();
                for (std::size_t i = 0; i < n; ++i) {
                  const double inv_vp = std::exp(-logvar_p[i]);
                  const double d = mu_q[i] - mu_p[i];
                  const double vq = std::exp(logvar_q[i]);
                  if (!g_mq.empty()) g_mq[i] += go[i] * d * inv_vp;
                  if (!g_mp.empty()) g_mp[i] -= go[i] * d * inv_vp;
                  if (!g_lq.empty()) g_lq[i] += go[i] * 0.5 * (vq * inv_vp - 1.0);
                  if (!g_lp.empty())
                    g_lp[i] += go[i] * 0.5 * (1.0 - (vq + d * d) * inv_vp);
                }
              });
  return out;
}

}  // namespace dsvae::ad
