// tests/unit/ad_test.cc
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

#include <cmath>
#include <cstdio>
#include <cstring>
#include <filesystem>
#include <random>

#include "doctest.h"
#include "dsvae/ad/adam.h"
#include "dsvae/ad/checkpoint.h"
#include "dsvae/ad/layers.h"
#include "dsvae/ad/ops.h"
#include "dsvae/common/error.h"
#include "support/gradcheck.h"

using namespace dsvae;
using namespace dsvae::ad;

namespace {

Tensor random_tensor(Shape shape, std::uint64_t seed, bool grad = true,
                     double lo = -1.0, double hi = 1.0) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(lo, hi);
  Tensor t(std::move(shape), grad);
  for (double& v : t.data()) v = u(rng);
  return t;
}

// Weighted sum so every output element gets a distinct upstream gradient.
Tensor probe(Tape& tp, const Tensor& y) {
  Tensor w = random_tensor(y.shape(), 999, false);
  return sum(tp, mul(tp, y, w));
}

void expect_grads_ok(const std::function<Tensor(Tape&)>& f,
                     const ParamList& params) {
  const auto r = testing::check_gradients(f, params);
  INFO("worst: " << r.worst);
  CHECK(r.checked > 0);
  CHECK(r.max_rel_error < 1e-4);
}

}  // namespace

TEST_CASE("matmul by identity returns the other operand") {
  Tape tp;
  Tensor eye({3, 3});
  for (int i = 0; i < 3; ++i) eye[i * 3 + i] = 1.0;
  Tensor a = random_tensor({3, 4}, 1, false);
  Tensor y = matmul(tp, eye, a);
  for (std::size_t i = 0; i < a.size(); ++i) CHECK(y[i] == a[i]);
}

TEST_CASE("mean over time of a constant sequence is that constant") {
  Tape tp;
  Tensor x = Tensor::filled({7, 2, 3}, 0.625);
  Tensor m = mean_time(tp, x);
  CHECK(m.shape() == Shape{1, 2, 3});
  for (double v : m.data()) CHECK(v == doctest::Approx(0.625).epsilon(1e-15));
}

TEST_CASE("time convolution matches a naive sliding-window difference") {
  // Kernel taps (x[t-1], x[t], x[t+1]) = (1, -1, 0): backward difference.
  Tape tp;
  Tensor x = random_tensor({8, 1, 1}, 3, false);
  Tensor k({3, 1, 1}, {1.0, -1.0, 0.0});
  Tensor b({1});
  Tensor y = conv_time(tp, x, k, b);
  for (std::size_t t = 0; t < 8; ++t) {
    const double prev = t == 0 ? 0.0 : x[t - 1];
    CHECK(y[t] == doctest::Approx(prev - x[t]).epsilon(1e-15));
  }
}

TEST_CASE("shape mismatch names the op and both shapes") {
  Tape tp;
  Tensor a({2, 3}), b({4, 5});
  try {
    matmul(tp, a, b);
    FAIL("expected InvalidArgument");
  } catch (const InvalidArgument& e) {
    const std::string msg = e.what();
    CHECK(msg.find("matmul") != std::string::npos);
    CHECK(msg.find("[2,3]") != std::string::npos);
    CHECK(msg.find("[4,5]") != std::string::npos);
  }
}

TEST_CASE("backward of sum gives all ones; of half squared norm gives p") {
  Tensor p = random_tensor({4, 3}, 5);
  {
    Tape tp;
    Tensor l = sum(tp, p);
    tp.backward(l);
    for (double g : p.grad()) CHECK(g == 1.0);
  }
  p.drop_grad();
  {
    Tape tp;
    Tensor l = scale(tp, sum(tp, square(tp, p)), 0.5);
    tp.backward(l);
    for (std::size_t i = 0; i < p.size(); ++i)
      CHECK(p.grad()[i] == doctest::Approx(p[i]).epsilon(1e-14));
  }
}

TEST_CASE("repeated backward without zeroing accumulates leaf gradients") {
  Tensor p = random_tensor({5}, 6);
  Tape tp;
  Tensor l = sum(tp, tanh(tp, p));
  tp.backward(l);
  std::vector<double> once(p.grad().begin(), p.grad().end());
  tp.backward(l);
  for (std::size_t i = 0; i < p.size(); ++i)
    CHECK(p.grad()[i] == doctest::Approx(2.0 * once[i]).epsilon(1e-14));
}

TEST_CASE("backward rejects a non-scalar loss") {
  Tensor p = random_tensor({3}, 7);
  Tape tp;
  Tensor y = tanh(tp, p);
  CHECK_THROWS_AS(tp.backward(y), InvalidArgument);
}

TEST_CASE("no-grad tape records nothing") {
  Tensor p = random_tensor({3}, 8);
  Tape tp(Tape::Mode::kNoGrad);
  Tensor y = sum(tp, tanh(tp, p));
  CHECK(tp.size() == 0);
  CHECK_FALSE(y.requires_grad());
}

TEST_CASE("elementwise and structural ops pass finite-difference checks") {
  Tensor a = random_tensor({3, 2, 4}, 11);
  Tensor b = random_tensor({3, 2, 4}, 12);
  Tensor w = random_tensor({4, 5}, 13);
  Tensor bias = random_tensor({5}, 14);
  Tensor one = random_tensor({1, 2, 4}, 15);
  expect_grads_ok(
      [&](Tape& tp) {
        Tensor h = tanh(tp, add_bias(tp, matmul(tp, mul(tp, a, b), w), bias));
        Tensor s = sigmoid(tp, sub(tp, a, scale(tp, b, 0.3)));
        Tensor e = exp(tp, clamp(tp, b, -0.5, 0.5));
        Tensor cat = concat_last(tp, {h, s, e});
        Tensor pooled = mean_time(tp, cat);
        Tensor rep = repeat_time(tp, add(tp, one, one), 3);
        Tensor sh = shift_time(tp, mul(tp, rep, a));
        return add(tp, probe(tp, pooled),
                   add(tp, probe(tp, sh), mean(tp, square(tp, relu(tp, a)))));
      },
      {{"a", a}, {"b", b}, {"w", w}, {"bias", bias}, {"one", one}});
}

TEST_CASE("gaussian KL matches closed form values and gradients") {
  Tape tp;
  Tensor mu({1}, std::vector<double>{1.0}), lv({1}, std::vector<double>{0.0});
  Tensor zero({1}, std::vector<double>{0.0});
  CHECK(gaussian_kl(tp, mu, lv, zero, zero).item() ==
        doctest::Approx(0.5).epsilon(1e-15));
  CHECK(gaussian_kl(tp, zero, zero, zero, zero).item() == 0.0);

  Tensor mq = random_tensor({2, 3}, 21), lq = random_tensor({2, 3}, 22);
  Tensor mp = random_tensor({2, 3}, 23), lp = random_tensor({2, 3}, 24);
  expect_grads_ok(
      [&](Tape& t) { return probe(t, gaussian_kl(t, mq, lq, mp, lp)); },
      {{"mq", mq}, {"lq", lq}, {"mp", mp}, {"lp", lp}});
}

TEST_CASE("recurrent, conv and norm primitives pass finite-difference checks") {
  const std::size_t T = 4, B = 2, in = 3, h = 3;
  Tensor x = random_tensor({T, B, in}, 31);
  Tensor wx = random_tensor({in, 4 * h}, 32), wh = random_tensor({h, 4 * h}, 33);
  Tensor bl = random_tensor({4 * h}, 34);
  Tensor rx = random_tensor({in, h}, 35), rh = random_tensor({h, h}, 36);
  Tensor rb = random_tensor({h}, 37);
  Tensor k = random_tensor({5, in, 2}, 38), kb = random_tensor({2}, 39);
  for (bool reverse : {false, true}) {
    CAPTURE(reverse);
    expect_grads_ok(
        [&](Tape& tp) { return probe(tp, lstm(tp, x, wx, wh, bl, reverse)); },
        {{"x", x}, {"wx", wx}, {"wh", wh}, {"b", bl}});
    expect_grads_ok(
        [&](Tape& tp) {
          return probe(tp, rnn_tanh(tp, x, rx, rh, rb, reverse));
        },
        {{"x", x}, {"rx", rx}, {"rh", rh}, {"rb", rb}});
  }
  expect_grads_ok([&](Tape& tp) { return probe(tp, conv_time(tp, x, k, kb)); },
                  {{"x", x}, {"k", k}, {"kb", kb}});
  expect_grads_ok([&](Tape& tp) { return probe(tp, instance_norm(tp, x)); },
                  {{"x", x}});
}

TEST_CASE("every layer kind passes finite-difference checks in a composite") {
  const std::size_t T = 5, B = 2, d = 3;
  Tensor x = random_tensor({T, B, d}, 41);
  auto conv = build_layer({LayerKind::kConv, d, 4, 0, 1, 5}, 1);
  auto norm = build_layer({LayerKind::kInstanceNorm2d, 4}, 2);
  auto bi = build_layer({LayerKind::kBiLstm, 4, 0, 3, 2}, 3);
  auto uni = build_layer({LayerKind::kLstm, 6, 0, 3, 1}, 4);
  auto rnn = build_layer({LayerKind::kRnn, 3, 0, 2, 1}, 5);
  auto pool = build_layer({LayerKind::kTimeAvgPool, 2}, 6);
  auto lin = build_layer({LayerKind::kLinear, 2, 3}, 7);
  ParamList params{{"x", x}};
  conv->collect("conv", params);
  bi->collect("bi", params);
  uni->collect("uni", params);
  rnn->collect("rnn", params);
  lin->collect("lin", params);
  expect_grads_ok(
      [&](Tape& tp) {
        Tensor y = norm->forward(tp, conv->forward(tp, x));
        y = rnn->forward(tp, uni->forward(tp, bi->forward(tp, y)));
        return probe(tp, lin->forward(tp, pool->forward(tp, y)));
      },
      params);
}

TEST_CASE("bilstm output width is twice the hidden size") {
  auto bi = build_layer({LayerKind::kBiLstm, 8, 0, 512, 2}, 1);
  Tape tp(Tape::Mode::kNoGrad);
  Tensor y = bi->forward(tp, random_tensor({3, 1, 8}, 2, false));
  CHECK(y.shape() == Shape{3, 1, 1024});
  CHECK(bi->output_dim() == 1024);
}

TEST_CASE("time_avg_pool gives column means and ignores time order") {
  auto pool = build_layer({LayerKind::kTimeAvgPool, 3}, 1);
  Tensor x = random_tensor({4, 1, 3}, 9, false);
  Tensor shuffled({4, 1, 3});
  const std::size_t perm[] = {2, 0, 3, 1};
  for (std::size_t t = 0; t < 4; ++t)
    for (std::size_t j = 0; j < 3; ++j) shuffled[t * 3 + j] = x[perm[t] * 3 + j];
  Tape tp;
  Tensor a = pool->forward(tp, x), b = pool->forward(tp, shuffled);
  CHECK(a.shape() == Shape{1, 1, 3});
  for (std::size_t j = 0; j < 3; ++j) {
    double m = 0;
    for (std::size_t t = 0; t < 4; ++t) m += x[t * 3 + j];
    CHECK(a[j] == doctest::Approx(m / 4).epsilon(1e-14));
    CHECK(b[j] == doctest::Approx(a[j]).epsilon(1e-14));
  }
}

TEST_CASE("instance_norm_2d gives zero mean, unit variance per lane") {
  auto norm = build_layer({LayerKind::kInstanceNorm2d, 4}, 1);
  Tensor x = random_tensor({9, 3, 4}, 10, false, -3.0, 5.0);
  Tape tp;
  Tensor y = norm->forward(tp, x);
  for (std::size_t lane = 0; lane < 12; ++lane) {
    double m = 0, v = 0;
    for (std::size_t t = 0; t < 9; ++t) m += y[t * 12 + lane];
    m /= 9;
    for (std::size_t t = 0; t < 9; ++t) v += (y[t * 12 + lane] - m) * (y[t * 12 + lane] - m);
    v /= 9;
    CHECK(std::abs(m) < 1e-12);
    // Variance is var/(var+eps), a hair under one.
    CHECK(v == doctest::Approx(1.0).epsilon(1e-4));
    CHECK(v < 1.0);
  }
}

TEST_CASE("initialization follows the fan-based scheme and is seeded") {
  auto a = build_layer({LayerKind::kLstm, 6, 0, 5, 1}, 77);
  auto b = build_layer({LayerKind::kLstm, 6, 0, 5, 1}, 77);
  ParamList pa, pb;
  a->collect("l", pa);
  b->collect("l", pb);
  REQUIRE(pa.size() == 3);
  for (std::size_t i = 0; i < pa.size(); ++i) {
    CHECK(pa[i].name == pb[i].name);
    CHECK(std::equal(pa[i].tensor.data().begin(), pa[i].tensor.data().end(),
                     pb[i].tensor.data().begin()));
  }
  const double limit = std::sqrt(6.0 / (6 + 20));
  for (double v : pa[0].tensor.data()) CHECK(std::abs(v) <= limit);
  // Bias: zeros except the forget gate.
  const Tensor& bias = pa[2].tensor;
  for (std::size_t j = 0; j < 20; ++j)
    CHECK(bias[j] == (j >= 5 && j < 10 ? 1.0 : 0.0));
}

TEST_CASE("adam leaves parameters alone with zero gradient and no decay") {
  Tensor p = random_tensor({4}, 50);
  const std::vector<double> before(p.data().begin(), p.data().end());
  p.grad_buffer();
  AdamState st;
  st.options.weight_decay = 0.0;
  adam_step({{"p", p}}, st);
  CHECK(st.step == 1);
  for (std::size_t i = 0; i < 4; ++i) CHECK(p[i] == before[i]);
}

TEST_CASE("first adam step moves by lr times the gradient sign") {
  Tensor p({1}, {1.0}, true);
  p.grad_buffer()[0] = 1.0;
  AdamState st;
  st.options.learning_rate = 5e-4;
  st.options.weight_decay = 0.0;
  adam_step({{"p", p}}, st);
  // Bias-corrected first step: m̂ = g, v̂ = g², update lr·g/(|g| + eps).
  CHECK(p[0] == doctest::Approx(1.0 - 5e-4 / (1.0 + 1e-8)).epsilon(1e-15));
}

TEST_CASE("decoupled weight decay shrinks parameters toward zero") {
  Tensor p({1}, {2.0}, true);
  p.grad_buffer();
  AdamState st;
  st.options.learning_rate = 0.1;
  st.options.weight_decay = 0.5;
  adam_step({{"p", p}}, st);
  CHECK(p[0] == doctest::Approx(2.0 * (1.0 - 0.05)).epsilon(1e-15));
}

TEST_CASE("adam refuses a NaN gradient") {
  Tensor p({2}, {1.0, 2.0}, true);
  p.grad_buffer()[1] = std::nan("");
  AdamState st;
  CHECK_THROWS_AS(adam_step({{"p", p}}, st), Diverged);
  CHECK(p[0] == 1.0);
}

TEST_CASE("learning rate decays by 0.95 every five epochs") {
  CHECK(scheduled_learning_rate(5e-4, 0) == 5e-4);
  CHECK(scheduled_learning_rate(5e-4, 4) == 5e-4);
  CHECK(scheduled_learning_rate(5e-4, 5) == doctest::Approx(5e-4 * 0.95));
  CHECK(scheduled_learning_rate(5e-4, 10) ==
        doctest::Approx(5e-4 * 0.95 * 0.95).epsilon(1e-15));
}

TEST_CASE("checkpoint save and load is bit-exact") {
  auto layer = build_layer({LayerKind::kBiLstm, 3, 0, 4, 2}, 5);
  ParamList params;
  layer->collect("enc", params);
  params[0].tensor[0] = -0.0;
  params[0].tensor[1] = 1e-308;
  const auto path =
      (std::filesystem::temp_directory_path() / "dsvae_ad_test.ckpt").string();
  save_checkpoint(path, "alpha=1\nbeta=20\n", params);
  Checkpoint ck = load_checkpoint(path);
  CHECK(ck.config_text == "alpha=1\nbeta=20\n");
  REQUIRE(ck.params.size() == params.size());
  for (std::size_t i = 0; i < params.size(); ++i) {
    CHECK(ck.params[i].name == params[i].name);
    CHECK(ck.params[i].tensor.shape() == params[i].tensor.shape());
    CHECK(std::memcmp(ck.params[i].tensor.data().data(),
                      params[i].tensor.data().data(),
                      params[i].tensor.size() * sizeof(double)) == 0);
  }
  auto other = build_layer({LayerKind::kBiLstm, 3, 0, 4, 2}, 6);
  ParamList dst;
  other->collect("enc", dst);
  assign_params(ck.params, dst);
  CHECK(dst[3].tensor[2] == params[3].tensor[2]);
  std::filesystem::remove(path);
}

TEST_CASE("loading rejects a truncated checkpoint") {
  const auto path =
      (std::filesystem::temp_directory_path() / "dsvae_bad.ckpt").string();
  {
    std::FILE* f = std::fopen(path.c_str(), "wb");
    std::fputs("DSVAE1\x01", f);
    std::fclose(f);
  }
  CHECK_THROWS_AS(load_checkpoint(path), IoError);
  std::filesystem::remove(path);
}
