// src/dsp/mel.cc
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

#include "dsvae/dsp/mel.h"

#include <Eigen/SVD>
#include <cmath>
#include <map>
#include <mutex>
#include <tuple>

#include "dsvae/common/error.h"

namespace dsvae::dsp {

double hz_to_mel(double hz) { return 2595.0 * std::log10(1.0 + hz / 700.0); }
double mel_to_hz(double mel) {
  return 700.0 * (std::pow(10.0, mel / 2595.0) - 1.0);
}

MelFilterbank::MelFilterbank(Matrix weights) : weights_(std::move(weights)) {
  if (weights_.rows() == 0 || weights_.cols() == 0)
    throw InvalidArgument("mel filterbank must be non-empty");
  for (Eigen::Index r = 0; r < weights_.rows(); ++r) {
    if ((weights_.row(r).array() < 0.0).any())
      throw InvalidArgument("mel filterbank weights must be nonnegative");
    if (weights_.row(r).sum() <= 0.0)
      throw InvalidArgument("mel filter " + std::to_string(r) +
                            " has no support");
  }
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(
      weights_, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const auto& s = svd.singularValues();
  const double tol = 1e-10 * s(0) * std::max(weights_.rows(), weights_.cols());
  Eigen::VectorXd inv = Eigen::VectorXd::Zero(s.size());
  for (Eigen::Index i = 0; i < s.size(); ++i)
    if (s(i) > tol) inv(i) = 1.0 / s(i);
  pinv_ = svd.matrixV() * inv.asDiagonal() * svd.matrixU().transpose();
}

MelFilterbank MelFilterbank::make(int sample_rate, int fft_size, int num_mels,
                                  double fmin_hz, double fmax_hz) {
  if (num_mels < 1) throw InvalidArgument("num_mels must be positive");
  if (fmax_hz <= 0.0) fmax_hz = sample_rate / 2.0;
  const int bins = fft_size / 2 + 1;
  const double lo = hz_to_mel(fmin_hz), hi = hz_to_mel(fmax_hz);
  std::vector<double> edges(num_mels + 2);
  for (int i = 0; i < num_mels + 2; ++i)
    edges[i] = mel_to_hz(lo + (hi - lo) * i / (num_mels + 1));
  const double bin_hz = static_cast<double>(sample_rate) / fft_size;
  Matrix w = Matrix::Zero(num_mels, bins);
  for (int m = 0; m < num_mels; ++m) {
    const double left = edges[m], center = edges[m + 1], right = edges[m + 2];
    for (int k = 0; k < bins; ++k) {
      const double f = k * bin_hz;
      if (f > left && f < right)
        w(m, k) = f <= center ? (f - left) / (center - left)
                              : (right - f) / (right - center);
    }
    // A band narrower than a bin can fall between bin centres; give it the
    // nearest bin so every filter keeps positive mass.
    if (w.row(m).sum() <= 0.0) {
      const int k = std::min(bins - 1,
                             static_cast<int>(std::lround(center / bin_hz)));
      w(m, k) = 1.0;
    }
  }
  return MelFilterbank(std::move(w));
}

std::shared_ptr<const MelFilterbank> MelFilterbank::cached(
    const FeatureConfig& cfg) {
  static std::mutex mu;
  static std::map<std::tuple<int, int, int>,
                  std::shared_ptr<const MelFilterbank>>
      cache;
  const auto key = std::make_tuple(cfg.sample_rate, cfg.fft_size,
                                   cfg.feature_dim);
  std::lock_guard<std::mutex> lock(mu);
  auto it = cache.find(key);
  if (it != cache.end()) return it->second;
  auto fb = std::make_shared<const MelFilterbank>(
      make(cfg.sample_rate, cfg.fft_size, cfg.feature_dim));
  cache.emplace(key, fb);
  return fb;
}

Matrix mel_project(const Matrix& linear_mag, const MelFilterbank& fb) {
  if (linear_mag.cols() != fb.num_bins())
    throw InvalidArgument("mel_project: input has " +
                          std::to_string(linear_mag.cols()) +
                          " bins, filterbank expects " +
                          std::to_string(fb.num_bins()));
  Matrix out = linear_mag * fb.weights().transpose();
  for (Eigen::Index i = 0; i < out.size(); ++i)
    out.data()[i] = std::log(std::max(out.data()[i], kLogFloor));
  return out;
}

Matrix mel_to_linear(const Matrix& mel_mag, const MelFilterbank& fb) {
  if (mel_mag.cols() != fb.num_mels())
    throw InvalidArgument("mel_to_linear: dimension mismatch");
  Matrix out = mel_mag * fb.pseudo_inverse().transpose();
  return out.cwiseMax(0.0);
}

}  // namespace dsvae::dsp
