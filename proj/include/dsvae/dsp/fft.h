// include/dsvae/dsp/fft.h
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

#ifndef DSVAE_DSP_FFT_H_
#define DSVAE_DSP_FFT_H_

#include <complex>
#include <memory>
#include <span>

namespace dsvae::dsp {

// Real-input DFT of a fixed power-of-two size, backed by FFTW. Plans are
// created once per size and shared; execution is thread-safe.
class RealFft {
 public:
  explicit RealFft(int n);
  int size() const { return n_; }
  int bins() const { return n_ / 2 + 1; }

  // Unnormalized forward transform: out[k] = sum_n in[n] exp(-2πi kn/N).
  void forward(std::span<const double> in,
               std::span<std::complex<double>> out) const;
  // Normalized inverse (divides by N), so inverse(forward(x)) == x.
  void inverse(std::span<const std::complex<double>> in,
               std::span<double> out) const;

 private:
  struct Plans;
  int n_;
  std::shared_ptr<const Plans> plans_;
};

}  // namespace dsvae::dsp

#endif  // DSVAE_DSP_FFT_H_
