// src/dsp/wav.cc
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

#include "dsvae/dsp/wav.h"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <numbers>
#include <sstream>

#include "dsvae/common/error.h"
#include "dsvae/common/io_util.h"

namespace dsvae::dsp {

void validate(const Waveform& w) {
  if (w.sample_rate <= 0)
    throw InvalidArgument("waveform sample_rate must be positive");
  for (double s : w.samples)
    if (!std::isfinite(s))
      throw InvalidArgument("waveform contains NaN or Inf samples");
}

Waveform read_wav(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path + "'");
  try {
    if (io::read_bytes(in, 4) != "RIFF") throw IoError("not a RIFF file");
    io::read_u32(in);
    if (io::read_bytes(in, 4) != "WAVE") throw IoError("not a WAVE file");

    std::uint16_t format = 0, channels = 0, bits = 0;
    std::uint32_t rate = 0;
    bool have_fmt = false;
    while (true) {
      const std::string id = io::read_bytes(in, 4);
      const std::uint32_t len = io::read_u32(in);
      if (id == "fmt ") {
        format = io::read_u16(in);
        channels = io::read_u16(in);
        rate = io::read_u32(in);
        io::read_u32(in);  // byte rate
        io::read_u16(in);  // block align
        bits = io::read_u16(in);
        if (len > 16) io::read_bytes(in, len - 16 + (len & 1));
        // WAVE_FORMAT_EXTENSIBLE: the real format tag lives in the
        // sub-format GUID; we only accept PCM / float there too.
        have_fmt = true;
      } else if (id == "data") {
        if (!have_fmt) throw IoError("data chunk before fmt chunk");
        if (channels != 1)
          throw InvalidArgument("'" + path + "': " + std::to_string(channels) +
                                " channels; only mono is supported");
        Waveform w;
        w.sample_rate = static_cast<int>(rate);
        const std::string raw = io::read_bytes(in, len);
        if (bits == 16 && (format == 1 || format == 0xFFFE)) {
          w.samples.resize(len / 2);
          for (std::size_t i = 0; i < w.samples.size(); ++i) {
            const auto lo = static_cast<std::uint8_t>(raw[2 * i]);
            const auto hi = static_cast<std::uint8_t>(raw[2 * i + 1]);
            const auto v = static_cast<std::int16_t>(lo | (hi << 8));
            w.samples[i] = v / 32768.0;
          }
        } else if (bits == 32 && (format == 3 || format == 0xFFFE)) {
          w.samples.resize(len / 4);
          for (std::size_t i = 0; i < w.samples.size(); ++i) {
            std::uint32_t u = 0;
            for (int b = 0; b < 4; ++b)
              u |= static_cast<std::uint32_t>(
                       static_cast<std::uint8_t>(raw[4 * i + b]))
                   << (8 * b);
            w.samples[i] = std::bit_cast<float>(u);
          }
        } else {
          throw InvalidArgument("'" + path + "': unsupported encoding (format " +
                                std::to_string(format) + ", " +
                                std::to_string(bits) + " bits)");
        }
        validate(w);
        return w;
      } else {
        io::read_bytes(in, len + (len & 1));
      }
    }
  } catch (const IoError& e) {
    throw IoError("'" + path + "': " + e.what());
  }
}

void write_wav(const std::string& path, const Waveform& w,
               WavEncoding encoding) {
  validate(w);
  const std::uint16_t bits = encoding == WavEncoding::kPcm16 ? 16 : 32;
  const std::uint16_t format = encoding == WavEncoding::kPcm16 ? 1 : 3;
  const std::uint32_t data_len =
      static_cast<std::uint32_t>(w.samples.size() * (bits / 8));
  std::ostringstream os;
  io::write_bytes(os, "RIFF");
  io::write_u32(os, 36 + data_len);
  io::write_bytes(os, "WAVE");
  io::write_bytes(os, "fmt ");
  io::write_u32(os, 16);
  io::write_u16(os, format);
  io::write_u16(os, 1);
  io::write_u32(os, static_cast<std::uint32_t>(w.sample_rate));
  io::write_u32(os, static_cast<std::uint32_t>(w.sample_rate) * (bits / 8));
  io::write_u16(os, bits / 8);
  io::write_u16(os, bits);
  io::write_bytes(os, "data");
  io::write_u32(os, data_len);
  for (double s : w.samples) {
    if (encoding == WavEncoding::kPcm16) {
      const double c = std::clamp(s, -1.0, 32767.0 / 32768.0);
      const auto v = static_cast<std::int16_t>(std::lround(c * 32768.0));
      io::write_u16(os, static_cast<std::uint16_t>(v));
    } else {
      io::write_u32(os, std::bit_cast<std::uint32_t>(static_cast<float>(s)));
    }
  }
  io::write_text_file(path, os.str());
}

Waveform decimate(const Waveform& w, int factor) {
  if (factor < 1) throw InvalidArgument("decimation factor must be >= 1");
  if (factor == 1) return w;
  // Hamming-windowed sinc lowpass at 0.9 × the new Nyquist.
  const int half = 16 * factor;
  const double cutoff = 0.9 / (2.0 * factor);
  std::vector<double> taps(2 * half + 1);
  double sum = 0.0;
  for (int i = -half; i <= half; ++i) {
    const double x = 2.0 * cutoff * i;
    const double sinc =
        i == 0 ? 1.0 : std::sin(std::numbers::pi * x) / (std::numbers::pi * x);
    const double win =
        0.54 + 0.46 * std::cos(std::numbers::pi * i / static_cast<double>(half));
    taps[i + half] = 2.0 * cutoff * sinc * win;
    sum += taps[i + half];
  }
  for (double& t : taps) t /= sum;

  Waveform out;
  out.sample_rate = w.sample_rate / factor;
  const auto n = static_cast<long>(w.samples.size());
  out.samples.reserve(n / factor + 1);
  for (long c = 0; c < n; c += factor) {
    double acc = 0.0;
    for (int k = -half; k <= half; ++k) {
      const long j = c - k;
      if (j >= 0 && j < n) acc += taps[k + half] * w.samples[j];
    }
    out.samples.push_back(acc);
  }
  return out;
}

Waveform to_rate(const Waveform& w, int target_rate) {
  if (w.sample_rate == target_rate) return w;
  if (target_rate <= 0 || w.sample_rate % target_rate != 0)
    throw InvalidArgument("sample rate " + std::to_string(w.sample_rate) +
                          " is not an integer multiple of " +
                          std::to_string(target_rate));
  return decimate(w, w.sample_rate / target_rate);
}

}  // namespace dsvae::dsp
