// src/eval/synth.cc
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

#include "dsvae/eval/synth.h"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <random>
#include <sstream>

#include "dsvae/common/error.h"
#include "dsvae/common/io_util.h"
#include "dsvae/dsp/griffin_lim.h"
#include "dsvae/dsp/noise.h"

namespace dsvae::eval {

namespace {

constexpr double kEnvelopeStepHz = 10.0;
constexpr int kBlock = 80;            // samples per control update
constexpr double kCrossfadeS = 0.02;  // formant transition length
constexpr double kTargetRms = 0.1;

struct Phone {
  double freq[3];
  double bw[3];
  double gain[3];  // linear
};

std::mt19937_64 rng_for(std::uint64_t seed, std::uint32_t a, std::uint32_t b,
                        std::uint32_t c = 0) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed),
                    static_cast<std::uint32_t>(seed >> 32), a, b, c};
  return std::mt19937_64(seq);
}

double uniform(std::mt19937_64& rng, double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(rng);
}

// Zero-padded so that file-name order equals generation order.
std::string padded(std::size_t i, std::size_t count) {
  const std::string digits = std::to_string(count > 0 ? count - 1 : 0);
  std::string v = std::to_string(i);
  return std::string(digits.size() > v.size() ? digits.size() - v.size() : 0, '0') + v;
}

SpeakerProfile make_speaker(const SynthCorpusSpec& spec, std::mt19937_64& rng,
                            double f0) {
  SpeakerProfile p;
  p.f0_hz = f0;
  const double nyq = spec.sample_rate / 2.0;
  const std::size_t n = static_cast<std::size_t>(nyq / kEnvelopeStepHz) + 1;
  const double tilt = uniform(rng, -4.0, 4.0);  // dB per octave
  struct Bump {
    double center_oct, width_oct, db;
  };
  std::vector<Bump> bumps;
  for (int i = 0; i < 5; ++i)
    bumps.push_back({uniform(rng, std::log2(200.0), std::log2(0.9 * nyq)),
                     uniform(rng, 0.3, 0.8), uniform(rng, -spec.envelope_db, spec.envelope_db)});
  p.envelope_db.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double oct = std::log2(std::max(i * kEnvelopeStepHz, 50.0));
    double db = tilt * (oct - std::log2(500.0));
    for (const auto& b : bumps) {
      const double z = (oct - b.center_oct) / b.width_oct;
      db += b.db * std::exp(-0.5 * z * z);
    }
    p.envelope_db[i] = db;
  }
  return p;
}

std::vector<Phone> make_inventory(const SynthCorpusSpec& spec, std::mt19937_64& rng) {
  std::vector<Phone> out(spec.phones);
  for (auto& ph : out) {
    ph.freq[0] = uniform(rng, 250.0, 900.0);
    ph.freq[1] = uniform(rng, 900.0, 2600.0);
    ph.freq[2] = uniform(rng, 2400.0, 3800.0);
    for (int i = 0; i < 3; ++i) {
      ph.bw[i] = uniform(rng, spec.formant_bw_min, spec.formant_bw_max);
      ph.gain[i] = std::pow(10.0, uniform(rng, spec.formant_db_min, spec.formant_db_max) / 20.0);
    }
  }
  return out;
}

double envelope_gain(const SpeakerProfile& p, double f) {
  const double x = f / kEnvelopeStepHz;
  const auto i = static_cast<std::size_t>(x);
  if (i + 1 >= p.envelope_db.size()) return std::pow(10.0, p.envelope_db.back() / 20.0);
  const double frac = x - static_cast<double>(i);
  const double db = (1.0 - frac) * p.envelope_db[i] + frac * p.envelope_db[i + 1];
  return std::pow(10.0, db / 20.0);
}

double formant_gain(const Phone& ph, double f) {
  double g = 1.0;
  for (int i = 0; i < 3; ++i) {
    const double z = (f - ph.freq[i]) / ph.bw[i];
    g += ph.gain[i] * std::exp(-0.5 * z * z);
  }
  return g;
}

struct Voice {
  const SpeakerProfile* speaker;
  std::vector<double> samples;
  std::vector<std::size_t> phones;
};

// Harmonic synthesis of one talker for `n` samples.
Voice speak(const SpeakerProfile& spk, const std::vector<Phone>& inventory,
            const SynthCorpusSpec& spec, std::size_t n, std::mt19937_64& rng) {
  Voice v{&spk, std::vector<double>(n, 0.0), {}};
  const double sr = spec.sample_rate;
  // Phone boundaries in samples.
  std::vector<std::size_t> starts;
  std::size_t pos = 0;
  std::uniform_int_distribution<std::size_t> pick(0, inventory.size() - 1);
  while (pos < n) {
    std::size_t ph = pick(rng);
    while (!v.phones.empty() && ph == v.phones.back()) ph = pick(rng);
    v.phones.push_back(ph);
    starts.push_back(pos);
    pos += static_cast<std::size_t>(uniform(rng, spec.phone_min_ms, spec.phone_max_ms) * sr / 1000.0);
  }
  const double vib_rate = uniform(rng, 1.0, 3.0), vib_phase = uniform(rng, 0.0, 2 * M_PI);
  const double nyq = sr / 2.0;
  const std::size_t max_h = static_cast<std::size_t>((nyq - 200.0) / (0.7 * spk.f0_hz));
  std::vector<double> prev_amp(max_h + 1, 0.0), amp(max_h + 1, 0.0);
  double theta = uniform(rng, 0.0, 2 * M_PI);
  std::size_t seg = 0;
  bool first = true;
  for (std::size_t b0 = 0; b0 < n; b0 += kBlock) {
    const double t = static_cast<double>(b0) / sr;
    const double dur = static_cast<double>(n) / sr;
    const double f0 = spk.f0_hz *
                      (1.0 + spec.vibrato * std::sin(2 * M_PI * vib_rate * t + vib_phase)) *
                      (1.0 - spec.declination * t / dur);
    while (seg + 1 < starts.size() && starts[seg + 1] <= b0) ++seg;
    const double since = static_cast<double>(b0 - starts[seg]) / sr;
    const double w = seg == 0 ? 1.0 : std::min(1.0, since / kCrossfadeS);
    const Phone& cur = inventory[v.phones[seg]];
    const Phone& before = inventory[v.phones[seg == 0 ? 0 : seg - 1]];
    std::fill(amp.begin(), amp.end(), 0.0);
    for (std::size_t k = 1; k <= max_h && k * f0 < nyq - 100.0; ++k) {
      const double f = k * f0;
      amp[k] = envelope_gain(spk, f) *
               (w * formant_gain(cur, f) + (1.0 - w) * formant_gain(before, f));
    }
    if (first) prev_amp = amp;
    first = false;
    const std::size_t b1 = std::min(n, b0 + kBlock);
    const double dtheta = 2 * M_PI * f0 / sr;
    for (std::size_t i = b0; i < b1; ++i) {
      const double a = static_cast<double>(i - b0) / kBlock;
      // sin(kθ) by the Chebyshev recurrence.
      const double c2 = 2.0 * std::cos(theta);
      double s_prev = 0.0, s_cur = std::sin(theta), acc = 0.0;
      for (std::size_t k = 1; k <= max_h; ++k) {
        acc += ((1.0 - a) * prev_amp[k] + a * amp[k]) * s_cur;
        const double s_next = c2 * s_cur - s_prev;
        s_prev = s_cur;
        s_cur = s_next;
      }
      v.samples[i] = acc;
      theta = std::fmod(theta + dtheta, 2 * M_PI);
    }
    prev_amp = amp;
  }
  return v;
}

void scale_to_rms(std::vector<double>& x, double rms) {
  const double p = dsp::mean_power(x);
  if (p <= 0.0) return;
  const double g = rms / std::sqrt(p);
  for (double& s : x) s *= g;
}

void add_floor(std::vector<double>& x, double db, std::mt19937_64& rng) {
  std::normal_distribution<double> g(0.0, std::sqrt(dsp::mean_power(x)) * std::pow(10.0, db / 20.0));
  for (double& s : x) s += g(rng);
}

// White noise coloured by the speaker envelope: the aspiration component.
std::vector<double> breath(const SpeakerProfile& spk, int sample_rate, std::size_t n,
                           std::mt19937_64& rng) {
  dsp::FeatureConfig cfg = dsp::FeatureConfig::timit();
  cfg.sample_rate = sample_rate;
  cfg.feature_dim = 1;
  const std::size_t win = static_cast<std::size_t>(cfg.win_samples());
  std::normal_distribution<double> g(0.0, 1.0);
  std::vector<double> white(n + 2 * win);
  for (double& v : white) v = g(rng);
  auto spec = dsp::stft(white, cfg);
  const double bin_hz = static_cast<double>(sample_rate) / cfg.fft_size;
  for (Eigen::Index j = 0; j < spec.cols(); ++j)
    spec.col(j) *= envelope_gain(spk, static_cast<double>(j) * bin_hz);
  auto y = dsp::istft(spec, cfg);
  return {y.begin() + static_cast<long>(win), y.begin() + static_cast<long>(win + n)};
}

void quantize(std::vector<double>& x) {
  for (double& s : x)
    s = std::lround(std::clamp(s, -1.0, 32767.0 / 32768.0) * 32768.0) / 32768.0;
}

std::vector<SpeakerProfile> make_speakers(const SynthCorpusSpec& spec, std::uint64_t seed,
                                          std::uint32_t stream, std::size_t count) {
  // Base f0 values are stratified over 90..260 Hz, then shuffled.
  auto rng = rng_for(seed, stream, 0);
  std::vector<double> f0;
  for (std::size_t i = 0; i < count; ++i)
    f0.push_back(90.0 + 170.0 * (i + uniform(rng, 0.2, 0.8)) / static_cast<double>(count));
  std::shuffle(f0.begin(), f0.end(), rng);
  std::vector<SpeakerProfile> out;
  for (std::size_t i = 0; i < count; ++i) {
    auto r = rng_for(seed, stream, 1, static_cast<std::uint32_t>(i));
    out.push_back(make_speaker(spec, r, f0[i]));
    out.back().id = "spk" + padded(i, count);
  }
  return out;
}

}  // namespace

void SynthCorpusSpec::validate() const {
  if (speakers < 2) throw InvalidArgument("synthetic corpus needs >= 2 speakers");
  if (utts_per_speaker < 1) throw InvalidArgument("utts_per_speaker must be >= 1");
  if (!(duration_s > 0.05)) throw InvalidArgument("duration_s must exceed 0.05");
  if (sample_rate < 8000) throw InvalidArgument("sample_rate must be >= 8000");
  if (phones < 2) throw InvalidArgument("phone inventory needs >= 2 entries");
  if (!(phone_min_ms > 0.0 && phone_max_ms > phone_min_ms))
    throw InvalidArgument("phone durations must satisfy 0 < min < max");
  if (!(formant_db_max >= formant_db_min && formant_bw_min > 0.0 &&
        formant_bw_max >= formant_bw_min))
    throw InvalidArgument("formant ranges must satisfy min <= max, bandwidth > 0");
  if (!(vibrato >= 0.0 && vibrato < 0.5 && declination >= 0.0 && declination < 0.5))
    throw InvalidArgument("vibrato and declination must be in [0, 0.5)");
}

SynthCorpus synth_corpus(const SynthCorpusSpec& spec, std::uint64_t seed) {
  spec.validate();
  SynthCorpus c;
  c.speakers = make_speakers(spec, seed, 1, spec.speakers);
  auto inv_rng = rng_for(seed, 2, 0);
  const auto inventory = make_inventory(spec, inv_rng);
  const auto n = static_cast<std::size_t>(spec.duration_s * spec.sample_rate);
  for (std::size_t s = 0; s < spec.speakers; ++s) {
    for (std::size_t u = 0; u < spec.utts_per_speaker; ++u) {
      auto rng = rng_for(seed, 3, static_cast<std::uint32_t>(s), static_cast<std::uint32_t>(u));
      Voice v = speak(c.speakers[s], inventory, spec, n, rng);
      scale_to_rms(v.samples, kTargetRms);
      auto air = breath(c.speakers[s], spec.sample_rate, n, rng);
      scale_to_rms(air, kTargetRms * std::pow(10.0, spec.breath_db / 20.0));
      for (std::size_t i = 0; i < n; ++i) v.samples[i] += air[i];
      scale_to_rms(v.samples, kTargetRms);
      add_floor(v.samples, spec.noise_floor_db, rng);
      quantize(v.samples);
      SynthUtterance su;
      su.utterance.speaker = c.speakers[s].id;
      su.utterance.id = su.utterance.speaker + "_utt" + padded(u, spec.utts_per_speaker);
      su.utterance.wav = {std::move(v.samples), spec.sample_rate};
      su.phones = std::move(v.phones);
      c.utterances.push_back(std::move(su));
    }
  }
  return c;
}

std::vector<train::Utterance> utterances_of(const SynthCorpus& corpus) {
  std::vector<train::Utterance> out;
  for (const auto& u : corpus.utterances) out.push_back(u.utterance);
  return out;
}

void write_synth_corpus(const std::string& dir, const SynthCorpus& corpus) {
  namespace fs = std::filesystem;
  fs::create_directories(dir);
  std::map<std::string, double> f0;
  for (const auto& s : corpus.speakers) f0[s.id] = s.f0_hz;
  std::ostringstream manifest;
  manifest << "utt_id\tspeaker_id\tf0_hz\tphones\n";
  for (const auto& u : corpus.utterances) {
    dsp::write_wav((fs::path(dir) / (u.utterance.id + ".wav")).string(), u.utterance.wav);
    manifest << u.utterance.id << "\t" << u.utterance.speaker << "\t"
             << io::format_double(f0.at(u.utterance.speaker)) << "\t";
    for (std::size_t i = 0; i < u.phones.size(); ++i)
      manifest << (i ? "," : "") << u.phones[i];
    manifest << "\n";
  }
  io::write_text_file((fs::path(dir) / "manifest.tsv").string(), manifest.str());
}

train::NoiseBank synth_noise_bank(int sample_rate, std::size_t files, double seconds,
                                  std::uint64_t seed) {
  const auto n = static_cast<std::size_t>(seconds * sample_rate);
  if (files < 1 || n < 1) throw InvalidArgument("noise bank needs >= 1 non-empty file");
  train::NoiseBank bank;
  const double sr = sample_rate;
  for (std::size_t f = 0; f < files; ++f) {
    {
      auto rng = rng_for(seed, 10, static_cast<std::uint32_t>(f));
      std::normal_distribution<double> g(0.0, 1.0);
      const double a = uniform(rng, 0.0, 0.95);
      std::vector<double> x(n);
      double y = 0.0;
      for (auto& s : x) s = y = a * y + (1.0 - a) * g(rng);
      scale_to_rms(x, kTargetRms);
      quantize(x);
      bank["noise"].push_back({std::move(x), sample_rate});
    }
    {
      auto rng = rng_for(seed, 11, static_cast<std::uint32_t>(f));
      std::vector<double> x(n, 0.0);
      std::size_t pos = 0;
      while (pos < n) {
        const auto len = static_cast<std::size_t>(uniform(rng, 0.2, 0.6) * sr);
        const int voices = std::uniform_int_distribution<int>(1, 3)(rng);
        for (int v = 0; v < voices; ++v) {
          const double note = 110.0 * std::pow(2.0, std::uniform_int_distribution<int>(0, 36)(rng) / 12.0);
          for (std::size_t i = pos; i < std::min(n, pos + len); ++i) {
            const double t = static_cast<double>(i - pos) / sr;
            const double env = std::exp(-3.0 * t);
            for (int k = 1; k <= 6 && k * note < sr / 2; ++k)
              x[i] += env / k * std::sin(2 * M_PI * k * note * t);
          }
        }
        pos += len;
      }
      scale_to_rms(x, kTargetRms);
      quantize(x);
      bank["music"].push_back({std::move(x), sample_rate});
    }
    {
      SynthCorpusSpec talk;
      talk.sample_rate = sample_rate;
      // Talkers come from a stream no corpus speaker uses.
      const auto talkers = make_speakers(talk, seed, 12 + static_cast<std::uint32_t>(f) * 2, 4);
      auto inv_rng = rng_for(seed, 13 + static_cast<std::uint32_t>(f) * 2, 0);
      const auto inventory = make_inventory(talk, inv_rng);
      std::vector<double> x(n, 0.0);
      for (std::size_t k = 0; k < talkers.size(); ++k) {
        auto rng = rng_for(seed, 14, static_cast<std::uint32_t>(f), static_cast<std::uint32_t>(k));
        auto v = speak(talkers[k], inventory, talk, n, rng);
        scale_to_rms(v.samples, kTargetRms);
        for (std::size_t i = 0; i < n; ++i) x[i] += v.samples[i];
      }
      scale_to_rms(x, kTargetRms);
      quantize(x);
      bank["babble"].push_back({std::move(x), sample_rate});
    }
  }
  return bank;
}

void write_noise_bank(const std::string& dir, const train::NoiseBank& bank) {
  namespace fs = std::filesystem;
  for (const auto& [cat, waves] : bank) {
    const auto sub = fs::path(dir) / cat;
    fs::create_directories(sub);
    for (std::size_t i = 0; i < waves.size(); ++i)
      dsp::write_wav((sub / (cat + "_" + std::to_string(i) + ".wav")).string(), waves[i]);
  }
}

std::vector<double> long_term_spectrum(const dsp::Waveform& w,
                                       const dsp::FeatureConfig& cfg) {
  const auto mag = dsp::stft_magnitude(w.samples, cfg);
  if (mag.rows() < 1) throw InvalidArgument("input too short for a spectrum");
  const Eigen::Index bins = std::min<Eigen::Index>(mag.cols(), cfg.feature_dim);
  std::vector<double> out(static_cast<std::size_t>(bins));
  for (Eigen::Index j = 0; j < bins; ++j)
    out[static_cast<std::size_t>(j)] =
        10.0 * std::log10(std::max(mag.col(j).squaredNorm() / mag.rows(), 1e-20));
  return out;
}

}  // namespace dsvae::eval
