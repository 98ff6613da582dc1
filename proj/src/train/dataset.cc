// src/train/dataset.cc
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

#include "dsvae/train/dataset.h"

#include <algorithm>
#include <filesystem>
#include <iostream>
#include <set>

#include "dsvae/common/error.h"
#include "dsvae/dsp/mel.h"
#include "dsvae/model/dsvae.h"

namespace dsvae::train {

namespace fs = std::filesystem;

std::string speaker_of(const std::string& relative_path) {
  const fs::path p(relative_path);
  if (p.has_parent_path() && !p.parent_path().empty())
    return p.parent_path().filename().string();
  const std::string stem = p.stem().string();
  const auto cut = stem.find('_');
  return cut == std::string::npos ? stem : stem.substr(0, cut);
}

namespace {

std::vector<fs::path> wav_files(const fs::path& dir) {
  if (!fs::is_directory(dir))
    throw IoError("not a directory: " + dir.string());
  std::vector<fs::path> out;
  for (const auto& e : fs::recursive_directory_iterator(dir)) {
    if (!e.is_regular_file()) continue;
    std::string ext = e.path().extension().string();
    std::transform(ext.begin(), ext.end(), ext.begin(), ::tolower);
    if (ext == ".wav") out.push_back(e.path());
  }
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace

CorpusScan read_corpus(const std::string& dir, int sample_rate) {
  CorpusScan scan;
  for (const auto& path : wav_files(dir)) {
    try {
      Utterance u;
      u.wav = dsp::to_rate(dsp::read_wav(path.string()), sample_rate);
      u.id = path.stem().string();
      u.speaker = speaker_of(fs::relative(path, dir).string());
      scan.utterances.push_back(std::move(u));
    } catch (const Error& e) {
      std::cerr << "warning: skipping " << path.string() << ": " << e.what()
                << "\n";
      ++scan.skipped;
    }
  }
  return scan;
}

Split hold_out(const std::vector<Utterance>& utterances, std::size_t per_speaker) {
  std::map<std::string, std::size_t> total, seen;
  for (const auto& u : utterances) ++total[u.speaker];
  for (const auto& [spk, n] : total)
    if (n <= per_speaker)
      throw InvalidArgument("speaker " + spk + " has " + std::to_string(n) +
                            " utterances; cannot hold out " + std::to_string(per_speaker));
  Split out;
  for (const auto& u : utterances)
    (seen[u.speaker]++ < total[u.speaker] - per_speaker ? out.train : out.test).push_back(u);
  return out;
}

NoiseBank read_noise_bank(const std::string& dir,
                          const std::vector<std::string>& categories,
                          int sample_rate) {
  NoiseBank bank;
  for (const auto& cat : categories) {
    const fs::path sub = fs::path(dir) / cat;
    if (!fs::is_directory(sub)) continue;
    for (const auto& path : wav_files(sub)) {
      dsp::Waveform w = dsp::to_rate(dsp::read_wav(path.string()), sample_rate);
      if (dsp::mean_power(w.samples) > 0.0) bank[cat].push_back(std::move(w));
    }
  }
  if (bank.empty())
    throw IoError("no usable noise files under " + dir + " for the requested categories");
  return bank;
}

Dataset::Dataset(std::vector<Utterance> utterances, dsp::FeatureConfig features,
                 std::size_t seg_len)
    : features_(std::move(features)),
      seg_len_(seg_len),
      utterances_(std::move(utterances)) {
  if (utterances_.empty()) throw InvalidArgument("empty corpus");
  if (seg_len_ < 1) throw InvalidArgument("seg_len must be >= 1");
  features_.normalization = {};
  features_.validate();
  std::set<std::string> ids;
  for (const auto& u : utterances_)
    if (!ids.insert(u.id).second)
      throw InvalidArgument("duplicate utterance id '" + u.id + "'");

  std::vector<dsp::Matrix> raw;
  raw.reserve(utterances_.size());
  for (const auto& u : utterances_) {
    const int frames = dsp::frame_count(u.wav.size(), features_);
    if (frames < 1) {
      raw.emplace_back(0, features_.feature_dim);
      continue;
    }
    raw.push_back(dsp::compute_features(u.wav, features_).frames);
  }
  std::vector<dsp::Matrix> usable;
  for (const auto& m : raw)
    if (m.rows() > 0) usable.push_back(m);
  if (usable.empty()) throw InvalidArgument("no utterance holds a single frame");
  features_.normalization = dsp::compute_normalization(usable);

  frames_ = std::move(raw);
  for (std::size_t i = 0; i < frames_.size(); ++i) {
    dsp::normalize(frames_[i], features_.normalization);
    const std::size_t n = static_cast<std::size_t>(frames_[i].rows()) / seg_len_;
    for (std::size_t k = 0; k < n; ++k) segments_.push_back({i, k * seg_len_});
  }
  if (segments_.empty())
    throw InvalidArgument("no utterance is long enough for one segment of " +
                          std::to_string(seg_len_) + " frames");
}

std::vector<std::string> Dataset::speakers() const {
  std::set<std::string> s;
  for (const auto& u : utterances_) s.insert(u.speaker);
  return {s.begin(), s.end()};
}

dsp::Matrix Dataset::clean_segment(const SegmentRef& ref) const {
  return frames_.at(ref.utterance)
      .middleRows(static_cast<Eigen::Index>(ref.start_frame),
                  static_cast<Eigen::Index>(seg_len_));
}

dsp::Matrix Dataset::noisy_segment(const SegmentRef& ref,
                                   const dsp::Waveform& noise, double snr_db,
                                   std::size_t noise_offset) const {
  const auto& wav = utterances_.at(ref.utterance).wav;
  const std::size_t hop = features_.hop_samples(), win = features_.win_samples();
  const std::size_t begin = ref.start_frame * hop;
  const std::size_t length = (seg_len_ - 1) * hop + win;
  dsp::Waveform piece;
  piece.sample_rate = wav.sample_rate;
  piece.samples.assign(wav.samples.begin() + static_cast<long>(begin),
                       wav.samples.begin() + static_cast<long>(begin + length));
  // A silent stretch has no defined SNR; it stays clean.
  if (dsp::mean_power(piece.samples) > 0.0)
    piece = dsp::mix_at_snr(piece, noise, snr_db, noise_offset);
  dsp::Matrix m = dsp::log_features(dsp::stft_magnitude(piece.samples, features_),
                                    features_,
                                    features_.kind == dsp::FeatureKind::kMel
                                        ? dsp::MelFilterbank::cached(features_).get()
                                        : nullptr);
  dsp::normalize(m, features_.normalization);
  return m;
}

Batch make_batch(const Dataset& data, const std::vector<SegmentRef>& refs,
                 const NoiseBank* bank, const dsp::NoiseMixSpec& spec,
                 std::mt19937_64& rng) {
  if (refs.empty()) throw InvalidArgument("make_batch: no segments");
  std::vector<dsp::Matrix> clean, noisy;
  Batch b;
  for (const auto& ref : refs) {
    clean.push_back(data.clean_segment(ref));
    b.speaker_labels.push_back(data.utterances()[ref.utterance].speaker);
    if (bank == nullptr) {
      b.snr_db.push_back(dsp::kSnrDisabled);
      continue;
    }
    std::vector<const std::vector<dsp::Waveform>*> cats;
    for (const auto& c : spec.categories)
      if (auto it = bank->find(c); it != bank->end() && !it->second.empty())
        cats.push_back(&it->second);
    if (cats.empty()) throw InvalidArgument("noise bank has none of the categories");
    const auto& pool =
        *cats[std::uniform_int_distribution<std::size_t>(0, cats.size() - 1)(rng)];
    const auto& nz =
        pool[std::uniform_int_distribution<std::size_t>(0, pool.size() - 1)(rng)];
    const double snr =
        std::uniform_real_distribution<double>(spec.snr_db_min, spec.snr_db_max)(rng);
    const std::size_t offset =
        std::uniform_int_distribution<std::size_t>(0, nz.size() - 1)(rng);
    noisy.push_back(data.noisy_segment(ref, nz, snr, offset));
    b.snr_db.push_back(snr);
  }
  b.clean = model::stack_segments(clean);
  b.augmented = bank == nullptr ? b.clean.clone() : model::stack_segments(noisy);
  return b;
}

std::vector<std::vector<SegmentRef>> epoch_batches(const Dataset& data,
                                                   std::size_t batch_size,
                                                   std::size_t limit,
                                                   std::mt19937_64& rng) {
  if (batch_size < 1) throw InvalidArgument("batch_size must be >= 1");
  std::vector<SegmentRef> order = data.segments();
  std::shuffle(order.begin(), order.end(), rng);
  if (limit > 0 && limit < order.size()) order.resize(limit);
  std::vector<std::vector<SegmentRef>> out;
  for (std::size_t i = 0; i < order.size(); i += batch_size)
    out.emplace_back(order.begin() + static_cast<long>(i),
                     order.begin() + static_cast<long>(std::min(i + batch_size, order.size())));
  return out;
}

}  // namespace dsvae::train
