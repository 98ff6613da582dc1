// include/dsvae/train/dataset.h
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

#ifndef DSVAE_TRAIN_DATASET_H_
#define DSVAE_TRAIN_DATASET_H_

#include <map>
#include <random>
#include <string>
#include <vector>

#include "dsvae/ad/tensor.h"
#include "dsvae/dsp/features.h"
#include "dsvae/dsp/noise.h"
#include "dsvae/dsp/wav.h"

namespace dsvae::train {

struct Utterance {
  std::string id;       // file stem, e.g. "spk3_utt12"
  std::string speaker;  // metadata only
  dsp::Waveform wav;
};

// Speaker of a corpus file: the parent directory name when the file sits in
// a per-speaker subdirectory, otherwise the stem up to the first '_'.
std::string speaker_of(const std::string& relative_path);

struct CorpusScan {
  std::vector<Utterance> utterances;
  std::size_t skipped = 0;  // unreadable or malformed files
};

// All *.wav files below `dir`, sorted by path. Files that fail to load are
// counted, not fatal. Audio is brought to `sample_rate` by integer
// decimation.
CorpusScan read_corpus(const std::string& dir, int sample_rate);

// The last `per_speaker` utterances of every speaker (in input order) go to
// `test`, the rest to `train`. Throws when a speaker has no more than
// `per_speaker` utterances.
struct Split {
  std::vector<Utterance> train;
  std::vector<Utterance> test;
};
Split hold_out(const std::vector<Utterance>& utterances, std::size_t per_speaker);

// Noise bank: one list of waveforms per category.
using NoiseBank = std::map<std::string, std::vector<dsp::Waveform>>;

// Subdirectories of `dir` named after the categories, each holding WAVs.
NoiseBank read_noise_bank(const std::string& dir,
                          const std::vector<std::string>& categories,
                          int sample_rate);

// Where one training segment comes from.
struct SegmentRef {
  std::size_t utterance = 0;
  std::size_t start_frame = 0;
};

// Featurized training corpus. Features are normalized with statistics
// taken from these utterances only.
class Dataset {
 public:
  Dataset(std::vector<Utterance> utterances, dsp::FeatureConfig features,
          std::size_t seg_len);

  const dsp::FeatureConfig& features() const { return features_; }
  std::size_t seg_len() const { return seg_len_; }
  const std::vector<Utterance>& utterances() const { return utterances_; }
  // Normalized T_u × d features per utterance.
  const std::vector<dsp::Matrix>& frames() const { return frames_; }
  const std::vector<SegmentRef>& segments() const { return segments_; }
  std::vector<std::string> speakers() const;

  // seg_len × d normalized clean features of a segment.
  dsp::Matrix clean_segment(const SegmentRef& ref) const;
  // The same segment computed from the source waveform mixed with `noise`
  // at `snr_db`, normalized with the clean statistics.
  dsp::Matrix noisy_segment(const SegmentRef& ref, const dsp::Waveform& noise,
                            double snr_db, std::size_t noise_offset) const;

 private:
  dsp::FeatureConfig features_;
  std::size_t seg_len_;
  std::vector<Utterance> utterances_;
  std::vector<dsp::Matrix> frames_;
  std::vector<SegmentRef> segments_;
};

struct Batch {
  ad::Tensor clean;      // [T, B, d]
  ad::Tensor augmented;  // [T, B, d]; same values as clean without noise
  std::vector<std::string> speaker_labels;  // never read by the loss
  std::vector<double> snr_db;               // +inf when not augmented
};

// Without noise `bank`, augmented is a copy of clean. With it, every segment
// gets a uniformly chosen category, file, offset and SNR in
// [spec.snr_db_min, spec.snr_db_max].
Batch make_batch(const Dataset& data, const std::vector<SegmentRef>& refs,
                 const NoiseBank* bank, const dsp::NoiseMixSpec& spec,
                 std::mt19937_64& rng);

// Segment visiting order of one epoch: a seeded shuffle of all segments,
// truncated to `limit` when nonzero, cut into batches of `batch_size` (the
// last may be short).
std::vector<std::vector<SegmentRef>> epoch_batches(const Dataset& data,
                                                   std::size_t batch_size,
                                                   std::size_t limit,
                                                   std::mt19937_64& rng);

}  // namespace dsvae::train

#endif  // DSVAE_TRAIN_DATASET_H_
