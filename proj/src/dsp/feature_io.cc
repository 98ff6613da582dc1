// src/dsp/feature_io.cc
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

#include "dsvae/dsp/feature_io.h"

#include <fstream>

#include "dsvae/common/error.h"
#include "dsvae/common/io_util.h"

namespace dsvae::dsp {

namespace {
constexpr std::string_view kMagic = "DSFEAT1";
}

void write_feature_file(const std::string& path, const Matrix& frames) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write '" + path + "'");
  io::write_bytes(out, kMagic);
  io::write_u32(out, static_cast<std::uint32_t>(frames.rows()));
  io::write_u32(out, static_cast<std::uint32_t>(frames.cols()));
  for (Eigen::Index i = 0; i < frames.size(); ++i)
    io::write_f64(out, frames.data()[i]);
}

Matrix read_feature_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path + "'");
  try {
    if (io::read_bytes(in, kMagic.size()) != kMagic)
      throw IoError("bad magic, not a DSFEAT1 file");
    const std::uint32_t rows = io::read_u32(in);
    const std::uint32_t cols = io::read_u32(in);
    Matrix m(rows, cols);
    for (Eigen::Index i = 0; i < m.size(); ++i) m.data()[i] = io::read_f64(in);
    return m;
  } catch (const IoError& e) {
    throw IoError("'" + path + "': " + e.what());
  }
}

}  // namespace dsvae::dsp
