// src/ad/checkpoint.cc
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

#include "dsvae/ad/checkpoint.h"

#include <fstream>
#include <map>
#include <sstream>

#include "dsvae/common/error.h"
#include "dsvae/common/io_util.h"

namespace dsvae::ad {

namespace {
constexpr std::string_view kMagic = "DSVAE1";
}

void save_checkpoint(const std::string& path, const std::string& config_text,
                     const ParamList& params) {
  std::ostringstream os;
  io::write_bytes(os, kMagic);
  io::write_u32(os, kCheckpointVersion);
  io::write_string(os, config_text);
  for (const auto& p : params) {
    io::write_string(os, p.name);
    io::write_u32(os, static_cast<std::uint32_t>(p.tensor.rank()));
    for (auto e : p.tensor.shape()) io::write_u32(os, static_cast<std::uint32_t>(e));
    for (double v : p.tensor.data()) io::write_f64(os, v);
  }
  // Write-then-rename so a crash never leaves a truncated checkpoint behind.
  const std::string tmp = path + ".tmp";
  io::write_text_file(tmp, os.str());
  if (std::rename(tmp.c_str(), path.c_str()) != 0)
    throw IoError("cannot rename '" + tmp + "' to '" + path + "'");
}

Checkpoint load_checkpoint(const std::string& path) {
  std::istringstream in(io::read_text_file(path));
  Checkpoint ck;
  try {
    if (io::read_bytes(in, kMagic.size()) != kMagic)
      throw IoError("bad magic, not a DSVAE1 checkpoint");
    const std::uint32_t version = io::read_u32(in);
    if (version != kCheckpointVersion)
      throw IoError("unsupported checkpoint version " + std::to_string(version));
    ck.config_text = io::read_string(in);
    while (in.peek() != std::char_traits<char>::eof()) {
      NamedParam p;
      p.name = io::read_string(in);
      const std::uint32_t rank = io::read_u32(in);
      if (rank == 0 || rank > 8) throw IoError("bad rank for " + p.name);
      Shape shape(rank);
      for (auto& e : shape) e = io::read_u32(in);
      std::vector<double> values(numel(shape));
      for (double& v : values) v = io::read_f64(in);
      p.tensor = Tensor(std::move(shape), std::move(values), true);
      ck.params.push_back(std::move(p));
    }
  } catch (const IoError& e) {
    throw IoError("'" + path + "': " + e.what());
  }
  return ck;
}

void assign_params(const ParamList& src, const ParamList& dst) {
  std::map<std::string, const Tensor*> by_name;
  for (const auto& p : src) by_name[p.name] = &p.tensor;
  for (const auto& p : dst) {
    auto it = by_name.find(p.name);
    if (it == by_name.end())
      throw InvalidArgument("checkpoint lacks parameter '" + p.name + "'");
    if (it->second->shape() != p.tensor.shape())
      throw InvalidArgument("parameter '" + p.name + "' has shape " +
                            to_string(it->second->shape()) +
                            " in checkpoint but " + to_string(p.tensor.shape()) +
                            " in model");
    Tensor t = p.tensor;
    std::copy(it->second->data().begin(), it->second->data().end(),
              t.data().begin());
  }
}

}  // namespace dsvae::ad
