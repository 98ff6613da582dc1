// include/dsvae/dsp/feature_io.h
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

#ifndef DSVAE_DSP_FEATURE_IO_H_
#define DSVAE_DSP_FEATURE_IO_H_

#include <string>

#include "dsvae/dsp/features.h"

namespace dsvae::dsp {

// Feature cache: "DSFEAT1", u32 T, u32 d, then T·d little-endian f64 values,
// row-major.
void write_feature_file(const std::string& path, const Matrix& frames);
Matrix read_feature_file(const std::string& path);

}  // namespace dsvae::dsp

#endif  // DSVAE_DSP_FEATURE_IO_H_
