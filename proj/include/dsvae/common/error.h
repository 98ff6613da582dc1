// include/dsvae/common/error.h
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

#ifndef DSVAE_COMMON_ERROR_H_
#define DSVAE_COMMON_ERROR_H_

#include <stdexcept>
#include <string>

namespace dsvae {

// Base of every exception thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Bad configuration, shape mismatch, precondition violation. The CLI maps
// these to exit code 1.
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

// File system / format failures. Exit code 2.
class IoError : public Error {
 public:
  using Error::Error;
};

// NaN or Inf reached the loss or a gradient. Exit code 2.
class Diverged : public Error {
 public:
  explicit Diverged(const std::string& where)
      : Error("diverged: " + where) {}
};

}  // namespace dsvae

#endif  // DSVAE_COMMON_ERROR_H_
