// asrkit/error.h

// Copyright 2026  ASRKit Authors

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

#ifndef ASRKIT_ERROR_H_
#define ASRKIT_ERROR_H_

#include <stdexcept>
#include <string>

namespace asrkit {

// Error taxonomy shared by every module.  The CLI maps UsageError and
// ConfigError to exit code 1 and DataError/TrainError to exit code 2.

// Tensor extents that do not line up (matmul inner dims, tape shapes, ...).
class DimensionError : public std::runtime_error {
 public:
  explicit DimensionError(const std::string &msg) : std::runtime_error(msg) {}
};

// Structurally invalid configuration (bad dilation rate, heads not dividing
// the projected width, zero streams, ...).
class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(const std::string &msg) : std::runtime_error(msg) {}
};

// Invalid data contents (empty corpus, negative variance, unknown token id,
// missing LM score fields, unreadable checkpoints).
class DataError : public std::runtime_error {
 public:
  explicit DataError(const std::string &msg) : std::runtime_error(msg) {}
};

// Caller misuse of an API (step outside a schedule's range, empty grids,
// top_k < 1, BPE budget below the base symbol count).
class UsageError : public std::runtime_error {
 public:
  explicit UsageError(const std::string &msg) : std::runtime_error(msg) {}
};

// Runtime training failures (non-finite gradients).
class TrainError : public std::runtime_error {
 public:
  explicit TrainError(const std::string &msg) : std::runtime_error(msg) {}
};

}  // namespace asrkit

#endif  // ASRKIT_ERROR_H_
