// asrkit/checkpoint.h

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

#ifndef ASRKIT_CHECKPOINT_H_
#define ASRKIT_CHECKPOINT_H_

#include <map>
#include <string>
#include <utility>
#include <vector>

#include "asrkit/tensor.h"
#include "json.hpp"

namespace asrkit {
namespace checkpoint {

// Checkpoints are a manifest JSON (<prefix>.json) plus one binary blob
// (<prefix>.bin) of 64-bit little-endian floats, concatenated in the
// manifest's tensor order.  Identical models serialize to identical bytes.

void write(const std::string &prefix, nlohmann::json manifest,
           const std::vector<std::pair<std::string, const Tensor *>> &tensors);

struct Loaded {
  nlohmann::json manifest;
  std::map<std::string, Tensor> tensors;
};

Loaded read(const std::string &prefix);

}  // namespace checkpoint
}  // namespace asrkit

#endif  // ASRKIT_CHECKPOINT_H_
