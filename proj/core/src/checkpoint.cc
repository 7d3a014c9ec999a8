// asrkit/checkpoint.cc

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

#include "asrkit/checkpoint.h"

#include <cstdint>
#include <cstring>
#include <fstream>

namespace asrkit {
namespace checkpoint {

namespace {

void put_f64_le(std::ofstream &out, double value) {
  uint64_t bits;
  std::memcpy(&bits, &value, sizeof(bits));
  unsigned char buf[8];
  for (int i = 0; i < 8; ++i) buf[i] = static_cast<unsigned char>((bits >> (8 * i)) & 0xFF);
  out.write(reinterpret_cast<const char *>(buf), 8);
}

double get_f64_le(std::ifstream &in) {
  unsigned char buf[8];
  in.read(reinterpret_cast<char *>(buf), 8);
  if (!in) throw DataError("checkpoint: truncated blob");
  uint64_t bits = 0;
  for (int i = 0; i < 8; ++i) bits |= static_cast<uint64_t>(buf[i]) << (8 * i);
  double value;
  std::memcpy(&value, &bits, sizeof(value));
  return value;
}

}  // namespace

void write(const std::string &prefix, nlohmann::json manifest,
           const std::vector<std::pair<std::string, const Tensor *>> &tensors) {
  nlohmann::json table = nlohmann::json::array();
  for (const auto &[name, tensor] : tensors) {
    table.push_back({{"name", name}, {"shape", tensor->shape()}});
  }
  manifest["tensors"] = table;

  std::ofstream mf(prefix + ".json", std::ios::binary);
  if (!mf) throw DataError("checkpoint: cannot write " + prefix + ".json");
  mf << manifest.dump(2) << "\n";

  std::ofstream bf(prefix + ".bin", std::ios::binary);
  if (!bf) throw DataError("checkpoint: cannot write " + prefix + ".bin");
  for (const auto &[name, tensor] : tensors) {
    (void)name;
    for (int64_t i = 0; i < tensor->size(); ++i) put_f64_le(bf, tensor->data()[i]);
  }
}

Loaded read(const std::string &prefix) {
  std::ifstream mf(prefix + ".json", std::ios::binary);
  if (!mf) throw DataError("checkpoint: cannot read " + prefix + ".json");
  nlohmann::json manifest = nlohmann::json::parse(mf, nullptr, false);
  if (manifest.is_discarded() || !manifest.contains("tensors")) {
    throw DataError("checkpoint: malformed manifest " + prefix + ".json");
  }

  std::ifstream bf(prefix + ".bin", std::ios::binary);
  if (!bf) throw DataError("checkpoint: cannot read " + prefix + ".bin");

  Loaded loaded;
  loaded.manifest = manifest;
  for (const auto &entry : manifest["tensors"]) {
    const std::string name = entry.at("name").get<std::string>();
    const std::vector<int> shape = entry.at("shape").get<std::vector<int>>();
    Tensor t(shape);
    for (int64_t i = 0; i < t.size(); ++i) t.data()[i] = get_f64_le(bf);
    loaded.tensors.emplace(name, std::move(t));
  }
  // A stray tail means the manifest and blob disagree.
  bf.peek();
  if (!bf.eof()) throw DataError("checkpoint: blob longer than manifest declares");
  return loaded;
}

}  // namespace checkpoint
}  // namespace asrkit
